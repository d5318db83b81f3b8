use dslkit::classifiers::{
    model_from_json, model_to_json, train_linear, train_nb, Classifier, TrainerParams, TrainerSpec,
};
use dslkit::corpus::{gen_synthetic, split_per_label, Dataset, SyntheticSpec};
use dslkit::evaluation::score_model;
use dslkit::features::{FeatureConfig, Weighting};
use proptest::prelude::*;

fn corpus(n_labels: usize, per_label: usize, seed: u64) -> Dataset {
    gen_synthetic(&SyntheticSpec {
        n_labels,
        n_per_label: per_label,
        alphabet_size: 26,
        skew: 0.5,
        seed,
    })
    .unwrap()
}

fn accuracy(model: &dyn Classifier, ds: &Dataset) -> f64 {
    score_model(model, ds).0.overall_accuracy
}

fn spec(base: &str, hierarchical: bool, features: FeatureConfig) -> TrainerSpec {
    TrainerSpec {
        base: base.into(),
        params: TrainerParams::default(),
        hierarchical,
        features,
    }
}

#[test]
fn perceptron_tracks_naive_bayes() {
    let (train, test) = split_per_label(&corpus(4, 1200, 7), 1000);
    let cfg = FeatureConfig::chars(3);
    let nb = train_nb(&train, &cfg, 0.5).unwrap();
    let lin = train_linear(&train, &cfg, 5, 42).unwrap();
    let (a, b) = (accuracy(&nb, &test), accuracy(&lin, &test));
    assert!((a - b).abs() <= 0.02, "nb {a} vs linear {b}");
}

#[test]
fn group_stage_at_least_language_stage() {
    let (train, test) = split_per_label(&corpus(4, 500, 7), 300);
    for base in ["nb", "linear"] {
        let model = spec(base, true, FeatureConfig::chars(3))
            .train(&train)
            .unwrap();
        let (report, group) = score_model(model.as_ref(), &test);
        assert!(
            group >= report.overall_accuracy,
            "{base}: {group} < {}",
            report.overall_accuracy
        );
    }
}

#[test]
fn hierarchical_errors_stay_within_groups() {
    let (train, test) = split_per_label(&corpus(6, 500, 3), 400);
    let model = spec("nb", true, FeatureConfig::chars(3))
        .train(&train)
        .unwrap();
    let space = test.label_space();
    let (mut within, mut cross) = (0, 0);
    for inst in test.instances() {
        let (g, l) = model.predict_with_group(&inst.text);
        assert_eq!(space.group_of(&l), Some(&g));
        if l != inst.label {
            if space.group_of(&inst.label) == Some(&g) {
                within += 1;
            } else {
                cross += 1;
            }
        }
    }
    assert!(within > cross, "within {within}, cross {cross}");
}

#[test]
fn model_files_round_trip_exactly() {
    let ds = corpus(4, 80, 9);
    let mut tfidf = FeatureConfig::chars(2);
    tfidf.word_orders.insert(1);
    tfidf.weighting = Weighting::Tfidf;
    for s in [
        spec("nb", false, FeatureConfig::chars(3)),
        spec("linear", false, tfidf.clone()),
        spec("nb", true, tfidf),
    ] {
        let model = s.train(&ds).unwrap();
        let json = model_to_json(model.as_ref());
        let back = model_from_json(&json).unwrap();
        assert_eq!(model_to_json(back.as_ref()), json);
        for inst in ds.instances().iter().take(40) {
            assert_eq!(
                back.predict_ranked(&inst.text),
                model.predict_ranked(&inst.text)
            );
        }
    }
}

#[test]
fn unknown_format_version_is_rejected() {
    let model = spec("nb", false, FeatureConfig::chars(1))
        .train(&corpus(2, 10, 1))
        .unwrap();
    let json =
        model_to_json(model.as_ref()).replacen("\"format_version\":1", "\"format_version\":9", 1);
    assert!(model_from_json(&json).is_err());
}

#[test]
fn training_is_independent_of_thread_count() {
    let ds = corpus(6, 100, 4);
    let s = spec("linear", true, FeatureConfig::chars(2));
    let train_in = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| model_to_json(s.train(&ds).unwrap().as_ref()))
    };
    assert_eq!(train_in(1), train_in(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn duplicated_data_keeps_nb_ranking(k in 2usize..4, seed in 0u64..1000) {
        let ds = corpus(3, 15, seed);
        let mut copies = Vec::new();
        for _ in 0..k {
            copies.extend(ds.instances().iter().cloned());
        }
        let big = Dataset::new(copies, ds.label_space().clone()).unwrap();
        let cfg = FeatureConfig::chars(2);
        // Count-based likelihoods scale with k, so α scales too.
        let a = train_nb(&ds, &cfg, 0.5).unwrap();
        let b = train_nb(&big, &cfg, 0.5 * k as f64).unwrap();
        for inst in ds.instances().iter().take(10) {
            let (ra, rb) = (a.predict_ranked(&inst.text), b.predict_ranked(&inst.text));
            for (x, y) in ra.entries().iter().zip(rb.entries()) {
                prop_assert_eq!(&x.0, &y.0);
                prop_assert!((x.1 - y.1).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn predict_is_head_of_ranking(text in "[a-z ]{0,30}") {
        let ds = corpus(4, 20, 5);
        for s in [spec("nb", false, FeatureConfig::chars(2)), spec("linear", true, FeatureConfig::chars(2))] {
            let model = s.train(&ds).unwrap();
            let r = model.predict_ranked(&text);
            prop_assert_eq!(r.len(), 4);
            prop_assert!(r.entries().windows(2).all(|w| w[0].1 >= w[1].1));
            prop_assert_eq!(&model.predict(&text), r.top());
        }
    }
}
