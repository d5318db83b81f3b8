use std::path::PathBuf;

use dslkit::classifiers::{TrainerParams, TrainerSpec};
use dslkit::corpus::{gen_synthetic, split_per_label, LabelSpace, LanguageLabel, SyntheticSpec};
use dslkit::evaluation::{
    annotator_stats, evaluate, learning_curve, render_report, AnnotationTable, CurveConfig,
    CurveSize, Report, ReportFormat, SCOPE_OVERALL,
};
use dslkit::features::FeatureConfig;
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Printed percentages (per instance, then best, mean, worst).
const PRINTED: [(&str, [f64; 15]); 3] = [
    (
        "annotations_group_a.json",
        [
            16.66, 0.0, 16.66, 0.0, 33.33, 0.0, 0.0, 66.66, 16.66, 16.66, 33.33, 0.0, 25.00, 16.66,
            8.33,
        ],
    ),
    (
        "annotations_group_d.json",
        [
            30.0, 80.0, 80.0, 60.0, 50.0, 30.0, 70.0, 80.0, 90.0, 60.0, 80.0, 100.0, 91.66, 67.50,
            25.00,
        ],
    ),
    (
        "annotations_group_e.json",
        [
            35.30, 29.41, 58.82, 47.05, 35.29, 76.47, 76.47, 11.76, 35.29, 100.0, 82.35, 70.59,
            83.33, 54.90, 16.66,
        ],
    ),
];

#[test]
fn annotation_fixtures_match_printed_table() {
    for (file, printed) in PRINTED {
        let s = annotator_stats(&AnnotationTable::load(fixture(file)).unwrap());
        let mut got = s.per_instance_pct.clone();
        got.extend([s.best, s.mean, s.worst]);
        assert_eq!(got.len(), printed.len());
        for (i, (g, p)) in got.iter().zip(printed).enumerate() {
            assert!((g - p).abs() <= 0.01 + 1e-9, "{file} row {i}: {g} vs {p}");
        }
    }
}

#[test]
fn grand_mean_identity_holds() {
    for (file, _) in PRINTED {
        let s = annotator_stats(&AnnotationTable::load(fixture(file)).unwrap());
        let per_instance_mean = s.per_instance_pct.iter().sum::<f64>() / s.instances as f64;
        assert!((s.mean - s.grand_mean).abs() < 1e-9);
        assert!((per_instance_mean - s.grand_mean).abs() < 1e-9);
    }
}

#[test]
fn ragged_annotation_file_is_rejected() {
    let text = std::fs::read_to_string(fixture("annotations_group_d.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["annotators"][3]["choices"].as_array_mut().unwrap().pop();
    assert!(AnnotationTable::from_json(&v.to_string()).is_err());
}

fn space() -> LabelSpace {
    LabelSpace::new([
        ("bs", "A"),
        ("hr", "A"),
        ("sr", "A"),
        ("cz", "C"),
        ("sk", "C"),
    ])
    .unwrap()
}

proptest! {
    #[test]
    fn confusion_invariants(pairs in prop::collection::vec((0usize..5, 0usize..5), 1..300)) {
        let s = space();
        let pred: Vec<LanguageLabel> = pairs.iter().map(|p| s.label(p.0).clone()).collect();
        let gold: Vec<LanguageLabel> = pairs.iter().map(|p| s.label(p.1).clone()).collect();
        let r = evaluate(&pred, &gold, &s).unwrap();
        let total: u64 = r.confusion.iter().flatten().sum();
        prop_assert_eq!(total as usize, pairs.len());
        for l in 0..5 {
            let row: u64 = r.confusion[l].iter().sum();
            prop_assert_eq!(row as usize, pairs.iter().filter(|p| p.1 == l).count());
        }
        let trace: u64 = (0..5).map(|i| r.confusion[i][i]).sum();
        prop_assert!((r.overall_accuracy - trace as f64 / total as f64).abs() < 1e-12);
        // Group accuracies weighted by group sizes give back the overall accuracy.
        let recomposed: f64 = r.per_group_accuracy.iter().map(|(g, a)| {
            let n = pairs.iter().filter(|p| s.group_of_index(p.1) == g).count();
            a * n as f64
        }).sum::<f64>() / pairs.len() as f64;
        prop_assert!((recomposed - r.overall_accuracy).abs() < 1e-9);
    }
}

fn nb_spec() -> TrainerSpec {
    TrainerSpec {
        base: "nb".into(),
        params: TrainerParams::default(),
        hierarchical: false,
        features: FeatureConfig::chars(3),
    }
}

#[test]
fn seven_sizes_plus_full_give_71_runs() {
    let ds = gen_synthetic(&SyntheticSpec {
        n_labels: 4,
        n_per_label: 40,
        alphabet_size: 26,
        skew: 0.5,
        seed: 2,
    })
    .unwrap();
    let (train, test) = split_per_label(&ds, 20);
    let sizes = [1, 2, 4, 6, 8, 10, 15, 20]
        .map(CurveSize::PerLabel)
        .to_vec();
    let cfg = CurveConfig {
        sizes,
        replicates: 10,
        base_seed: 42,
        jobs: 0,
    };
    let r = learning_curve(&train, &test, &nb_spec(), &cfg).unwrap();
    assert_eq!(r.n_runs(), 71);
    let csv =
        String::from_utf8(render_report(Report::Curve(&r), ReportFormat::Csv).unwrap()).unwrap();
    let data_rows = csv
        .lines()
        .filter(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[2] == SCOPE_OVERALL && f[1].parse::<usize>().is_ok()
        })
        .count();
    assert_eq!(data_rows, 71);
}

#[test]
fn curve_is_deterministic_across_job_counts_and_mostly_rising() {
    let ds = gen_synthetic(&SyntheticSpec {
        n_labels: 4,
        n_per_label: 400,
        alphabet_size: 26,
        skew: 0.5,
        seed: 7,
    })
    .unwrap();
    let (train, test) = split_per_label(&ds, 300);
    let mut cfg = CurveConfig {
        sizes: [10, 40, 150, 300].map(CurveSize::PerLabel).to_vec(),
        replicates: 4,
        base_seed: 5,
        jobs: 1,
    };
    let a = learning_curve(&train, &test, &nb_spec(), &cfg).unwrap();
    cfg.jobs = 8;
    let b = learning_curve(&train, &test, &nb_spec(), &cfg).unwrap();
    assert_eq!(a.points, b.points);

    let means: Vec<(f64, f64)> = a
        .points
        .iter()
        .map(|p| {
            let s = p.scope(SCOPE_OVERALL).unwrap();
            (s.mean, s.std)
        })
        .collect();
    for w in means.windows(2) {
        assert!(w[1].0 >= w[0].0 - w[0].1.max(w[1].1), "{means:?}");
    }
}
