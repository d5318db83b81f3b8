use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use dslkit::classifiers::{load_model, predict_many, save_model, TrainerParams, TrainerSpec};
use dslkit::corpus::{
    filter_groups, gen_synthetic, normalize_placeholders, read_dslcc, split_per_label, Dataset,
    GroupId, LabelSpace, SyntheticSpec,
};
use dslkit::ensemble::{
    load_predictions, read_label_file, CombinerParams, CombinerRegistry, CombinerReport,
};
use dslkit::evaluation::{
    annotator_stats, evaluate, format_percent, learning_curve, render_report, AnnotationTable,
    CurveConfig, Report, ReportFormat, SCOPE_GROUP_STAGE, SCOPE_OVERALL,
};
use dslkit::features::{build_vocabulary, FeatureConfig, Weighting};

use crate::output::{csv_with_config, json_report, svg_with_config, write_output, RunConfig};
use crate::{
    AnnotArgs, CurveArgs, EnsembleArgs, EvalArgs, FeatureArgs, Format, GenSynthArgs, ModelArgs,
    PredictArgs, SpaceArgs, TrainArgs, UsageError, WeightingArg,
};

fn report_format(f: Format) -> ReportFormat {
    match f {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
        Format::Svg => ReportFormat::Svg,
    }
}

fn feature_config(a: &FeatureArgs) -> Result<FeatureConfig> {
    let mut cfg = FeatureConfig::chars(6);
    if !a.char_n.is_empty() || !a.word_n.is_empty() {
        cfg.char_orders = a.char_n.iter().copied().collect();
        cfg.word_orders = a.word_n.iter().copied().collect();
    }
    cfg.lowercase = a.lowercase;
    cfg.min_doc_freq = a.min_df;
    cfg.weighting = match a.weighting {
        WeightingArg::Counts => Weighting::Counts,
        WeightingArg::Tfidf => Weighting::Tfidf,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn trainer_spec(a: &ModelArgs, seed: u64) -> Result<TrainerSpec> {
    let spec = TrainerSpec {
        base: a.model.clone(),
        params: TrainerParams {
            alpha: a.alpha,
            epochs: a.epochs,
            seed,
        },
        hierarchical: a.hierarchical,
        features: feature_config(&a.features)?,
    };
    spec.build(&Default::default())?;
    Ok(spec)
}

fn base_space(a: &SpaceArgs) -> Result<LabelSpace> {
    Ok(match &a.label_space {
        Some(p) => LabelSpace::load(p)?,
        None => LabelSpace::empty(),
    })
}

fn strict(a: &SpaceArgs) -> bool {
    a.strict && a.label_space.is_some()
}

/// Reads and concatenates corpora over one label space.
fn read_corpora(paths: &[PathBuf], space: &LabelSpace, strict: bool) -> Result<Dataset> {
    let parts = paths
        .iter()
        .map(|p| read_dslcc(p, space, strict).map_err(|e| e.in_file(p)))
        .collect::<dslkit::Result<Vec<_>>>()?;
    Ok(Dataset::concat(&parts)?)
}

fn warn_single_group(spec: &TrainerSpec, space: &LabelSpace) {
    if spec.hierarchical && space.groups().len() < 2 {
        eprintln!("warning: label space has a single group; the group stage is skipped");
    }
}

pub fn train(a: TrainArgs) -> Result<()> {
    let t0 = Instant::now();
    let spec = trainer_spec(&a.model, a.seed)?;
    let ds = read_corpora(&a.corpus, &base_space(&a.space)?, strict(&a.space))?;
    warn_single_group(&spec, ds.label_space());
    let model = spec.train(&ds)?;
    save_model(model.as_ref(), &a.out).context("saving model")?;
    let vocab = build_vocabulary(&ds, &spec.features)?.len();

    let config = RunConfig::new("train")
        .input("corpus", &a.corpus)
        .input("label_space", a.space.label_space.as_slice())
        .output(Some(&a.out), None)
        .seeded(a.seed);
    let config = RunConfig {
        trainer: Some(spec),
        ..config
    };
    let summary = serde_json::json!({
        "instances": ds.len(),
        "labels": ds.label_space().len(),
        "vocabulary_size": vocab,
        "model_kind": model.kind(),
    });
    write_output(None, &json_report(&config, "summary", &summary)?)?;
    eprintln!(
        "trained {} on {} instances, vocabulary {vocab}, {:.2?}",
        model.kind(),
        ds.len(),
        t0.elapsed()
    );
    Ok(())
}

pub fn predict(a: PredictArgs) -> Result<()> {
    let t0 = Instant::now();
    if a.top_k == 0 {
        return Err(UsageError("--top-k must be >= 1".into()).into());
    }
    let model = load_model(&a.model)?;
    let text = std::fs::read_to_string(&a.input).map_err(|e| dslkit::Error::Io {
        path: a.input.clone(),
        source: e,
    })?;
    let texts: Vec<&str> = text
        .lines()
        .map(|l| {
            let l = l.strip_suffix('\r').unwrap_or(l);
            l.rsplit_once('\t').map_or(l, |(t, _)| t)
        })
        .collect();
    let mut out = String::new();
    for ranked in predict_many(model.as_ref(), &texts) {
        let labels: Vec<&str> = ranked.top_k(a.top_k).map(|l| l.as_str()).collect();
        out.push_str(&labels.join("\t"));
        out.push('\n');
    }
    write_output(a.out.as_deref(), out.as_bytes())?;
    eprintln!("predicted {} lines, {:.2?}", texts.len(), t0.elapsed());
    Ok(())
}

/// Label space covering `files` in first-appearance order, all in group `X`.
fn space_from_label_files(files: &[&Path]) -> Result<LabelSpace> {
    let mut seen = Vec::new();
    for f in files {
        for l in read_label_file(f)? {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
    }
    Ok(LabelSpace::new(
        seen.into_iter()
            .map(|l| (l, dslkit::corpus::OTHERS_GROUP.to_owned())),
    )?)
}

fn to_labels(raw: Vec<String>, path: &Path) -> Result<Vec<dslkit::corpus::LanguageLabel>> {
    raw.into_iter()
        .map(|l| dslkit::corpus::LanguageLabel::new(l).map_err(|e| e.in_file(path)))
        .collect::<dslkit::Result<_>>()
        .map_err(Into::into)
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let space = match &a.label_space {
        Some(p) => LabelSpace::load(p)?,
        None => space_from_label_files(&[&a.gold, &a.pred])?,
    };
    let gold = to_labels(read_label_file(&a.gold)?, &a.gold)?;
    let pred = to_labels(read_label_file(&a.pred)?, &a.pred)?;
    let report = evaluate(&pred, &gold, &space).map_err(|e| e.in_file(&a.pred))?;

    let config = RunConfig::new("eval")
        .input("pred", std::slice::from_ref(&a.pred))
        .input("gold", std::slice::from_ref(&a.gold))
        .input("label_space", a.label_space.as_slice())
        .output(a.out.as_deref(), Some(a.format));
    let bytes = match a.format {
        Format::Json => json_report(&config, "report", &report)?,
        f => csv_with_config(
            &config,
            &render_report(Report::Eval(&report), report_format(f))?,
        ),
    };
    write_output(a.out.as_deref(), &bytes)?;
    eprintln!("accuracy {}%", format_percent(report.overall_accuracy));
    Ok(())
}

fn run_files(a: &EnsembleArgs) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    if let Some(dir) = &a.run_dir {
        let gold = std::fs::canonicalize(&a.gold).ok();
        let mut found = Vec::new();
        let entries = std::fs::read_dir(dir).map_err(|e| dslkit::Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        for entry in entries {
            let path = entry?.path();
            let hidden = path
                .file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with('.'));
            if !path.is_file() || hidden || std::fs::canonicalize(&path).ok() == gold {
                continue;
            }
            found.push(path);
        }
        found.sort();
        files.extend(found);
    }
    files.extend(a.runs.iter().cloned());
    if files.is_empty() {
        return Err(UsageError("no run files found".into()).into());
    }
    Ok(files)
}

pub fn ensemble(a: EnsembleArgs) -> Result<()> {
    let t0 = Instant::now();
    let files = run_files(&a)?;
    let space = match &a.label_space {
        Some(p) => LabelSpace::load(p)?,
        None => {
            let mut all: Vec<&Path> = vec![&a.gold];
            all.extend(files.iter().map(PathBuf::as_path));
            space_from_label_files(&all)?
        }
    };
    let matrix = load_predictions(&files, &a.gold, &space)?;

    let registry = CombinerRegistry::default();
    let plan: Vec<(&str, usize)> = if a.combiner == "all" {
        vec![
            ("random", 1),
            ("plurality", 1),
            ("majority", 1),
            ("accuracy-at-n", 2),
            ("accuracy-at-n", 3),
            ("oracle", 1),
        ]
    } else {
        vec![(a.combiner.as_str(), a.n)]
    };
    let reports = plan
        .into_iter()
        .map(|(name, n)| {
            Ok(registry
                .build(name, &CombinerParams { n })?
                .report(&matrix, a.seed))
        })
        .collect::<Result<Vec<CombinerReport>>>()?;

    let config = RunConfig::new("ensemble")
        .input("runs", &files)
        .input("gold", std::slice::from_ref(&a.gold))
        .input("label_space", a.label_space.as_slice())
        .output(a.out.as_deref(), Some(a.format))
        .seeded(a.seed)
        .settings(serde_json::json!({
            "combiner": a.combiner,
            "n": a.n,
            "systems": matrix.system_names(),
            "instances": matrix.n_instances(),
        }));
    let bytes = match a.format {
        Format::Json => json_report(&config, "reports", &reports)?,
        Format::Csv => {
            let mut csv = String::from("combiner,accuracy,misclassified\n");
            for r in &reports {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    r.combiner,
                    format_percent(r.accuracy),
                    r.misclassified_indices.len()
                ));
            }
            csv_with_config(&config, csv.as_bytes())
        }
        Format::Svg => {
            return Err(UsageError("ensemble reports support json and csv".into()).into())
        }
    };
    write_output(a.out.as_deref(), &bytes)?;
    for r in &reports {
        eprintln!("{:<14} {:>7}%", r.combiner, format_percent(r.accuracy));
    }
    eprintln!(
        "{} systems x {} instances, {:.2?}",
        matrix.n_systems(),
        matrix.n_instances(),
        t0.elapsed()
    );
    Ok(())
}

pub fn curve(a: CurveArgs) -> Result<()> {
    let t0 = Instant::now();
    let spec = trainer_spec(&a.model, a.seed)?;
    let train = read_corpora(&a.train, &base_space(&a.space)?, strict(&a.space))?;
    let test = read_dslcc(&a.test, train.label_space(), strict(&a.space))
        .map_err(|e| e.in_file(&a.test))?;
    warn_single_group(&spec, train.label_space());
    let cfg = CurveConfig {
        sizes: a.sizes.clone(),
        replicates: a.replicates,
        base_seed: a.seed,
        jobs: a.jobs,
    };
    let result = learning_curve(&train, &test, &spec, &cfg)?;

    // `jobs` does not change results, so it stays out of the recorded config.
    let config = RunConfig::new("curve")
        .input("train", &a.train)
        .input("test", std::slice::from_ref(&a.test))
        .input("label_space", a.space.label_space.as_slice())
        .output(a.out.as_deref(), Some(a.format))
        .seeded(a.seed)
        .settings(serde_json::json!({
            "sizes": a.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "replicates": a.replicates,
        }));
    let config = RunConfig {
        trainer: Some(spec),
        ..config
    };
    let bytes = match a.format {
        Format::Json => json_report(&config, "curve", &result)?,
        Format::Csv => csv_with_config(
            &config,
            &render_report(Report::Curve(&result), ReportFormat::Csv)?,
        ),
        Format::Svg => svg_with_config(
            &config,
            &render_report(Report::Curve(&result), ReportFormat::Svg)?,
        ),
    };
    write_output(a.out.as_deref(), &bytes)?;
    for p in &result.points {
        let o = p.scope(SCOPE_OVERALL).expect("overall scope");
        let g = p.scope(SCOPE_GROUP_STAGE).expect("group scope");
        eprintln!(
            "size {:>6}: {} runs, accuracy {}% ± {}, group stage {}%",
            p.size.to_string(),
            p.runs.len(),
            format_percent(o.mean),
            format_percent(o.std),
            format_percent(g.mean)
        );
    }
    eprintln!("{} runs, {:.2?}", result.n_runs(), t0.elapsed());
    Ok(())
}

pub fn annot(a: AnnotArgs) -> Result<()> {
    let stats = a
        .table
        .iter()
        .map(|p| AnnotationTable::load(p).map(|t| annotator_stats(&t)))
        .collect::<dslkit::Result<Vec<_>>>()?;
    let config = RunConfig::new("annot")
        .input("table", &a.table)
        .output(a.out.as_deref(), Some(a.format));
    let bytes = match a.format {
        Format::Json => json_report(&config, "groups", &stats)?,
        f => csv_with_config(
            &config,
            &render_report(Report::Annotation(&stats), report_format(f))?,
        ),
    };
    write_output(a.out.as_deref(), &bytes)
}

pub fn gen_synth(a: GenSynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n_labels: a.labels,
        n_per_label: a.per_label,
        alphabet_size: a.alphabet,
        skew: a.skew,
        seed: a.seed,
    };
    let ds = gen_synthetic(&spec)?;
    std::fs::write(&a.out, ds.to_dslcc())
        .with_context(|| format!("writing {}", a.out.display()))?;
    if let Some(p) = &a.label_space_out {
        std::fs::write(p, ds.label_space().to_json())
            .with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(n) = a.split_train {
        if n >= a.per_label {
            return Err(UsageError(format!("--split-train {n} leaves no test data")).into());
        }
        let (train, test) = split_per_label(&ds, n);
        for (suffix, part) in [("train", &train), ("test", &test)] {
            let path = PathBuf::from(format!("{}.{suffix}", a.out.display()));
            std::fs::write(&path, part.to_dslcc())
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let config = RunConfig::new("gen-synth")
        .output(Some(&a.out), None)
        .seeded(a.seed)
        .settings(serde_json::to_value(spec)?);
    let summary = serde_json::json!({ "instances": ds.len(), "labels": ds.label_space().len() });
    write_output(None, &json_report(&config, "summary", &summary)?)
}

pub fn filter(a: crate::FilterArgs) -> Result<()> {
    let mut ds = read_dslcc(&a.corpus, &base_space(&a.space)?, strict(&a.space))
        .map_err(|e| e.in_file(&a.corpus))?;
    if !a.groups.is_empty() {
        let groups: BTreeSet<GroupId> = a.groups.iter().map(GroupId::new).collect();
        ds = filter_groups(&ds, &groups)?;
    }
    if let Some(marker) = &a.placeholder {
        ds = normalize_placeholders(&ds, marker, &a.canonical)?;
    }
    std::fs::write(&a.out, ds.to_dslcc())
        .with_context(|| format!("writing {}", a.out.display()))?;
    let config = RunConfig::new("filter")
        .input("corpus", std::slice::from_ref(&a.corpus))
        .input("label_space", a.space.label_space.as_slice())
        .output(Some(&a.out), None)
        .settings(serde_json::json!({
            "groups": a.groups,
            "placeholder": a.placeholder,
            "canonical": a.canonical,
        }));
    let summary = serde_json::json!({ "instances": ds.len(), "labels": ds.label_space().len() });
    write_output(None, &json_report(&config, "summary", &summary)?)
}
