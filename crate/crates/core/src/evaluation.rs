//! Scoring, learning curves, progress tests and annotation statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{Classifier, TrainerSpec};
use crate::corpus::{subsample_balanced, Dataset, GroupId, LabelSpace, LanguageLabel};
use crate::rng;
use crate::{Error, Result};

/// Accuracy summary of one prediction list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub instances: usize,
    pub overall_accuracy: f64,
    /// Accuracy over the instances whose gold label is in the group.
    pub per_group_accuracy: BTreeMap<GroupId, f64>,
    /// Label order of the confusion matrix.
    pub labels: Vec<LanguageLabel>,
    /// `confusion[gold][predicted]`.
    pub confusion: Vec<Vec<u64>>,
}

fn indices(labels: &[LanguageLabel], space: &LabelSpace) -> Result<Vec<usize>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            space
                .index_of(l.as_str())
                .ok_or_else(|| Error::UnknownLabel {
                    label: l.to_string(),
                    line: Some(i + 1),
                })
        })
        .collect()
}

pub fn evaluate(
    pred: &[LanguageLabel],
    gold: &[LanguageLabel],
    label_space: &LabelSpace,
) -> Result<EvalReport> {
    if pred.len() != gold.len() {
        return Err(Error::LengthMismatch {
            context: "predictions vs gold".into(),
            expected: gold.len(),
            found: pred.len(),
        });
    }
    let p = indices(pred, label_space)?;
    let g = indices(gold, label_space)?;
    Ok(evaluate_indices(&p, &g, label_space))
}

/// [`evaluate`] over label-space indices. Callers guarantee equal lengths
/// and in-range indices.
pub fn evaluate_indices(pred: &[usize], gold: &[usize], label_space: &LabelSpace) -> EvalReport {
    let l = label_space.len();
    let mut confusion = vec![vec![0u64; l]; l];
    for (&p, &g) in pred.iter().zip(gold) {
        confusion[g][p] += 1;
    }
    let mut group_totals: BTreeMap<GroupId, (u64, u64)> = BTreeMap::new();
    for (g, row) in confusion.iter().enumerate() {
        let n: u64 = row.iter().sum();
        if n == 0 {
            continue;
        }
        let e = group_totals
            .entry(label_space.group_of_index(g).clone())
            .or_default();
        e.0 += row[g];
        e.1 += n;
    }
    let correct: u64 = (0..l).map(|i| confusion[i][i]).sum();
    EvalReport {
        instances: gold.len(),
        overall_accuracy: ratio(correct, gold.len() as u64),
        per_group_accuracy: group_totals
            .into_iter()
            .map(|(g, (c, n))| (g, ratio(c, n)))
            .collect(),
        labels: label_space.labels().to_vec(),
        confusion,
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy in percent with two decimals, as printed in reports.
pub fn format_percent(fraction: f64) -> String {
    format!("{:.2}", fraction * 100.0)
}

/// Training-set size of one learning-curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSize {
    /// Balanced subsample with this many instances per label.
    PerLabel(usize),
    /// The whole training set, unsampled.
    Full,
}

impl std::str::FromStr for CurveSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(CurveSize::Full);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(CurveSize::PerLabel(n)),
            _ => Err(Error::InvalidParameter(format!("bad curve size `{s}`"))),
        }
    }
}

impl std::fmt::Display for CurveSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveSize::PerLabel(n) => write!(f, "{n}"),
            CurveSize::Full => f.write_str("full"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub sizes: Vec<CurveSize>,
    pub replicates: usize,
    pub base_seed: u64,
    /// Worker threads; 0 uses rayon's default.
    pub jobs: usize,
}

/// One training run of a learning curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRun {
    pub replicate: usize,
    /// Subsampling and training seed; `None` for the unsampled full run.
    pub seed: Option<u64>,
    pub train_instances: usize,
    pub overall: f64,
    pub per_group: BTreeMap<GroupId, f64>,
    /// Fraction of test instances whose group was predicted correctly.
    pub group_stage: f64,
}

/// Mean and sample standard deviation of one scope at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScopeSummary {
    pub scope: String,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub size: CurveSize,
    /// Instances per label, when the training data at this point is balanced.
    pub per_label: Option<usize>,
    pub runs: Vec<CurveRun>,
    pub summary: Vec<ScopeSummary>,
}

impl CurvePoint {
    pub fn scope(&self, scope: &str) -> Option<&ScopeSummary> {
        self.summary.iter().find(|s| s.scope == scope)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurveResult {
    pub trainer: TrainerSpec,
    pub config: CurveConfig,
    pub points: Vec<CurvePoint>,
}

impl LearningCurveResult {
    pub fn n_runs(&self) -> usize {
        self.points.iter().map(|p| p.runs.len()).sum()
    }
}

pub const SCOPE_OVERALL: &str = "overall";
pub const SCOPE_GROUP_STAGE: &str = "group-stage";

pub fn group_scope(g: &GroupId) -> String {
    format!("group:{g}")
}

impl CurveRun {
    /// `(scope, accuracy)` pairs in reporting order.
    pub fn scopes(&self) -> Vec<(String, f64)> {
        let mut out = vec![(SCOPE_OVERALL.to_owned(), self.overall)];
        out.extend(self.per_group.iter().map(|(g, &a)| (group_scope(g), a)));
        out.push((SCOPE_GROUP_STAGE.to_owned(), self.group_stage));
        out
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn summarise(runs: &[CurveRun]) -> Vec<ScopeSummary> {
    let mut by_scope: Vec<(String, Vec<f64>)> = Vec::new();
    for run in runs {
        for (scope, acc) in run.scopes() {
            match by_scope.iter_mut().find(|(s, _)| *s == scope) {
                Some((_, v)) => v.push(acc),
                None => by_scope.push((scope, vec![acc])),
            }
        }
    }
    by_scope
        .into_iter()
        .map(|(scope, v)| {
            let (mean, std) = mean_std(&v);
            ScopeSummary {
                scope,
                mean,
                std,
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

/// Scores `model` on `test`; predictions run in parallel.
pub fn score_model(model: &dyn Classifier, test: &Dataset) -> (EvalReport, f64) {
    let space = test.label_space();
    let outputs: Vec<(GroupId, LanguageLabel)> = test
        .instances()
        .par_iter()
        .map(|inst| model.predict_with_group(&inst.text))
        .collect();
    let gold = test.label_indices();
    let mut group_hits = 0u64;
    // Labels the test space lacks can never be right; map them to an
    // arbitrary wrong index so the confusion matrix stays square.
    let pred: Vec<usize> = outputs
        .iter()
        .zip(&gold)
        .map(|((g, l), &gi)| {
            if space.group_of_index(gi) == g {
                group_hits += 1;
            }
            space.index_of(l.as_str()).unwrap_or((gi + 1) % space.len())
        })
        .collect();
    let report = evaluate_indices(&pred, &gold, space);
    (report, ratio(group_hits, gold.len() as u64))
}

struct Job {
    point: usize,
    replicate: usize,
    seed: Option<u64>,
    per_label: Option<usize>,
}

/// Trains `trainer` on balanced subsamples of `train` and scores each model
/// on all of `test`.
///
/// Replicate `r` at size `s` uses seed `derive_seed(base_seed, [s, r])` for
/// both subsampling and training. A full-size point (explicit `Full`, or a
/// per-label size equal to every label's count) runs exactly once on the
/// unsampled training set. Results do not depend on `jobs`.
pub fn learning_curve(
    train: &Dataset,
    test: &Dataset,
    trainer: &TrainerSpec,
    config: &CurveConfig,
) -> Result<LearningCurveResult> {
    if config.replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be >= 1".into()));
    }
    if config.sizes.is_empty() {
        return Err(Error::InvalidParameter("no curve sizes given".into()));
    }
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    trainer.build(&Default::default())?;
    let counts = train.counts_per_label();
    let min_count = counts.iter().copied().min().unwrap_or(0);
    let balanced = counts.iter().all(|&c| c == min_count);

    let mut jobs = Vec::new();
    for (point, &size) in config.sizes.iter().enumerate() {
        match size {
            CurveSize::PerLabel(n) if n > min_count => {
                let l = counts.iter().position(|&c| c == min_count).unwrap_or(0);
                return Err(Error::InsufficientData {
                    label: train.label_space().label(l).to_string(),
                    available: min_count,
                    requested: n,
                });
            }
            CurveSize::PerLabel(n) if !(balanced && n == min_count) => {
                for r in 0..config.replicates {
                    jobs.push(Job {
                        point,
                        replicate: r,
                        seed: Some(rng::derive_seed(config.base_seed, &[n as u64, r as u64])),
                        per_label: Some(n),
                    });
                }
            }
            _ => jobs.push(Job {
                point,
                replicate: 0,
                seed: None,
                per_label: balanced.then_some(min_count),
            }),
        }
    }

    let run = |job: &Job| -> Result<CurveRun> {
        let mut spec = trainer.clone();
        let data = match (job.seed, job.per_label) {
            (Some(seed), Some(n)) => {
                spec.params.seed = seed;
                subsample_balanced(train, n, seed)?
            }
            _ => train.clone(),
        };
        let model = spec.train(&data)?;
        let (report, group_stage) = score_model(model.as_ref(), test);
        Ok(CurveRun {
            replicate: job.replicate,
            seed: job.seed,
            train_instances: data.len(),
            overall: report.overall_accuracy,
            per_group: report.per_group_accuracy,
            group_stage,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let runs: Vec<CurveRun> = pool.install(|| jobs.par_iter().map(run).collect::<Result<_>>())?;

    let mut points: Vec<CurvePoint> = config
        .sizes
        .iter()
        .map(|&size| CurvePoint {
            size,
            per_label: match size {
                CurveSize::PerLabel(n) => Some(n),
                CurveSize::Full => balanced.then_some(min_count),
            },
            runs: Vec::new(),
            summary: Vec::new(),
        })
        .collect();
    for (job, run) in jobs.iter().zip(runs) {
        points[job.point].runs.push(run);
    }
    for p in &mut points {
        p.summary = summarise(&p.runs);
    }
    Ok(LearningCurveResult {
        trainer: trainer.clone(),
        config: config.clone(),
        points,
    })
}

/// What to score for one named test set.
pub enum Scorable<'a> {
    /// Apply a model to a labelled dataset.
    Model {
        model: &'a dyn Classifier,
        test: &'a Dataset,
    },
    /// Compare an aligned prediction list with gold labels.
    Run {
        pred: &'a [LanguageLabel],
        gold: &'a [LanguageLabel],
        label_space: &'a LabelSpace,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressRow {
    pub name: String,
    pub instances: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressTable {
    pub rows: Vec<ProgressRow>,
}

/// One accuracy per named test set.
pub fn progress_eval(sets: &[(String, Scorable<'_>)]) -> Result<ProgressTable> {
    let rows = sets
        .iter()
        .map(|(name, s)| {
            let report = match s {
                Scorable::Model { model, test } => score_model(*model, test).0,
                Scorable::Run {
                    pred,
                    gold,
                    label_space,
                } => evaluate(pred, gold, label_space)?,
            };
            Ok(ProgressRow {
                name: name.clone(),
                instances: report.instances,
                accuracy: report.overall_accuracy,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ProgressTable { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotator {
    pub name: String,
    pub choices: Vec<LanguageLabel>,
}

/// Annotator choices for the instances of one language group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct AnnotationTable {
    group: GroupId,
    labels: Vec<LanguageLabel>,
    gold: Vec<LanguageLabel>,
    annotators: Vec<Annotator>,
}

#[derive(Deserialize)]
struct RawTable {
    group: GroupId,
    labels: Vec<LanguageLabel>,
    gold: Vec<LanguageLabel>,
    annotators: Vec<Annotator>,
}

impl TryFrom<RawTable> for AnnotationTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        AnnotationTable::new(raw.group, raw.labels, raw.gold, raw.annotators)
    }
}

impl AnnotationTable {
    pub fn new(
        group: GroupId,
        labels: Vec<LanguageLabel>,
        gold: Vec<LanguageLabel>,
        annotators: Vec<Annotator>,
    ) -> Result<Self> {
        if gold.is_empty() || annotators.is_empty() {
            return Err(Error::InvalidParameter("annotation table is empty".into()));
        }
        let check = |l: &LanguageLabel, line: usize| {
            if labels.contains(l) {
                Ok(())
            } else {
                Err(Error::UnknownLabel {
                    label: l.to_string(),
                    line: Some(line),
                })
            }
        };
        for (i, l) in gold.iter().enumerate() {
            check(l, i + 1)?;
        }
        for a in &annotators {
            if a.choices.len() != gold.len() {
                return Err(Error::LengthMismatch {
                    context: format!("annotator `{}`", a.name),
                    expected: gold.len(),
                    found: a.choices.len(),
                });
            }
            for (i, l) in a.choices.iter().enumerate() {
                check(l, i + 1)?;
            }
        }
        Ok(AnnotationTable {
            group,
            labels,
            gold,
            annotators,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| e.in_file(path))
    }

    pub fn group(&self) -> &GroupId {
        &self.group
    }

    pub fn gold(&self) -> &[LanguageLabel] {
        &self.gold
    }

    pub fn annotators(&self) -> &[Annotator] {
        &self.annotators
    }
}

/// Percentages (0–100) derived from an [`AnnotationTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationStats {
    pub group: GroupId,
    pub annotators: usize,
    pub instances: usize,
    /// Share of annotators who chose the gold label, per instance.
    pub per_instance_pct: Vec<f64>,
    /// Share of instances each annotator got right.
    pub per_annotator_pct: Vec<(String, f64)>,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    /// Correct cells over all cells; equals `mean` and the mean of `per_instance_pct`.
    pub grand_mean: f64,
}

pub fn annotator_stats(t: &AnnotationTable) -> AnnotationStats {
    let (a, n) = (t.annotators.len(), t.gold.len());
    let hit = |ann: &Annotator, i: usize| ann.choices[i] == t.gold[i];
    let per_instance_pct = (0..n)
        .map(|i| 100.0 * t.annotators.iter().filter(|x| hit(x, i)).count() as f64 / a as f64)
        .collect();
    let per_annotator: Vec<(String, usize)> = t
        .annotators
        .iter()
        .map(|x| (x.name.clone(), (0..n).filter(|&i| hit(x, i)).count()))
        .collect();
    let total: usize = per_annotator.iter().map(|p| p.1).sum();
    let pct = |c: usize| 100.0 * c as f64 / n as f64;
    AnnotationStats {
        group: t.group.clone(),
        annotators: a,
        instances: n,
        per_instance_pct,
        best: pct(per_annotator.iter().map(|p| p.1).max().unwrap_or(0)),
        worst: pct(per_annotator.iter().map(|p| p.1).min().unwrap_or(0)),
        mean: per_annotator.iter().map(|p| pct(p.1)).sum::<f64>() / a as f64,
        grand_mean: 100.0 * total as f64 / (a * n) as f64,
        per_annotator_pct: per_annotator
            .into_iter()
            .map(|(name, c)| (name, pct(c)))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

/// Anything [`render_report`] can print.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Eval(&'a EvalReport),
    Curve(&'a LearningCurveResult),
    Progress(&'a ProgressTable),
    Annotation(&'a [AnnotationStats]),
}

pub fn render_report(report: Report<'_>, format: ReportFormat) -> Result<Vec<u8>> {
    if let Report::Curve(c) = report {
        if c.points.iter().any(|p| p.runs.is_empty()) {
            return Err(Error::InvalidParameter(
                "learning curve point without runs".into(),
            ));
        }
    }
    let text = match (report, format) {
        (Report::Eval(r), ReportFormat::Json) => to_json(r)?,
        (Report::Curve(r), ReportFormat::Json) => to_json(r)?,
        (Report::Progress(r), ReportFormat::Json) => to_json(r)?,
        (Report::Annotation(r), ReportFormat::Json) => to_json(&r)?,
        (Report::Eval(r), ReportFormat::Csv) => eval_csv(r),
        (Report::Curve(r), ReportFormat::Csv) => curve_csv(r),
        (Report::Progress(r), ReportFormat::Csv) => progress_csv(r),
        (Report::Annotation(r), ReportFormat::Csv) => annotation_csv(r),
        (Report::Curve(r), ReportFormat::Svg) => curve_svg(r),
        (_, ReportFormat::Svg) => {
            return Err(Error::Unsupported(
                "svg is only available for learning curves".into(),
            ))
        }
    };
    Ok(text.into_bytes())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn eval_csv(r: &EvalReport) -> String {
    let mut out = String::from("scope,accuracy\n");
    let _ = writeln!(out, "overall,{}", format_percent(r.overall_accuracy));
    for (g, a) in &r.per_group_accuracy {
        let _ = writeln!(out, "{},{}", group_scope(g), format_percent(*a));
    }
    out.push_str("\ngold\\predicted");
    for l in &r.labels {
        let _ = write!(out, ",{l}");
    }
    out.push('\n');
    for (l, row) in r.labels.iter().zip(&r.confusion) {
        let _ = write!(out, "{l}");
        for c in row {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}

/// Long format: one row per (size, replicate, scope), then `mean` and `std`
/// rows per (size, scope). Accuracies are fractions.
fn curve_csv(r: &LearningCurveResult) -> String {
    let mut out = String::from("size,replicate,scope,accuracy\n");
    for p in &r.points {
        for run in &p.runs {
            for (scope, acc) in run.scopes() {
                let _ = writeln!(out, "{},{},{},{:.6}", p.size, run.replicate, scope, acc);
            }
        }
    }
    for p in &r.points {
        for s in &p.summary {
            let _ = writeln!(out, "{},mean,{},{:.6}", p.size, s.scope, s.mean);
            let _ = writeln!(out, "{},std,{},{:.6}", p.size, s.scope, s.std);
        }
    }
    out
}

fn progress_csv(r: &ProgressTable) -> String {
    let mut out = String::from("test_set,instances,accuracy\n");
    for row in &r.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.name,
            row.instances,
            format_percent(row.accuracy)
        );
    }
    out
}

/// Instances as rows, groups as columns, then best/mean/worst rows.
fn annotation_csv(stats: &[AnnotationStats]) -> String {
    let mut out = String::from("instance");
    for s in stats {
        let _ = write!(out, ",{}", s.group);
    }
    out.push('\n');
    let rows = stats.iter().map(|s| s.instances).max().unwrap_or(0);
    for i in 0..rows {
        let _ = write!(out, "{}", i + 1);
        for s in stats {
            match s.per_instance_pct.get(i) {
                Some(v) => {
                    let _ = write!(out, ",{v:.2}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    for (name, pick) in [
        (
            "best",
            (|s: &AnnotationStats| s.best) as fn(&AnnotationStats) -> f64,
        ),
        ("mean", |s| s.mean),
        ("worst", |s| s.worst),
    ] {
        out.push_str(name);
        for s in stats {
            let _ = write!(out, ",{:.2}", pick(s));
        }
        out.push('\n');
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Mean accuracy per scope against log training size, with ±1 std bars.
fn curve_svg(r: &LearningCurveResult) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 170.0, 30.0, 60.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    // Full points without a known per-label size are placed right of the rest.
    let max_known = r
        .points
        .iter()
        .filter_map(|p| p.per_label)
        .max()
        .unwrap_or(1);
    let x_of = |p: &CurvePoint| p.per_label.unwrap_or(max_known * 2).max(1) as f64;
    let xs: Vec<f64> = r.points.iter().map(|p| x_of(p).ln()).collect();
    let (x0, x1) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };

    let mut lo = f64::INFINITY;
    for p in &r.points {
        for s in &p.summary {
            lo = lo.min(s.mean - s.std);
        }
    }
    let y0 = ((lo * 10.0).floor() / 10.0).clamp(0.0, 0.9);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + (1.0 - (y - y0) / (1.0 - y0)) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{left}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{left}" y1="{top}" x2="{left}" y2="{b}" stroke="black"/>"#,
        b = top + ph,
        r = left + pw
    );
    for k in 0..=5 {
        let y = y0 + (1.0 - y0) * k as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{:.0}</text>"#,
            left - 6.0,
            sy(y) + 4.0,
            y * 100.0
        );
    }
    for (p, &x) in r.points.iter().zip(&xs) {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            sx(x),
            top + ph + 18.0,
            p.size
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">training instances per label (log scale)</text>"#,
        left + pw / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(18 {}) rotate(-90)" text-anchor="middle">accuracy (%)</text>"#,
        top + ph / 2.0
    );

    let scopes: Vec<String> = r.points[0]
        .summary
        .iter()
        .map(|s| s.scope.clone())
        .collect();
    for (k, scope) in scopes.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, &ScopeSummary)> = r
            .points
            .iter()
            .zip(&xs)
            .filter_map(|(p, &x)| p.scope(scope).map(|s| (sx(x), s)))
            .collect();
        let line: Vec<String> = pts
            .iter()
            .map(|(x, s)| format!("{x:.1},{:.1}", sy(s.mean)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            line.join(" ")
        );
        for (x, s) in &pts {
            let (a, b) = (sy((s.mean + s.std).min(1.0)), sy(s.mean - s.std));
            let _ = writeln!(
                out,
                r#"<path d="M{x:.1} {a:.1}V{b:.1}M{:.1} {a:.1}h8M{:.1} {b:.1}h8" stroke="{color}"/><circle cx="{x:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#,
                x - 4.0,
                x - 4.0,
                sy(s.mean)
            );
        }
        let (lx, ly) = (left + pw + 15.0, top + 14.0 + 18.0 * k as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{scope}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
