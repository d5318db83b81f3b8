//! Fusion of many systems' predictions over the same test set.
//!
//! Combiners implement [`Combiner`] and are selected by name through a
//! [`CombinerRegistry`]. Vote ties are broken with a generator keyed by the
//! run seed and the instance index ([`rng::stream`]), so the outcome does not
//! depend on the order of the system columns.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{GroupId, LabelSpace, LanguageLabel};
use crate::rng;
use crate::{Error, Result};

/// Predictions of M systems over N instances, plus gold labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    system_names: Vec<String>,
    /// Row-major: `rows[i][s]` is system `s`'s label index for instance `i`.
    rows: Vec<Vec<usize>>,
    gold: Vec<usize>,
    label_space: LabelSpace,
}

fn label_index(space: &LabelSpace, label: &str, line: usize) -> Result<usize> {
    space.index_of(label).ok_or_else(|| Error::UnknownLabel {
        label: label.to_owned(),
        line: Some(line),
    })
}

impl PredictionMatrix {
    /// `columns[s]` holds system `s`'s labels for every instance.
    pub fn new(
        system_names: Vec<String>,
        columns: &[Vec<LanguageLabel>],
        gold: &[LanguageLabel],
        label_space: LabelSpace,
    ) -> Result<Self> {
        let gold = gold
            .iter()
            .enumerate()
            .map(|(i, l)| label_index(&label_space, l.as_str(), i + 1))
            .collect::<Result<Vec<_>>>()?;
        let columns = columns
            .iter()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .map(|(i, l)| label_index(&label_space, l.as_str(), i + 1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(system_names, columns, gold, label_space)
    }

    pub fn from_indices(
        system_names: Vec<String>,
        columns: Vec<Vec<usize>>,
        gold: Vec<usize>,
        label_space: LabelSpace,
    ) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidParameter(
                "prediction matrix needs at least one system".into(),
            ));
        }
        if system_names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                context: "system names".into(),
                expected: columns.len(),
                found: system_names.len(),
            });
        }
        let n = gold.len();
        for (name, col) in system_names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    context: format!("system `{name}`"),
                    expected: n,
                    found: col.len(),
                });
            }
        }
        let l = label_space.len();
        if gold.iter().chain(columns.iter().flatten()).any(|&x| x >= l) {
            return Err(Error::InvalidParameter(
                "label index outside label space".into(),
            ));
        }
        let rows = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Ok(PredictionMatrix {
            system_names,
            rows,
            gold,
            label_space,
        })
    }

    pub fn n_systems(&self) -> usize {
        self.system_names.len()
    }

    pub fn n_instances(&self) -> usize {
        self.gold.len()
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn label_space(&self) -> &LabelSpace {
        &self.label_space
    }

    pub fn gold(&self) -> &[usize] {
        &self.gold
    }

    /// Label indices voted for instance `i`, one per system.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Predictions of one system as label indices.
    pub fn column(&self, s: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[s]).collect()
    }

    /// Vote count per label for instance `i`.
    pub fn tally(&self, i: usize) -> Vec<u32> {
        let mut counts = vec![0u32; self.label_space.len()];
        for &l in &self.rows[i] {
            counts[l] += 1;
        }
        counts
    }
}

/// Reads one label per line. A line holding `text<TAB>label` contributes its
/// last field, so DSLCC-formatted gold files can be used directly.
pub fn read_label_file(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.strip_suffix('\r').unwrap_or(line);
            let label = line.rsplit('\t').next().unwrap_or("").trim();
            if label.is_empty() {
                Err(Error::parse(i + 1, "empty label").in_file(path))
            } else {
                Ok(label.to_owned())
            }
        })
        .collect()
}

fn labels_to_indices(path: &Path, labels: &[String], space: &LabelSpace) -> Result<Vec<usize>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            space.index_of(l).ok_or_else(|| {
                Error::UnknownLabel {
                    label: l.clone(),
                    line: Some(i + 1),
                }
                .in_file(path)
            })
        })
        .collect()
}

/// Loads run files aligned with a gold file. System names are the file stems.
pub fn load_predictions(
    files: &[PathBuf],
    gold_file: &Path,
    label_space: &LabelSpace,
) -> Result<PredictionMatrix> {
    let gold = labels_to_indices(gold_file, &read_label_file(gold_file)?, label_space)?;
    let mut names = Vec::with_capacity(files.len());
    let mut columns = Vec::with_capacity(files.len());
    for path in files {
        let labels = read_label_file(path)?;
        if labels.len() != gold.len() {
            return Err(Error::LengthMismatch {
                context: format!("run file {}", path.display()),
                expected: gold.len(),
                found: labels.len(),
            });
        }
        columns.push(labels_to_indices(path, &labels, label_space)?);
        names.push(
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        );
    }
    PredictionMatrix::from_indices(names, columns, gold, label_space.clone())
}

/// Voted labels ordered by descending vote count; each run of equal counts
/// is shuffled with `rng`, top run first.
pub fn vote_ranking(counts: &[u32], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut voted: Vec<usize> = (0..counts.len()).filter(|&l| counts[l] > 0).collect();
    voted.sort_by(|&a, &b| counts[b].cmp(&counts[a]));
    let mut start = 0;
    while start < voted.len() {
        let c = counts[voted[start]];
        let end = start
            + voted[start..]
                .iter()
                .take_while(|&&l| counts[l] == c)
                .count();
        rng::shuffle(rng, &mut voted[start..end]);
        start = end;
    }
    voted
}

fn instance_ranking(pm: &PredictionMatrix, i: usize, seed: u64) -> Vec<usize> {
    vote_ranking(&pm.tally(i), &mut rng::stream(seed, i as u64))
}

/// Per-instance plurality winner; ties are broken uniformly at random.
pub fn plurality_indices(pm: &PredictionMatrix, seed: u64) -> Vec<usize> {
    (0..pm.n_instances())
        .map(|i| instance_ranking(pm, i, seed)[0])
        .collect()
}

pub fn plurality_vote(pm: &PredictionMatrix, seed: u64) -> Vec<LanguageLabel> {
    to_labels(pm, &plurality_indices(pm, seed))
}

/// Label with strictly more than half of the votes, if any.
pub fn majority_indices(pm: &PredictionMatrix) -> Vec<Option<usize>> {
    let m = pm.n_systems() as u32;
    (0..pm.n_instances())
        .map(|i| pm.tally(i).iter().position(|&c| 2 * c > m))
        .collect()
}

/// Majority labels; `None` marks an abstention. `seed` is accepted for a
/// uniform combiner interface but a strict majority is never tied.
pub fn majority_vote(pm: &PredictionMatrix, _seed: u64) -> Vec<Option<LanguageLabel>> {
    majority_indices(pm)
        .into_iter()
        .map(|o| o.map(|l| pm.label_space.label(l).clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub accuracy: f64,
    pub misclassified: Vec<usize>,
}

/// An instance counts as correct when any system labelled it correctly.
pub fn oracle(pm: &PredictionMatrix) -> OracleResult {
    let hits = oracle_hits(pm);
    OracleResult {
        accuracy: fraction(&hits),
        misclassified: misses(&hits),
    }
}

fn oracle_hits(pm: &PredictionMatrix) -> Vec<bool> {
    (0..pm.n_instances())
        .map(|i| pm.row(i).contains(&pm.gold[i]))
        .collect()
}

fn accuracy_at_n_hits(pm: &PredictionMatrix, n: usize, seed: u64) -> Vec<bool> {
    (0..pm.n_instances())
        .map(|i| {
            instance_ranking(pm, i, seed)
                .iter()
                .take(n)
                .any(|&l| l == pm.gold[i])
        })
        .collect()
}

/// Fraction of instances whose gold label is among the `n` most voted labels.
pub fn accuracy_at_n(pm: &PredictionMatrix, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("accuracy@N needs N >= 1".into()));
    }
    Ok(fraction(&accuracy_at_n_hits(pm, n, seed)))
}

/// Uniformly random label per instance.
pub fn random_indices(pm: &PredictionMatrix, seed: u64) -> Vec<usize> {
    let l = pm.label_space.len() as u64;
    (0..pm.n_instances())
        .map(|i| rng::uniform_below(&mut rng::stream(seed, i as u64), l) as usize)
        .collect()
}

fn to_labels(pm: &PredictionMatrix, indices: &[usize]) -> Vec<LanguageLabel> {
    indices
        .iter()
        .map(|&l| pm.label_space.label(l).clone())
        .collect()
}

fn fraction(hits: &[bool]) -> f64 {
    if hits.is_empty() {
        return 0.0;
    }
    hits.iter().filter(|&&h| h).count() as f64 / hits.len() as f64
}

fn misses(hits: &[bool]) -> Vec<usize> {
    hits.iter()
        .enumerate()
        .filter(|(_, &h)| !h)
        .map(|(i, _)| i)
        .collect()
}

/// Errors of one gold group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupErrors {
    pub group: GroupId,
    pub instances: usize,
    pub correct: usize,
    /// Wrong label from the gold label's own group.
    pub within_group: usize,
    /// Wrong label from another group.
    pub cross_group: usize,
    pub abstained: usize,
}

/// Splits the errors of `combined` (aligned with gold; `None` = abstain) by
/// gold group.
pub fn error_breakdown(
    pm: &PredictionMatrix,
    combined: &[Option<usize>],
) -> Result<Vec<GroupErrors>> {
    if combined.len() != pm.n_instances() {
        return Err(Error::LengthMismatch {
            context: "combined predictions".into(),
            expected: pm.n_instances(),
            found: combined.len(),
        });
    }
    let hits: Vec<bool> = combined
        .iter()
        .zip(&pm.gold)
        .map(|(p, g)| *p == Some(*g))
        .collect();
    Ok(group_summary(pm, &hits, Some(combined)))
}

fn group_summary(
    pm: &PredictionMatrix,
    hits: &[bool],
    combined: Option<&[Option<usize>]>,
) -> Vec<GroupErrors> {
    let space = &pm.label_space;
    let mut by_group: BTreeMap<&GroupId, GroupErrors> = BTreeMap::new();
    for (i, &g) in pm.gold.iter().enumerate() {
        let group = space.group_of_index(g);
        let e = by_group.entry(group).or_insert_with(|| GroupErrors {
            group: group.clone(),
            instances: 0,
            correct: 0,
            within_group: 0,
            cross_group: 0,
            abstained: 0,
        });
        e.instances += 1;
        if hits[i] {
            e.correct += 1;
            continue;
        }
        match combined.map(|c| c[i]) {
            Some(Some(p)) if space.group_of_index(p) == group => e.within_group += 1,
            Some(Some(_)) => e.cross_group += 1,
            Some(None) => e.abstained += 1,
            None => {}
        }
    }
    // Label-space group order.
    space
        .groups()
        .iter()
        .filter_map(|g| by_group.remove(g))
        .collect()
}

/// Per-instance result of a combiner.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub correct: Vec<bool>,
    /// Chosen labels for label-producing combiners; `None` entries abstain.
    pub labels: Option<Vec<Option<usize>>>,
}

impl Combination {
    fn from_labels(pm: &PredictionMatrix, labels: Vec<Option<usize>>) -> Self {
        Combination {
            correct: labels
                .iter()
                .zip(&pm.gold)
                .map(|(p, g)| *p == Some(*g))
                .collect(),
            labels: Some(labels),
        }
    }

    pub fn accuracy(&self) -> f64 {
        fraction(&self.correct)
    }

    pub fn misclassified(&self) -> Vec<usize> {
        misses(&self.correct)
    }
}

pub trait Combiner: Send + Sync {
    /// Registry name.
    fn name(&self) -> &'static str;

    /// Display name, including parameters (e.g. `accuracy@2`).
    fn display_name(&self) -> String {
        self.name().to_owned()
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({})
    }

    fn combine(&self, pm: &PredictionMatrix, seed: u64) -> Combination;

    fn report(&self, pm: &PredictionMatrix, seed: u64) -> CombinerReport {
        let c = self.combine(pm, seed);
        CombinerReport {
            combiner: self.display_name(),
            params: self.params(),
            seed,
            accuracy: c.accuracy(),
            accuracy_percent: percent(c.accuracy()),
            misclassified_indices: c.misclassified(),
            per_group: group_summary(pm, &c.correct, c.labels.as_deref()),
        }
    }
}

/// Accuracy in percent, rounded to two decimals.
pub fn percent(fraction: f64) -> f64 {
    (fraction * 10_000.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinerReport {
    pub combiner: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub accuracy: f64,
    pub accuracy_percent: f64,
    pub misclassified_indices: Vec<usize>,
    pub per_group: Vec<GroupErrors>,
}

pub struct Plurality;
pub struct Majority;
pub struct Oracle;
pub struct RandomBaseline;
pub struct AccuracyAtN {
    n: usize,
}

impl AccuracyAtN {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("accuracy@N needs N >= 1".into()));
        }
        Ok(AccuracyAtN { n })
    }
}

impl Combiner for Plurality {
    fn name(&self) -> &'static str {
        "plurality"
    }

    fn combine(&self, pm: &PredictionMatrix, seed: u64) -> Combination {
        Combination::from_labels(
            pm,
            plurality_indices(pm, seed).into_iter().map(Some).collect(),
        )
    }
}

impl Combiner for Majority {
    fn name(&self) -> &'static str {
        "majority"
    }

    fn combine(&self, pm: &PredictionMatrix, _seed: u64) -> Combination {
        Combination::from_labels(pm, majority_indices(pm))
    }
}

impl Combiner for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn combine(&self, pm: &PredictionMatrix, _seed: u64) -> Combination {
        Combination {
            correct: oracle_hits(pm),
            labels: None,
        }
    }
}

impl Combiner for AccuracyAtN {
    fn name(&self) -> &'static str {
        "accuracy-at-n"
    }

    fn display_name(&self) -> String {
        format!("accuracy@{}", self.n)
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n })
    }

    fn combine(&self, pm: &PredictionMatrix, seed: u64) -> Combination {
        Combination {
            correct: accuracy_at_n_hits(pm, self.n, seed),
            labels: None,
        }
    }
}

impl Combiner for RandomBaseline {
    fn name(&self) -> &'static str {
        "random"
    }

    fn combine(&self, pm: &PredictionMatrix, seed: u64) -> Combination {
        Combination::from_labels(pm, random_indices(pm, seed).into_iter().map(Some).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinerParams {
    /// Candidate list length for accuracy@N.
    pub n: usize,
}

impl Default for CombinerParams {
    fn default() -> Self {
        CombinerParams { n: 1 }
    }
}

type CombinerFactory = fn(&CombinerParams) -> Result<Arc<dyn Combiner>>;

/// Name → combiner constructor.
#[derive(Clone)]
pub struct CombinerRegistry {
    factories: BTreeMap<String, CombinerFactory>,
}

impl Default for CombinerRegistry {
    fn default() -> Self {
        let mut reg = CombinerRegistry {
            factories: BTreeMap::new(),
        };
        reg.register("plurality", |_| Ok(Arc::new(Plurality)));
        reg.register("majority", |_| Ok(Arc::new(Majority)));
        reg.register("oracle", |_| Ok(Arc::new(Oracle)));
        reg.register("accuracy-at-n", |p| Ok(Arc::new(AccuracyAtN::new(p.n)?)));
        reg.register("random", |_| Ok(Arc::new(RandomBaseline)));
        reg
    }
}

impl CombinerRegistry {
    pub fn register(&mut self, name: &str, factory: CombinerFactory) {
        self.factories.insert(name.to_owned(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str, params: &CombinerParams) -> Result<Arc<dyn Combiner>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "combiner",
                name: name.to_owned(),
                available: self.names().join(", "),
            })?;
        factory(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn matrix(columns: &[&[&str]], gold: &[&str]) -> PredictionMatrix {
        let s = space();
        let idx = |l: &str| s.index_of(l).unwrap();
        PredictionMatrix::from_indices(
            (0..columns.len()).map(|i| format!("sys{i}")).collect(),
            columns
                .iter()
                .map(|c| c.iter().map(|l| idx(l)).collect())
                .collect(),
            gold.iter().map(|l| idx(l)).collect(),
            s.clone(),
        )
        .unwrap()
    }

    #[test]
    fn plurality_picks_most_votes() {
        let pm = matrix(&[&["hr"], &["hr"], &["hr"], &["bs"]], &["bs"]);
        assert_eq!(plurality_vote(&pm, 0)[0].as_str(), "hr");
    }

    #[test]
    fn plurality_tie_is_seeded() {
        let pm = matrix(&[&["hr"], &["hr"], &["bs"], &["bs"]], &["bs"]);
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..64 {
            let a = plurality_vote(&pm, seed)[0].clone();
            assert_eq!(a, plurality_vote(&pm, seed)[0]);
            assert!(a.as_str() == "hr" || a.as_str() == "bs");
            seen.insert(a);
        }
        assert_eq!(
            seen.len(),
            2,
            "both tied labels should be drawn for some seed"
        );
    }

    #[test]
    fn majority_cases() {
        let pm = matrix(&[&["bs"], &["bs"], &["hr"]], &["bs"]);
        assert_eq!(
            majority_vote(&pm, 0),
            vec![Some(LanguageLabel::new("bs").unwrap())]
        );
        let pm = matrix(&[&["bs"], &["bs"], &["hr"], &["hr"]], &["bs"]);
        assert_eq!(majority_vote(&pm, 0), vec![None]);
        let pm = matrix(&[&["sk", "cz"]], &["cz", "cz"]);
        let single: Vec<_> = majority_vote(&pm, 0)
            .into_iter()
            .map(|l| l.unwrap().to_string())
            .collect();
        assert_eq!(single, ["sk", "cz"]);
    }

    #[test]
    fn oracle_cases() {
        let pm = matrix(
            &[&["bs", "hr", "cz"], &["hr", "hr", "sk"]],
            &["bs", "hr", "sk"],
        );
        assert_eq!(
            oracle(&pm),
            OracleResult {
                accuracy: 1.0,
                misclassified: vec![]
            }
        );

        // Disjoint error sets that jointly cover everything.
        let pm = matrix(
            &[&["bs", "sr", "cz"], &["sr", "hr", "sk"]],
            &["bs", "hr", "cz"],
        );
        assert_eq!(oracle(&pm).accuracy, 1.0);

        let pm = matrix(
            &[&["sr", "sr", "cz"], &["sr", "hr", "sk"]],
            &["bs", "hr", "sr"],
        );
        let o = oracle(&pm);
        assert_eq!(o.misclassified, vec![0, 2]);
        assert!((o.accuracy - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_at_one_equals_plurality() {
        let pm = matrix(
            &[
                &["hr", "bs", "cz", "sk"],
                &["bs", "bs", "sk", "cz"],
                &["sr", "hr", "cz", "sk"],
            ],
            &["bs", "bs", "cz", "sk"],
        );
        for seed in 0..20 {
            let plural = Plurality.combine(&pm, seed).accuracy();
            assert_eq!(accuracy_at_n(&pm, 1, seed).unwrap(), plural);
        }
        assert!(accuracy_at_n(&pm, 0, 1).is_err());
    }

    #[test]
    fn accuracy_at_large_n_equals_oracle() {
        let pm = matrix(
            &[
                &["hr", "bs", "sk"],
                &["bs", "sr", "sk"],
                &["sr", "sr", "cz"],
            ],
            &["bs", "hr", "cz"],
        );
        assert_eq!(accuracy_at_n(&pm, 5, 3).unwrap(), oracle(&pm).accuracy);
    }

    #[test]
    fn breakdown_cases() {
        let pm = matrix(&[&["bs", "cz"]], &["bs", "cz"]);
        let perfect: Vec<_> = pm.gold().iter().map(|&g| Some(g)).collect();
        let b = error_breakdown(&pm, &perfect).unwrap();
        assert!(b
            .iter()
            .all(|g| g.within_group == 0 && g.cross_group == 0 && g.abstained == 0));

        let pm = matrix(&[&["hr"]], &["bs"]);
        let b = error_breakdown(&pm, &[Some(space().index_of("hr").unwrap())]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(
            (b[0].group.as_str(), b[0].within_group, b[0].cross_group),
            ("A", 1, 0)
        );

        assert!(error_breakdown(&pm, &[]).is_err());
    }

    #[test]
    fn matrix_validation() {
        let s = space();
        let gold = vec![LanguageLabel::new("bs").unwrap(); 3];
        let short = vec![vec![LanguageLabel::new("bs").unwrap(); 2]];
        assert!(matches!(
            PredictionMatrix::new(vec!["a".into()], &short, &gold, s.clone()),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(PredictionMatrix::new(vec![], &[], &gold, s).is_err());
    }

    #[test]
    fn registry_builds_every_combiner() {
        let reg = CombinerRegistry::default();
        assert_eq!(
            reg.names(),
            ["accuracy-at-n", "majority", "oracle", "plurality", "random"]
        );
        let c = reg
            .build("accuracy-at-n", &CombinerParams { n: 2 })
            .unwrap();
        assert_eq!(c.display_name(), "accuracy@2");
        assert!(reg
            .build("accuracy-at-n", &CombinerParams { n: 0 })
            .is_err());
        assert!(matches!(
            reg.build("stacking", &CombinerParams::default()),
            Err(Error::UnknownStrategy { .. })
        ));
    }

    #[test]
    fn report_has_per_group_rows() {
        let pm = matrix(
            &[&["hr", "cz", "sk"], &["hr", "sk", "sk"]],
            &["bs", "cz", "sk"],
        );
        let r = Plurality.report(&pm, 1);
        assert_eq!(r.per_group.len(), 2);
        assert_eq!(r.per_group[0].within_group, 1);
        assert_eq!(r.misclassified_indices[0], 0);
        assert_eq!(r.seed, 1);
    }
}
