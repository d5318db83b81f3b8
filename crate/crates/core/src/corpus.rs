//! DSLCC-style corpora: label spaces, parsing, subsetting and subsampling.
//!
//! A corpus file holds one `text<TAB>label` record per line (UTF-8, LF or
//! CRLF). Instance order is significant: run files produced by systems are
//! aligned with the test corpus by line number.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

/// Group that unknown labels are routed to by lenient parsing.
pub const OTHERS_GROUP: &str = "X";

/// Default canonical named-entity placeholder.
pub const CANONICAL_PLACEHOLDER: &str = "#NE#";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageLabel(String);

impl LanguageLabel {
    pub fn new(code: impl Into<String>) -> Result<Self> {
        let code = code.into();
        if code.is_empty() || code.contains(['\t', '\n', '\r']) {
            return Err(Error::InvalidLabel(code));
        }
        Ok(LanguageLabel(code))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupId(String);

impl GroupId {
    pub fn new(id: impl Into<String>) -> Self {
        GroupId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// On-disk label space: `{ "labels": [{"code": "...", "group": "..."}] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSpaceConfig {
    pub labels: Vec<LabelEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelEntry {
    pub code: String,
    pub group: String,
}

/// Ordered set of labels, each assigned to exactly one group.
///
/// Label order is the row/column order of every matrix the toolkit produces.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "LabelSpaceConfig", into = "LabelSpaceConfig")]
pub struct LabelSpace {
    labels: Vec<LanguageLabel>,
    group_of: Vec<GroupId>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl LabelSpace {
    /// Builds a label space from `(code, group)` pairs, keeping their order.
    pub fn new<I, L, G>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, G)>,
        L: Into<String>,
        G: Into<String>,
    {
        let mut space = LabelSpace::default();
        for (code, group) in entries {
            let label = LanguageLabel::new(code)?;
            let group = group.into();
            if group.trim().is_empty() {
                return Err(Error::EmptyGroup(label.0));
            }
            if space.index.contains_key(label.as_str()) {
                return Err(Error::DuplicateLabel(label.0));
            }
            space.push(label, GroupId(group));
        }
        if space.is_empty() {
            return Err(Error::EmptyLabelSpace);
        }
        Ok(space)
    }

    /// A label space with no labels; only useful as the seed of lenient parsing.
    pub fn empty() -> Self {
        LabelSpace::default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: LabelSpaceConfig = serde_json::from_str(text)?;
        LabelSpace::try_from(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LabelSpaceConfig::from(self.clone()))
            .expect("label space serialises")
    }

    fn push(&mut self, label: LanguageLabel, group: GroupId) {
        self.index.insert(label.0.clone(), self.labels.len());
        self.labels.push(label);
        self.group_of.push(group);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[LanguageLabel] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &LanguageLabel {
        &self.labels[index]
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn contains(&self, code: &str) -> bool {
        self.index_of(code).is_some()
    }

    pub fn group_of(&self, label: &LanguageLabel) -> Option<&GroupId> {
        self.index.get(label.as_str()).map(|&i| &self.group_of[i])
    }

    pub fn group_of_index(&self, index: usize) -> &GroupId {
        &self.group_of[index]
    }

    /// Distinct groups in order of first appearance.
    pub fn groups(&self) -> Vec<GroupId> {
        let mut seen = BTreeSet::new();
        self.group_of
            .iter()
            .filter(|g| seen.insert(g.as_str()))
            .cloned()
            .collect()
    }

    pub fn has_group(&self, group: &GroupId) -> bool {
        self.group_of.contains(group)
    }

    /// Label indices belonging to `group`, in label-space order.
    pub fn members(&self, group: &GroupId) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| &self.group_of[i] == group)
            .collect()
    }

    /// Sub-space restricted to the given groups, preserving label order.
    pub fn restrict(&self, groups: &BTreeSet<GroupId>) -> LabelSpace {
        let mut space = LabelSpace::default();
        for (label, group) in self.labels.iter().zip(&self.group_of) {
            if groups.contains(group) {
                space.push(label.clone(), group.clone());
            }
        }
        space
    }

    /// Label space whose labels are this space's group ids (each in its own group).
    pub fn group_space(&self) -> LabelSpace {
        let mut space = LabelSpace::default();
        for g in self.groups() {
            space.push(LanguageLabel(g.0.clone()), g);
        }
        space
    }

    /// Index map from this space's labels into `other`'s.
    pub fn index_map_into(&self, other: &LabelSpace) -> Option<Vec<usize>> {
        self.labels
            .iter()
            .map(|l| other.index.get(l.as_str()).copied())
            .collect()
    }

    fn extend_lenient(&mut self, code: &str) -> Result<usize> {
        let label = LanguageLabel::new(code)?;
        self.push(label, GroupId(OTHERS_GROUP.to_owned()));
        Ok(self.len() - 1)
    }
}

impl TryFrom<LabelSpaceConfig> for LabelSpace {
    type Error = Error;

    fn try_from(config: LabelSpaceConfig) -> Result<Self> {
        LabelSpace::new(config.labels.into_iter().map(|e| (e.code, e.group)))
    }
}

impl From<LabelSpace> for LabelSpaceConfig {
    fn from(space: LabelSpace) -> Self {
        LabelSpaceConfig {
            labels: space
                .labels
                .into_iter()
                .zip(space.group_of)
                .map(|(l, g)| LabelEntry {
                    code: l.0,
                    group: g.0,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub text: String,
    pub label: LanguageLabel,
}

/// Ordered instances bound to a label space.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    instances: Vec<Instance>,
    label_space: LabelSpace,
}

impl Dataset {
    pub fn new(instances: Vec<Instance>, label_space: LabelSpace) -> Result<Self> {
        for (i, inst) in instances.iter().enumerate() {
            if !label_space.contains(inst.label.as_str()) {
                return Err(Error::UnknownLabel {
                    label: inst.label.0.clone(),
                    line: Some(i + 1),
                });
            }
        }
        Ok(Dataset {
            instances,
            label_space,
        })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn label_space(&self) -> &LabelSpace {
        &self.label_space
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Label index of every instance, in instance order.
    pub fn label_indices(&self) -> Vec<usize> {
        self.instances
            .iter()
            .map(|inst| self.label_space.index[inst.label.as_str()])
            .collect()
    }

    pub fn gold(&self) -> Vec<LanguageLabel> {
        self.instances.iter().map(|i| i.label.clone()).collect()
    }

    /// Instance count per label, in label-space order.
    pub fn counts_per_label(&self) -> Vec<usize> {
        let mut counts = vec![0; self.label_space.len()];
        for i in self.label_indices() {
            counts[i] += 1;
        }
        counts
    }

    /// Serialises back to `text<TAB>label` lines (LF line endings).
    pub fn to_dslcc(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            out.push_str(&inst.text);
            out.push('\t');
            out.push_str(inst.label.as_str());
            out.push('\n');
        }
        out
    }

    /// Concatenates datasets over the union of their label spaces.
    pub fn concat(parts: &[Dataset]) -> Result<Dataset> {
        let mut space = LabelSpace::default();
        let mut instances = Vec::new();
        for part in parts {
            for (label, group) in part
                .label_space
                .labels
                .iter()
                .zip(&part.label_space.group_of)
            {
                match space.group_of(label) {
                    Some(g) if g != group => {
                        return Err(Error::InvalidParameter(format!(
                            "label `{label}` is in group `{g}` and `{group}`"
                        )))
                    }
                    Some(_) => {}
                    None => space.push(label.clone(), group.clone()),
                }
            }
            instances.extend(part.instances.iter().cloned());
        }
        Dataset::new(instances, space)
    }
}

/// Parses a DSLCC corpus.
///
/// Blank lines are skipped. With `strict`, a label outside `label_space`
/// aborts; otherwise the label is appended to the space in group
/// [`OTHERS_GROUP`].
pub fn parse_dslcc<R: BufRead>(
    reader: R,
    label_space: &LabelSpace,
    strict: bool,
) -> Result<Dataset> {
    let mut space = label_space.clone();
    let mut instances = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let (text, code) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected `text<TAB>label`, found no tab"))?;
        if text.trim().is_empty() {
            return Err(Error::parse(lineno, "empty text field"));
        }
        if code.is_empty() {
            return Err(Error::parse(lineno, "empty label field"));
        }
        let index = match space.index_of(code) {
            Some(idx) => idx,
            None if strict => {
                return Err(Error::UnknownLabel {
                    label: code.to_owned(),
                    line: Some(lineno),
                })
            }
            None => space.extend_lenient(code)?,
        };
        instances.push(Instance {
            text: text.to_owned(),
            label: space.labels[index].clone(),
        });
    }
    Ok(Dataset {
        instances,
        label_space: space,
    })
}

pub fn read_dslcc(
    path: impl AsRef<Path>,
    label_space: &LabelSpace,
    strict: bool,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_dslcc(std::io::BufReader::new(file), label_space, strict)
}

/// Draws exactly `n_per_label` instances of every label, uniformly without
/// replacement. The result keeps source order.
pub fn subsample_balanced(ds: &Dataset, n_per_label: usize, seed: u64) -> Result<Dataset> {
    let labels = ds.label_indices();
    let mut by_label: Vec<Vec<usize>> = vec![Vec::new(); ds.label_space.len()];
    for (pos, &l) in labels.iter().enumerate() {
        by_label[l].push(pos);
    }
    let mut rng = rng::generator(seed);
    let mut chosen = Vec::with_capacity(n_per_label * by_label.len());
    for (l, mut positions) in by_label.into_iter().enumerate() {
        if positions.len() < n_per_label {
            return Err(Error::InsufficientData {
                label: ds.label_space.labels[l].0.clone(),
                available: positions.len(),
                requested: n_per_label,
            });
        }
        // Partial Fisher–Yates: the first n slots become a uniform sample.
        let len = positions.len();
        for i in 0..n_per_label {
            let j = i + rng::uniform_below(&mut rng, (len - i) as u64) as usize;
            positions.swap(i, j);
        }
        chosen.extend_from_slice(&positions[..n_per_label]);
    }
    chosen.sort_unstable();
    Ok(Dataset {
        instances: chosen
            .into_iter()
            .map(|p| ds.instances[p].clone())
            .collect(),
        label_space: ds.label_space.clone(),
    })
}

/// Keeps only instances whose label falls in one of `groups`.
pub fn filter_groups(ds: &Dataset, groups: &BTreeSet<GroupId>) -> Result<Dataset> {
    if let Some(g) = groups.iter().find(|g| !ds.label_space.has_group(g)) {
        return Err(Error::UnknownGroup(g.0.clone()));
    }
    let space = ds.label_space.restrict(groups);
    let instances = ds
        .instances
        .iter()
        .filter(|inst| space.index.contains_key(inst.label.as_str()))
        .cloned()
        .collect();
    Ok(Dataset {
        instances,
        label_space: space,
    })
}

/// Replaces every maximal run of whitespace-separated `marker` tokens with a
/// single `canonical` token. Text outside the runs is left byte-identical.
pub fn normalize_text(text: &str, marker: &str, canonical: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut copied = 0;
    let mut run: Option<(usize, usize)> = None;
    for (start, token) in tokens_with_offsets(text) {
        let end = start + token.len();
        if token == marker {
            run = Some(match run {
                Some((s, _)) => (s, end),
                None => (start, end),
            });
        } else if let Some((s, e)) = run.take() {
            out.push_str(&text[copied..s]);
            out.push_str(canonical);
            copied = e;
        }
    }
    if let Some((s, e)) = run {
        out.push_str(&text[copied..s]);
        out.push_str(canonical);
        copied = e;
    }
    out.push_str(&text[copied..]);
    out
}

fn tokens_with_offsets(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split(char::is_whitespace)
        .scan(0usize, |offset, piece| {
            let start = *offset;
            // `split` consumed exactly one whitespace char after `piece`.
            let ws = text[start + piece.len()..]
                .chars()
                .next()
                .map_or(0, char::len_utf8);
            *offset = start + piece.len() + ws;
            Some((start, piece))
        })
        .filter(|(_, piece)| !piece.is_empty())
}

pub fn normalize_placeholders(ds: &Dataset, marker: &str, canonical: &str) -> Result<Dataset> {
    for (what, token) in [
        ("placeholder marker", marker),
        ("canonical placeholder", canonical),
    ] {
        if token.is_empty() || token.contains(char::is_whitespace) {
            return Err(Error::InvalidParameter(format!(
                "{what} must be a non-empty token without whitespace"
            )));
        }
    }
    let instances = ds
        .instances
        .iter()
        .map(|inst| Instance {
            text: normalize_text(&inst.text, marker, canonical),
            label: inst.label.clone(),
        })
        .collect();
    Ok(Dataset {
        instances,
        label_space: ds.label_space.clone(),
    })
}

/// Splits a dataset into the first `n_train` instances of each label and the rest.
pub fn split_per_label(ds: &Dataset, n_train: usize) -> (Dataset, Dataset) {
    let mut seen = vec![0usize; ds.label_space.len()];
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (inst, l) in ds.instances.iter().zip(ds.label_indices()) {
        seen[l] += 1;
        if seen[l] <= n_train {
            train.push(inst.clone());
        } else {
            test.push(inst.clone());
        }
    }
    (
        Dataset {
            instances: train,
            label_space: ds.label_space.clone(),
        },
        Dataset {
            instances: test,
            label_space: ds.label_space.clone(),
        },
    )
}

// Synthetic text shape.
const WORDS_PER_SENTENCE: (u64, u64) = (5, 8);
const CHARS_PER_WORD: (u64, u64) = (2, 7);
const LEXICON_SIZE: usize = 500;
const ZIPF_EXPONENT: f64 = 0.6;
// Share of the non-own-block character mass that stays inside the group.
const GROUP_AFFINITY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_labels: usize,
    pub n_per_label: usize,
    pub alphabet_size: usize,
    pub skew: f64,
    pub seed: u64,
}

fn synthetic_char(i: usize) -> char {
    if i < 26 {
        (b'a' + i as u8) as char
    } else {
        char::from_u32(0x4E00 + (i - 26) as u32).expect("CJK block char")
    }
}

/// Zipf-weighted word list.
struct Lexicon {
    words: Vec<String>,
    cumulative: Vec<f64>,
}

impl Lexicon {
    fn new(words: Vec<String>) -> Self {
        let mut acc = 0.0;
        let cumulative = (0..words.len())
            .map(|r| {
                acc += ((r + 1) as f64).powf(-ZIPF_EXPONENT);
                acc
            })
            .collect();
        Lexicon { words, cumulative }
    }

    fn draw(&self, rng: &mut rand_chacha::ChaCha8Rng) -> &str {
        let total = *self.cumulative.last().expect("non-empty lexicon");
        let u = rng::unit_f64(rng) * total;
        let r = self.cumulative.partition_point(|&c| c <= u);
        &self.words[r.min(self.words.len() - 1)]
    }
}

/// Generates a corpus of artificial "languages".
///
/// The alphabet is split into one contiguous block per label and labels are
/// grouped in consecutive pairs. Every label owns a Zipf-distributed lexicon
/// whose words take a character from the label's block with probability
/// `skew⁴` and otherwise mostly from the group's blocks; each group also has
/// a shared lexicon drawn from its blocks. A sentence word comes from the
/// label's own lexicon with probability `(1 + skew) / 2`, else from the
/// group lexicon.
/// Groups are therefore easier to separate than the labels inside them, and
/// `skew = 1` makes the label alphabets disjoint. Instances are emitted
/// round-robin over labels.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    let SyntheticSpec {
        n_labels,
        n_per_label,
        alphabet_size,
        skew,
        seed,
    } = *spec;
    if n_labels < 2 {
        return Err(Error::InvalidParameter(
            "n_labels must be at least 2".into(),
        ));
    }
    if alphabet_size < n_labels || alphabet_size > 20_000 {
        return Err(Error::InvalidParameter(format!(
            "alphabet_size must be in [n_labels, 20000], got {alphabet_size}"
        )));
    }
    if !(skew > 0.0 && skew <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "skew must be in (0, 1], got {skew}"
        )));
    }

    let block = |l: usize| (l * alphabet_size / n_labels)..((l + 1) * alphabet_size / n_labels);
    let n_groups = n_labels.div_ceil(2);
    let group_range = |g: usize| {
        let last = (2 * g + 1).min(n_labels - 1);
        block(2 * g).start..block(last).end
    };
    let space = LabelSpace::new(
        (0..n_labels).map(|l| (format!("syn{:02}", l + 1), format!("G{}", l / 2 + 1))),
    )?;

    let mut rng = rng::generator(seed);
    let draw_in = |range: std::ops::Range<usize>, rng: &mut rand_chacha::ChaCha8Rng| {
        range.start + rng::uniform_below(rng, range.len() as u64) as usize
    };
    let make_word = |rng: &mut rand_chacha::ChaCha8Rng, own: Option<usize>, group: usize| {
        let n_chars =
            CHARS_PER_WORD.0 + rng::uniform_below(rng, CHARS_PER_WORD.1 - CHARS_PER_WORD.0 + 1);
        (0..n_chars)
            .map(|_| {
                let u = rng::unit_f64(rng);
                let own_mass = own.map_or(0.0, |_| skew.powi(4));
                let c = match own {
                    Some(l) if u < own_mass => draw_in(block(l), rng),
                    _ if u < own_mass + (1.0 - own_mass) * GROUP_AFFINITY => {
                        draw_in(group_range(group), rng)
                    }
                    _ => draw_in(0..alphabet_size, rng),
                };
                synthetic_char(c)
            })
            .collect::<String>()
    };

    let own: Vec<Lexicon> = (0..n_labels)
        .map(|l| {
            Lexicon::new(
                (0..LEXICON_SIZE)
                    .map(|_| make_word(&mut rng, Some(l), l / 2))
                    .collect(),
            )
        })
        .collect();
    let shared: Vec<Lexicon> = (0..n_groups)
        .map(|g| {
            Lexicon::new(
                (0..LEXICON_SIZE)
                    .map(|_| make_word(&mut rng, None, g))
                    .collect(),
            )
        })
        .collect();

    let own_word = (1.0 + skew) / 2.0;
    let mut instances = Vec::with_capacity(n_labels * n_per_label);
    for _ in 0..n_per_label {
        for l in 0..n_labels {
            let n_words = WORDS_PER_SENTENCE.0
                + rng::uniform_below(&mut rng, WORDS_PER_SENTENCE.1 - WORDS_PER_SENTENCE.0 + 1);
            let words: Vec<&str> = (0..n_words)
                .map(|_| {
                    if rng::unit_f64(&mut rng) < own_word {
                        own[l].draw(&mut rng)
                    } else {
                        shared[l / 2].draw(&mut rng)
                    }
                })
                .collect();
            instances.push(Instance {
                text: words.join(" "),
                label: space.labels[l].clone(),
            });
        }
    }
    Ok(Dataset {
        instances,
        label_space: space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_abc() -> LabelSpace {
        LabelSpace::new([
            ("bs", "A"),
            ("hr", "A"),
            ("sr", "A"),
            ("cz", "C"),
            ("sk", "C"),
        ])
        .unwrap()
    }

    fn parse(text: &str, strict: bool) -> Result<Dataset> {
        parse_dslcc(text.as_bytes(), &space_abc(), strict)
    }

    #[test]
    fn parses_single_record() {
        let space = LabelSpace::new([("es-AR", "E")]).unwrap();
        let ds = parse_dslcc("Hola mundo\tes-AR\n".as_bytes(), &space, true).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.instances()[0].text, "Hola mundo");
        assert_eq!(ds.instances()[0].label.as_str(), "es-AR");
    }

    #[test]
    fn missing_tab_names_the_line() {
        let err = parse("ok\tbs\nno tab here\n", true).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_text_is_rejected() {
        assert!(matches!(
            parse("   \tbs\n", true),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn strict_rejects_unknown_label_lenient_routes_to_others() {
        let err = parse("a\tbs\nb\txx\n", true).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { line: Some(2), .. }));

        let ds = parse("a\tbs\nb\txx\n", false).unwrap();
        let xx = LanguageLabel::new("xx").unwrap();
        assert_eq!(
            ds.label_space().group_of(&xx).unwrap().as_str(),
            OTHERS_GROUP
        );
        assert_eq!(ds.label_space().len(), 6);
    }

    #[test]
    fn crlf_and_blank_lines_are_accepted() {
        let ds = parse("a\tbs\r\n\r\nb\thr\r\n", true).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.instances()[1].text, "b");
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "Dobar dan\thr\nDobrý den\tcz\nDobro jutro\tsr\n";
        assert_eq!(parse(text, true).unwrap().to_dslcc(), text);
    }

    #[test]
    fn label_space_from_config() {
        let space = LabelSpace::from_json(
            r#"{"labels":[{"code":"bs","group":"A"},{"code":"hr","group":"A"},{"code":"sr","group":"A"}]}"#,
        )
        .unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.groups(), vec![GroupId::new("A")]);
        assert_eq!(space.label(2).as_str(), "sr");
    }

    #[test]
    fn label_space_errors() {
        assert!(matches!(
            LabelSpace::from_json(r#"{"labels":[]}"#),
            Err(Error::EmptyLabelSpace)
        ));
        assert!(matches!(
            LabelSpace::new([("cz", "C"), ("cz", "C")]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            LabelSpace::new([("cz", "")]),
            Err(Error::EmptyGroup(_))
        ));
        assert!(matches!(
            LabelSpace::new([("c\tz", "C")]),
            Err(Error::InvalidLabel(_))
        ));
    }

    #[test]
    fn label_space_json_round_trip() {
        let space = space_abc();
        assert_eq!(LabelSpace::from_json(&space.to_json()).unwrap(), space);
    }

    fn corpus(per_label: usize) -> Dataset {
        let space = space_abc();
        let mut instances = Vec::new();
        for i in 0..per_label {
            for l in space.labels() {
                instances.push(Instance {
                    text: format!("{l} sentence {i}"),
                    label: l.clone(),
                });
            }
        }
        Dataset::new(instances, space).unwrap()
    }

    #[test]
    fn subsample_is_balanced_and_deterministic() {
        let ds = corpus(200);
        let a = subsample_balanced(&ds, 20, 1).unwrap();
        let b = subsample_balanced(&ds, 20, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.counts_per_label().iter().all(|&c| c == 20));
        let c = subsample_balanced(&ds, 20, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn subsample_keeps_source_order() {
        let ds = corpus(50);
        let sub = subsample_balanced(&ds, 10, 5).unwrap();
        let pos: Vec<usize> = sub
            .instances()
            .iter()
            .map(|inst| ds.instances().iter().position(|x| x == inst).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subsample_full_size_is_identity() {
        let ds = corpus(30);
        for seed in [0, 1, 99] {
            assert_eq!(subsample_balanced(&ds, 30, seed).unwrap(), ds);
        }
    }

    #[test]
    fn subsample_insufficient_names_label() {
        let mut ds = corpus(10);
        ds.instances.retain(|i| i.text != "sk sentence 3");
        match subsample_balanced(&ds, 10, 0).unwrap_err() {
            Error::InsufficientData {
                label, available, ..
            } => {
                assert_eq!(label, "sk");
                assert_eq!(available, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn filter_groups_cases() {
        let ds = corpus(4);
        let only_c: BTreeSet<_> = [GroupId::new("C")].into();
        let c = filter_groups(&ds, &only_c).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.label_space().len(), 2);

        let all: BTreeSet<_> = ds.label_space().groups().into_iter().collect();
        assert_eq!(filter_groups(&ds, &all).unwrap(), ds);

        let none = filter_groups(&ds, &BTreeSet::new()).unwrap();
        assert!(none.is_empty());

        let bad: BTreeSet<_> = [GroupId::new("Q")].into();
        assert!(matches!(
            filter_groups(&ds, &bad),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn placeholder_normalisation() {
        assert_eq!(
            normalize_text("visitó NE# ayer", "NE#", "#NE#"),
            "visitó #NE# ayer"
        );
        assert_eq!(
            normalize_text("NE# NE#  NE# dijo", "NE#", "#NE#"),
            "#NE# dijo"
        );
        assert_eq!(normalize_text("a  b\tc", "NE#", "#NE#"), "a  b\tc");
        assert_eq!(normalize_text("x NE#", "NE#", "#NE#"), "x #NE#");
        assert_eq!(normalize_text("xNE# NE#y", "NE#", "#NE#"), "xNE# NE#y");
        assert_eq!(
            normalize_text("é NE# ü NE#", "NE#", "#NE#"),
            "é #NE# ü #NE#"
        );
    }

    #[test]
    fn placeholder_rejects_bad_tokens() {
        let ds = corpus(1);
        assert!(normalize_placeholders(&ds, "", "#NE#").is_err());
        assert!(normalize_placeholders(&ds, "NE#", "a b").is_err());
    }

    #[test]
    fn synthetic_is_reproducible() {
        let spec = SyntheticSpec {
            n_labels: 4,
            n_per_label: 1000,
            alphabet_size: 26,
            skew: 0.5,
            seed: 7,
        };
        let a = gen_synthetic(&spec).unwrap();
        assert_eq!(a.len(), 4000);
        assert_eq!(a, gen_synthetic(&spec).unwrap());
        assert_eq!(a.label_space().groups().len(), 2);
        assert!(a.counts_per_label().iter().all(|&c| c == 1000));
    }

    #[test]
    fn synthetic_full_skew_has_disjoint_alphabets() {
        let ds = gen_synthetic(&SyntheticSpec {
            n_labels: 3,
            n_per_label: 50,
            alphabet_size: 9,
            skew: 1.0,
            seed: 1,
        })
        .unwrap();
        let mut alphabets = vec![BTreeSet::new(); 3];
        for (inst, l) in ds.instances().iter().zip(ds.label_indices()) {
            alphabets[l].extend(inst.text.chars().filter(|c| *c != ' '));
        }
        for a in 0..3 {
            for b in a + 1..3 {
                assert!(alphabets[a].is_disjoint(&alphabets[b]));
            }
        }
        assert_eq!(ds.label_space().groups().len(), 2);
    }

    #[test]
    fn synthetic_parameter_errors() {
        let base = SyntheticSpec {
            n_labels: 1,
            n_per_label: 10,
            alphabet_size: 26,
            skew: 0.5,
            seed: 0,
        };
        assert!(gen_synthetic(&base).is_err());
        assert!(gen_synthetic(&SyntheticSpec {
            n_labels: 30,
            ..base
        })
        .is_err());
        assert!(gen_synthetic(&SyntheticSpec {
            n_labels: 2,
            skew: 0.0,
            ..base
        })
        .is_err());
        assert!(gen_synthetic(&SyntheticSpec {
            n_labels: 2,
            skew: 1.5,
            ..base
        })
        .is_err());
    }
}
