//! Sparse character / word n-gram features.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::{Error, Result};

/// Joins the tokens of a word n-gram. Word features are also prefixed with it
/// in the vocabulary so they never collide with character n-grams.
pub const WORD_SEPARATOR: char = '\u{1F}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Counts,
    Tfidf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub char_orders: BTreeSet<usize>,
    pub word_orders: BTreeSet<usize>,
    pub lowercase: bool,
    pub min_doc_freq: usize,
    pub weighting: Weighting,
}

impl Default for FeatureConfig {
    /// Character 6-grams, raw counts.
    fn default() -> Self {
        FeatureConfig::chars(6)
    }
}

impl FeatureConfig {
    pub fn chars(n: usize) -> Self {
        FeatureConfig {
            char_orders: [n].into(),
            word_orders: BTreeSet::new(),
            lowercase: false,
            min_doc_freq: 1,
            weighting: Weighting::Counts,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.char_orders.is_empty() && self.word_orders.is_empty() {
            return Err(Error::InvalidParameter(
                "feature config needs at least one char or word order".into(),
            ));
        }
        if self.char_orders.contains(&0) || self.word_orders.contains(&0) {
            return Err(Error::InvalidParameter("n-gram orders must be >= 1".into()));
        }
        if self.min_doc_freq == 0 {
            return Err(Error::InvalidParameter("min_doc_freq must be >= 1".into()));
        }
        Ok(())
    }

    /// Calls `f` on every feature occurrence of `text`.
    fn for_each_feature(&self, text: &str, mut f: impl FnMut(&str)) {
        let lowered;
        let text = if self.lowercase {
            lowered = text.to_lowercase();
            lowered.as_str()
        } else {
            text
        };
        if !self.char_orders.is_empty() {
            let bounds: Vec<usize> = text
                .char_indices()
                .map(|(i, _)| i)
                .chain(std::iter::once(text.len()))
                .collect();
            let n_chars = bounds.len() - 1;
            for &n in &self.char_orders {
                for start in 0..n_chars.saturating_sub(n - 1) {
                    f(&text[bounds[start]..bounds[start + n]]);
                }
            }
        }
        if !self.word_orders.is_empty() {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let mut buf = String::new();
            for &n in &self.word_orders {
                for window in tokens.windows(n) {
                    buf.clear();
                    for tok in window {
                        buf.push(WORD_SEPARATOR);
                        buf.push_str(tok);
                    }
                    f(&buf);
                }
            }
        }
    }
}

/// Every length-`n` window over the Unicode scalar values of `text`, in order.
pub fn extract_char_ngrams(text: &str, n: usize) -> Vec<&str> {
    assert!(n >= 1, "n-gram order must be >= 1");
    let bounds: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .collect();
    let n_chars = bounds.len() - 1;
    (0..n_chars.saturating_sub(n - 1))
        .map(|s| &text[bounds[s]..bounds[s + n]])
        .collect()
}

/// Word n-grams over whitespace-delimited tokens, joined by [`WORD_SEPARATOR`].
pub fn extract_word_ngrams(text: &str, n: usize) -> Vec<String> {
    assert!(n >= 1, "n-gram order must be >= 1");
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let sep = WORD_SEPARATOR.to_string();
    tokens.windows(n).map(|w| w.join(&sep)).collect()
}

/// Feature dictionary with document frequencies.
///
/// Ids are assigned in lexicographic order of the feature strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "VocabularyFile", try_from = "VocabularyFile")]
pub struct Vocabulary {
    features: Vec<String>,
    doc_freq: Vec<u32>,
    n_docs: usize,
    ids: HashMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    n_docs: usize,
    entries: Vec<VocabularyEntry>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyEntry {
    feature: String,
    id: u32,
    doc_freq: u32,
}

impl Vocabulary {
    fn from_parts(features: Vec<String>, doc_freq: Vec<u32>, n_docs: usize) -> Self {
        let ids = features
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i as u32))
            .collect();
        Vocabulary {
            features,
            doc_freq,
            n_docs,
            ids,
        }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn id(&self, feature: &str) -> Option<u32> {
        self.ids.get(feature).copied()
    }

    pub fn feature(&self, id: u32) -> &str {
        &self.features[id as usize]
    }

    pub fn doc_freq(&self, id: u32) -> u32 {
        self.doc_freq[id as usize]
    }

    fn idf(&self, id: u32) -> f64 {
        ((1.0 + self.n_docs as f64) / (1.0 + self.doc_freq(id) as f64)).ln() + 1.0
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

impl From<Vocabulary> for VocabularyFile {
    fn from(vocab: Vocabulary) -> Self {
        VocabularyFile {
            n_docs: vocab.n_docs,
            entries: vocab
                .features
                .into_iter()
                .zip(vocab.doc_freq)
                .enumerate()
                .map(|(id, (feature, doc_freq))| VocabularyEntry {
                    feature,
                    id: id as u32,
                    doc_freq,
                })
                .collect(),
        }
    }
}

impl TryFrom<VocabularyFile> for Vocabulary {
    type Error = Error;

    fn try_from(file: VocabularyFile) -> Result<Self> {
        let mut entries = file.entries;
        entries.sort_by_key(|e| e.id);
        for (i, e) in entries.iter().enumerate() {
            if e.id as usize != i {
                return Err(Error::InvalidParameter(format!(
                    "vocabulary ids must be dense, missing id {i}"
                )));
            }
            if e.doc_freq == 0 || e.doc_freq as usize > file.n_docs {
                return Err(Error::InvalidParameter(format!(
                    "doc_freq of `{}` outside [1, n_docs]",
                    e.feature
                )));
            }
        }
        let (features, doc_freq) = entries.into_iter().map(|e| (e.feature, e.doc_freq)).unzip();
        Ok(Vocabulary::from_parts(features, doc_freq, file.n_docs))
    }
}

pub fn build_vocabulary(ds: &Dataset, cfg: &FeatureConfig) -> Result<Vocabulary> {
    cfg.validate()?;
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut df: HashMap<String, u32> = HashMap::new();
    let mut in_doc: HashSet<String> = HashSet::new();
    for inst in ds.instances() {
        in_doc.clear();
        cfg.for_each_feature(&inst.text, |f| {
            if !in_doc.contains(f) {
                in_doc.insert(f.to_owned());
            }
        });
        for f in in_doc.drain() {
            *df.entry(f).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(String, u32)> = df
        .into_iter()
        .filter(|(_, c)| *c as usize >= cfg.min_doc_freq)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    kept.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let (features, doc_freq) = kept.into_iter().unzip();
    Ok(Vocabulary::from_parts(features, doc_freq, ds.len()))
}

/// Sparse vector with strictly increasing ids and no zero entries.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    entries: Vec<(u32, f64)>,
}

impl FeatureVector {
    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }
}

pub fn vectorize(text: &str, vocab: &Vocabulary, cfg: &FeatureConfig) -> FeatureVector {
    let mut counts: HashMap<u32, f64> = HashMap::new();
    cfg.for_each_feature(text, |f| {
        if let Some(id) = vocab.id(f) {
            *counts.entry(id).or_insert(0.0) += 1.0;
        }
    });
    let mut entries: Vec<(u32, f64)> = counts.into_iter().collect();
    entries.sort_unstable_by_key(|e| e.0);
    if cfg.weighting == Weighting::Tfidf {
        for (id, w) in &mut entries {
            *w *= vocab.idf(*id);
        }
        let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, w) in &mut entries {
                *w /= norm;
            }
        }
    }
    FeatureVector { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{
        gen_synthetic, Dataset, Instance, LabelSpace, LanguageLabel, SyntheticSpec,
    };
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn multiset<S: AsRef<str>>(items: &[S]) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for s in items {
            *m.entry(s.as_ref().to_owned()).or_insert(0) += 1;
        }
        m
    }

    fn docs(texts: &[&str]) -> Dataset {
        let space = LabelSpace::new([("a", "A")]).unwrap();
        let label = LanguageLabel::new("a").unwrap();
        Dataset::new(
            texts
                .iter()
                .map(|t| Instance {
                    text: t.to_string(),
                    label: label.clone(),
                })
                .collect(),
            space,
        )
        .unwrap()
    }

    #[test]
    fn char_ngram_cases() {
        assert_eq!(extract_char_ngrams("abc", 2), vec!["ab", "bc"]);
        assert!(extract_char_ngrams("abc", 6).is_empty());
        let m = multiset(&extract_char_ngrams("ab ab", 2));
        assert_eq!(
            m,
            BTreeMap::from([("ab".into(), 2), ("b ".into(), 1), (" a".into(), 1)])
        );
        assert_eq!(extract_char_ngrams("čšž", 2), vec!["čš", "šž"]);
    }

    #[test]
    fn word_ngram_cases() {
        let s = WORD_SEPARATOR;
        assert_eq!(
            extract_word_ngrams("a b c", 2),
            vec![format!("a{s}b"), format!("b{s}c")]
        );
        assert!(extract_word_ngrams("hello", 2).is_empty());
        assert_eq!(
            multiset(&extract_word_ngrams("x x x", 1)),
            BTreeMap::from([("x".into(), 3)])
        );
    }

    #[test]
    fn vocabulary_basic() {
        let vocab = build_vocabulary(&docs(&["ab", "ab"]), &FeatureConfig::chars(2)).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.id("ab"), Some(0));
        assert_eq!(vocab.doc_freq(0), 2);
        assert_eq!(vocab.n_docs(), 2);
    }

    #[test]
    fn vocabulary_counts_documents_not_occurrences() {
        let vocab = build_vocabulary(&docs(&["aaa", "ab"]), &FeatureConfig::chars(2)).unwrap();
        assert_eq!(vocab.doc_freq(vocab.id("aa").unwrap()), 1);
        assert_eq!(vocab.doc_freq(vocab.id("ab").unwrap()), 1);
    }

    #[test]
    fn vocabulary_min_df_too_high() {
        let mut cfg = FeatureConfig::chars(2);
        cfg.min_doc_freq = 3;
        assert!(matches!(
            build_vocabulary(&docs(&["ab", "ab"]), &cfg),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn vocabulary_empty_dataset() {
        assert!(matches!(
            build_vocabulary(&docs(&[]), &FeatureConfig::chars(2)),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn vocabulary_ids_are_lexicographic() {
        let vocab = build_vocabulary(&docs(&["cab", "bca"]), &FeatureConfig::chars(1)).unwrap();
        assert_eq!(
            (0..3).map(|i| vocab.feature(i)).collect::<Vec<_>>(),
            ["a", "b", "c"]
        );
    }

    #[test]
    fn word_and_char_features_do_not_collide() {
        let mut cfg = FeatureConfig::chars(1);
        cfg.word_orders.insert(1);
        let vocab = build_vocabulary(&docs(&["a a"]), &cfg).unwrap();
        // "a", " " from chars plus the word unigram.
        assert_eq!(vocab.len(), 3);
        let v = vectorize("a a", &vocab, &cfg);
        assert_eq!(v.entries().iter().map(|e| e.1).sum::<f64>(), 5.0);
    }

    #[test]
    fn vocabulary_is_stable_across_runs() {
        let ds = gen_synthetic(&SyntheticSpec {
            n_labels: 4,
            n_per_label: 100,
            alphabet_size: 26,
            skew: 0.5,
            seed: 3,
        })
        .unwrap();
        let cfg = FeatureConfig::chars(3);
        let a = build_vocabulary(&ds, &cfg).unwrap();
        let b = build_vocabulary(&ds, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.len() > 100);
    }

    #[test]
    fn vectorize_cases() {
        let cfg = FeatureConfig::chars(2);
        let vocab = build_vocabulary(&docs(&["abab", "xy"]), &cfg).unwrap();
        assert!(vectorize("qqq", &vocab, &cfg).is_empty());
        let v = vectorize("ababab", &vocab, &cfg);
        assert_eq!(
            v.entries(),
            &[
                (vocab.id("ab").unwrap(), 3.0),
                (vocab.id("ba").unwrap(), 2.0)
            ]
        );
        let single = vectorize("xyxy", &vocab, &cfg);
        assert_eq!(single.entries(), &[(vocab.id("xy").unwrap(), 2.0)]);
    }

    #[test]
    fn tfidf_formula_and_norm() {
        let mut cfg = FeatureConfig::chars(1);
        cfg.weighting = Weighting::Tfidf;
        let vocab = build_vocabulary(&docs(&["ab", "a", "a"]), &cfg).unwrap();
        let v = vectorize("aab", &vocab, &cfg);
        // a: tf 2, df 3 -> idf ln(4/4)+1 = 1; b: tf 1, df 1 -> idf ln(4/2)+1.
        let wa = 2.0;
        let wb = (2.0f64).ln() + 1.0;
        let norm = (wa * wa + wb * wb).sqrt();
        approx::assert_relative_eq!(v.entries()[0].1, wa / norm, epsilon = 1e-12);
        approx::assert_relative_eq!(v.entries()[1].1, wb / norm, epsilon = 1e-12);
        approx::assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vocabulary_rejects_gapped_ids() {
        let json = r#"{"n_docs":1,"entries":[{"feature":"a","id":1,"doc_freq":1}]}"#;
        assert!(serde_json::from_str::<Vocabulary>(json).is_err());
    }

    #[test]
    fn vocabulary_json_round_trip() {
        let vocab = build_vocabulary(&docs(&["abc", "bcd"]), &FeatureConfig::chars(2)).unwrap();
        let json = serde_json::to_string(&vocab).unwrap();
        assert!(json.starts_with(r#"{"n_docs":2,"entries":[{"feature":"ab","id":0,"doc_freq":1}"#));
        let back: Vocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vocab);
    }

    proptest! {
        #[test]
        fn char_ngram_count_matches_length(text in "\\PC{0,40}", n in 1usize..8) {
            let len = text.chars().count();
            prop_assert_eq!(extract_char_ngrams(&text, n).len(), (len + 1).saturating_sub(n));
        }

        #[test]
        fn tfidf_vectors_have_unit_norm(texts in prop::collection::vec("[a-e ]{1,20}", 1..6), probe in "[a-f ]{0,30}") {
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            let mut cfg = FeatureConfig::chars(2);
            cfg.weighting = Weighting::Tfidf;
            if let Ok(vocab) = build_vocabulary(&docs(&refs), &cfg) {
                let v = vectorize(&probe, &vocab, &cfg);
                prop_assert!(v.is_empty() || (v.norm() - 1.0).abs() < 1e-9);
                prop_assert!(v.entries().windows(2).all(|w| w[0].0 < w[1].0));
                prop_assert!(v.entries().iter().all(|e| e.1 != 0.0 && e.1.is_finite()));
            }
        }

        #[test]
        fn lowercase_flag_matches_prelowercasing(texts in prop::collection::vec("[a-cA-CÀÉ ]{1,15}", 1..5), probe in "[a-cA-CÀÉ ]{0,20}") {
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            let mut cfg = FeatureConfig::chars(2);
            cfg.lowercase = true;
            if let Ok(vocab) = build_vocabulary(&docs(&refs), &cfg) {
                prop_assert_eq!(
                    vectorize(&probe, &vocab, &cfg),
                    vectorize(&probe.to_lowercase(), &vocab, &cfg)
                );
            }
        }
    }
}
