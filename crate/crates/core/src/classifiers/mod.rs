//! Base classifiers and the two-stage group → language classifier.
//!
//! Every model implements [`Classifier`]. Training algorithms implement
//! [`Trainer`] and are looked up by name in a [`TrainerRegistry`]; a
//! [`TrainerSpec`] names a registered trainer plus its parameters and
//! optionally wraps it in the two-stage [`HierarchicalTrainer`].

mod hierarchical;
mod linear;
mod naive_bayes;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, GroupId, LabelSpace, LanguageLabel};
use crate::features::FeatureConfig;
use crate::{Error, Result};

pub use hierarchical::{train_hierarchical, HierarchicalModel, HierarchicalTrainer};
pub use linear::{train_linear, LinearModel, PerceptronTrainer};
pub use naive_bayes::{train_nb, NaiveBayesTrainer, NbModel};

/// Version written into every model file.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// All labels of a label space ordered by descending score.
///
/// Equal scores keep label-space order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPrediction {
    entries: Vec<(LanguageLabel, f64)>,
}

impl RankedPrediction {
    /// Ranks `scores` (one per label, in label-space order).
    pub fn from_scores(space: &LabelSpace, scores: &[f64]) -> Self {
        debug_assert_eq!(space.len(), scores.len());
        let mut order: Vec<usize> = (0..scores.len()).collect();
        // Stable sort: ties stay in label order.
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        RankedPrediction {
            entries: order
                .into_iter()
                .map(|i| (space.label(i).clone(), scores[i]))
                .collect(),
        }
    }

    pub(crate) fn from_entries(entries: Vec<(LanguageLabel, f64)>) -> Self {
        RankedPrediction { entries }
    }

    pub fn entries(&self) -> &[(LanguageLabel, f64)] {
        &self.entries
    }

    pub fn top(&self) -> &LanguageLabel {
        &self.entries[0].0
    }

    pub fn top_k(&self, k: usize) -> impl Iterator<Item = &LanguageLabel> {
        self.entries.iter().take(k).map(|(l, _)| l)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A trained model. Models are immutable and shareable across threads.
pub trait Classifier: Send + Sync + fmt::Debug {
    fn kind(&self) -> &'static str;

    fn label_space(&self) -> &LabelSpace;

    fn predict_ranked(&self, text: &str) -> RankedPrediction;

    fn predict(&self, text: &str) -> LanguageLabel {
        self.predict_ranked(text).top().clone()
    }

    /// Predicted group and label. Flat models report the label's group.
    fn predict_with_group(&self, text: &str) -> (GroupId, LanguageLabel) {
        let label = self.predict(text);
        let group = self
            .label_space()
            .group_of(&label)
            .expect("predicted label belongs to the model's label space")
            .clone();
        (group, label)
    }

    fn to_serialized(&self) -> SerializedModel;
}

/// Body of a model file, tagged by model kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SerializedModel {
    Nb(NbModel),
    Linear(LinearModel),
    Hierarchical(hierarchical::HierarchicalFile),
}

impl SerializedModel {
    pub fn into_classifier(self) -> Result<Box<dyn Classifier>> {
        Ok(match self {
            SerializedModel::Nb(m) => Box::new(m.validated()?),
            SerializedModel::Linear(m) => Box::new(m.validated()?),
            SerializedModel::Hierarchical(h) => Box::new(HierarchicalModel::from_file(h)?),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub model: SerializedModel,
}

pub fn model_to_json(model: &dyn Classifier) -> String {
    serde_json::to_string(&ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.to_serialized(),
    })
    .expect("model serialises")
}

pub fn model_from_json(text: &str) -> Result<Box<dyn Classifier>> {
    let file: ModelFile = serde_json::from_str(text)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Unsupported(format!(
            "model format version {} (expected {MODEL_FORMAT_VERSION})",
            file.format_version
        )));
    }
    file.model.into_classifier()
}

pub fn save_model(model: &dyn Classifier, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_json(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Box<dyn Classifier>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}

/// Ranks every text; runs in parallel and keeps input order.
pub fn predict_many<S: AsRef<str> + Sync>(
    model: &dyn Classifier,
    texts: &[S],
) -> Vec<RankedPrediction> {
    texts
        .par_iter()
        .map(|t| model.predict_ranked(t.as_ref()))
        .collect()
}

/// A training algorithm.
pub trait Trainer: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn train(&self, ds: &Dataset, cfg: &FeatureConfig) -> Result<Box<dyn Classifier>>;
}

/// Hyper-parameters understood by the built-in trainers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainerParams {
    /// Additive smoothing for naive Bayes.
    pub alpha: f64,
    /// Passes over the data for the perceptron.
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainerParams {
    fn default() -> Self {
        TrainerParams {
            alpha: 0.5,
            epochs: 5,
            seed: 42,
        }
    }
}

type TrainerFactory = fn(&TrainerParams) -> Result<Arc<dyn Trainer>>;

/// Name → trainer constructor.
#[derive(Clone)]
pub struct TrainerRegistry {
    factories: BTreeMap<String, TrainerFactory>,
}

impl Default for TrainerRegistry {
    /// Registry holding `nb` and `linear`.
    fn default() -> Self {
        let mut reg = TrainerRegistry::empty();
        reg.register("nb", |p| Ok(Arc::new(NaiveBayesTrainer::new(p.alpha)?)));
        reg.register("linear", |p| {
            Ok(Arc::new(PerceptronTrainer::new(p.epochs, p.seed)?))
        });
        reg
    }
}

impl TrainerRegistry {
    pub fn empty() -> Self {
        TrainerRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, factory: TrainerFactory) {
        self.factories.insert(name.to_owned(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str, params: &TrainerParams) -> Result<Arc<dyn Trainer>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "trainer",
                name: name.to_owned(),
                available: self.names().join(", "),
            })?;
        factory(params)
    }
}

/// Serializable description of how to train a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerSpec {
    pub base: String,
    pub params: TrainerParams,
    pub hierarchical: bool,
    pub features: FeatureConfig,
}

impl TrainerSpec {
    pub fn build(&self, registry: &TrainerRegistry) -> Result<Arc<dyn Trainer>> {
        self.features.validate()?;
        let base = registry.build(&self.base, &self.params)?;
        Ok(if self.hierarchical {
            Arc::new(HierarchicalTrainer::new(base))
        } else {
            base
        })
    }

    /// Builds with the default registry and trains on `ds`.
    pub fn train(&self, ds: &Dataset) -> Result<Box<dyn Classifier>> {
        self.build(&TrainerRegistry::default())?
            .train(ds, &self.features)
    }
}

/// Label-space index of each label of `ds`, rejecting labels without data.
pub(crate) fn check_all_labels_present(ds: &Dataset) -> Result<Vec<usize>> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let counts = ds.counts_per_label();
    if let Some(l) = counts.iter().position(|&c| c == 0) {
        return Err(Error::UntrainedLabel(ds.label_space().label(l).to_string()));
    }
    Ok(ds.label_indices())
}

/// Sparse per-label parameter row: ids strictly increasing.
pub(crate) fn sparse_lookup(row: &[(u32, f64)], id: u32) -> Option<f64> {
    row.binary_search_by_key(&id, |e| e.0)
        .ok()
        .map(|i| row[i].1)
}
