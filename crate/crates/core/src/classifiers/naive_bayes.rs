use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    check_all_labels_present, sparse_lookup, Classifier, RankedPrediction, SerializedModel, Trainer,
};
use crate::corpus::{Dataset, LabelSpace};
use crate::features::{build_vocabulary, vectorize, FeatureConfig, Vocabulary};
use crate::{Error, Result};

/// Multinomial naive Bayes with add-α smoothing.
#[derive(Debug, Clone, Copy)]
pub struct NaiveBayesTrainer {
    alpha: f64,
}

impl NaiveBayesTrainer {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be > 0, got {alpha}"
            )));
        }
        Ok(NaiveBayesTrainer { alpha })
    }
}

impl Trainer for NaiveBayesTrainer {
    fn name(&self) -> String {
        "nb".into()
    }

    fn train(&self, ds: &Dataset, cfg: &FeatureConfig) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_nb(ds, cfg, self.alpha)?))
    }
}

/// Trained naive Bayes model.
///
/// The likelihood of feature `f` under label `l` is
/// `(count(l, f) + alpha) / (total(l) + alpha * |V|)`. Only features seen
/// with a label are stored; every other feature takes the label's
/// `unseen_log_likelihood`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    label_space: LabelSpace,
    config: FeatureConfig,
    alpha: f64,
    log_priors: Vec<f64>,
    unseen_log_likelihood: Vec<f64>,
    log_likelihood: Vec<Vec<(u32, f64)>>,
    vocabulary: Vocabulary,
}

pub fn train_nb(ds: &Dataset, cfg: &FeatureConfig, alpha: f64) -> Result<NbModel> {
    NaiveBayesTrainer::new(alpha)?;
    let labels = check_all_labels_present(ds)?;
    let vocab = build_vocabulary(ds, cfg)?;
    let n_labels = ds.label_space().len();

    let mut mass: Vec<HashMap<u32, f64>> = vec![HashMap::new(); n_labels];
    let mut docs = vec![0usize; n_labels];
    for (inst, &l) in ds.instances().iter().zip(&labels) {
        docs[l] += 1;
        for &(id, w) in vectorize(&inst.text, &vocab, cfg).entries() {
            *mass[l].entry(id).or_insert(0.0) += w;
        }
    }

    let n = ds.len() as f64;
    let v = vocab.len() as f64;
    let mut log_likelihood = Vec::with_capacity(n_labels);
    let mut unseen = Vec::with_capacity(n_labels);
    for row in mass {
        let mut row: Vec<(u32, f64)> = row.into_iter().collect();
        row.sort_unstable_by_key(|e| e.0);
        let total: f64 = row.iter().map(|e| e.1).sum();
        let denom = (total + alpha * v).ln();
        unseen.push(alpha.ln() - denom);
        log_likelihood.push(
            row.into_iter()
                .map(|(id, c)| (id, (c + alpha).ln() - denom))
                .collect(),
        );
    }

    Ok(NbModel {
        label_space: ds.label_space().clone(),
        config: cfg.clone(),
        alpha,
        log_priors: docs.iter().map(|&d| (d as f64 / n).ln()).collect(),
        unseen_log_likelihood: unseen,
        log_likelihood,
        vocabulary: vocab,
    })
}

impl NbModel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn log_priors(&self) -> &[f64] {
        &self.log_priors
    }

    /// Log-likelihood of vocabulary feature `id` under label `label`.
    pub fn log_likelihood(&self, label: usize, id: u32) -> f64 {
        sparse_lookup(&self.log_likelihood[label], id).unwrap_or(self.unseen_log_likelihood[label])
    }

    /// Joint log score per label, in label-space order.
    pub fn scores(&self, text: &str) -> Vec<f64> {
        let x = vectorize(text, &self.vocabulary, &self.config);
        (0..self.label_space.len())
            .map(|l| {
                self.log_priors[l]
                    + x.entries()
                        .iter()
                        .map(|&(id, w)| w * self.log_likelihood(l, id))
                        .sum::<f64>()
            })
            .collect()
    }

    pub(super) fn validated(self) -> Result<Self> {
        let n = self.label_space.len();
        if self.log_priors.len() != n
            || self.unseen_log_likelihood.len() != n
            || self.log_likelihood.len() != n
        {
            return Err(Error::InvalidParameter(
                "naive Bayes model arrays do not match label space".into(),
            ));
        }
        let v = self.vocabulary.len() as u32;
        for row in &self.log_likelihood {
            if !row.windows(2).all(|w| w[0].0 < w[1].0) || row.last().is_some_and(|e| e.0 >= v) {
                return Err(Error::InvalidParameter(
                    "naive Bayes rows must have sorted in-vocabulary ids".into(),
                ));
            }
        }
        Ok(self)
    }
}

impl Classifier for NbModel {
    fn kind(&self) -> &'static str {
        "nb"
    }

    fn label_space(&self) -> &LabelSpace {
        &self.label_space
    }

    fn predict_ranked(&self, text: &str) -> RankedPrediction {
        RankedPrediction::from_scores(&self.label_space, &self.scores(text))
    }

    fn to_serialized(&self) -> SerializedModel {
        SerializedModel::Nb(self.clone())
    }
}
