use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    check_all_labels_present, sparse_lookup, Classifier, RankedPrediction, SerializedModel, Trainer,
};
use crate::corpus::{Dataset, LabelSpace};
use crate::features::{build_vocabulary, vectorize, FeatureConfig, FeatureVector, Vocabulary};
use crate::rng;
use crate::{Error, Result};

/// Averaged multiclass perceptron.
#[derive(Debug, Clone, Copy)]
pub struct PerceptronTrainer {
    epochs: usize,
    seed: u64,
}

impl PerceptronTrainer {
    pub fn new(epochs: usize, seed: u64) -> Result<Self> {
        if epochs == 0 {
            return Err(Error::InvalidParameter("epochs must be >= 1".into()));
        }
        Ok(PerceptronTrainer { epochs, seed })
    }
}

impl Trainer for PerceptronTrainer {
    fn name(&self) -> String {
        "linear".into()
    }

    fn train(&self, ds: &Dataset, cfg: &FeatureConfig) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_linear(ds, cfg, self.epochs, self.seed)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    label_space: LabelSpace,
    config: FeatureConfig,
    epochs: usize,
    seed: u64,
    /// Averaged weights per label, sparse with increasing ids.
    weights: Vec<Vec<(u32, f64)>>,
    vocabulary: Vocabulary,
}

struct Weights {
    current: Vec<HashMap<u32, f64>>,
    // Sum of step-stamped updates; average = current - accumulated / steps.
    accumulated: Vec<HashMap<u32, f64>>,
}

impl Weights {
    fn score(&self, label: usize, x: &FeatureVector) -> f64 {
        x.entries()
            .iter()
            .map(|(id, w)| w * self.current[label].get(id).copied().unwrap_or(0.0))
            .sum()
    }

    fn update(&mut self, label: usize, x: &FeatureVector, sign: f64, step: f64) {
        for &(id, w) in x.entries() {
            *self.current[label].entry(id).or_insert(0.0) += sign * w;
            *self.accumulated[label].entry(id).or_insert(0.0) += sign * w * step;
        }
    }
}

pub fn train_linear(
    ds: &Dataset,
    cfg: &FeatureConfig,
    epochs: usize,
    seed: u64,
) -> Result<LinearModel> {
    PerceptronTrainer::new(epochs, seed)?;
    let labels = check_all_labels_present(ds)?;
    let vocab = build_vocabulary(ds, cfg)?;
    let n_labels = ds.label_space().len();
    let xs: Vec<FeatureVector> = ds
        .instances()
        .iter()
        .map(|inst| vectorize(&inst.text, &vocab, cfg))
        .collect();

    let mut w = Weights {
        current: vec![HashMap::new(); n_labels],
        accumulated: vec![HashMap::new(); n_labels],
    };
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut rng = rng::generator(seed);
    let mut step = 1.0;
    for _ in 0..epochs {
        rng::shuffle(&mut rng, &mut order);
        for &i in &order {
            let gold = labels[i];
            let gold_score = w.score(gold, &xs[i]);
            // Strongest competitor; a tie with gold counts as a mistake.
            let rival = (0..n_labels)
                .filter(|&l| l != gold)
                .map(|l| (l, w.score(l, &xs[i])))
                .fold(None, |best: Option<(usize, f64)>, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            if let Some((rival, score)) = rival {
                if score >= gold_score {
                    w.update(gold, &xs[i], 1.0, step);
                    w.update(rival, &xs[i], -1.0, step);
                }
            }
            step += 1.0;
        }
    }

    let weights = w
        .current
        .into_iter()
        .zip(w.accumulated)
        .map(|(cur, acc)| {
            let mut row: Vec<(u32, f64)> = cur
                .into_iter()
                .map(|(id, c)| (id, c - acc[&id] / step))
                .filter(|&(_, a)| a != 0.0)
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            row
        })
        .collect();

    Ok(LinearModel {
        label_space: ds.label_space().clone(),
        config: cfg.clone(),
        epochs,
        seed,
        weights,
        vocabulary: vocab,
    })
}

impl LinearModel {
    pub fn weights(&self) -> &[Vec<(u32, f64)>] {
        &self.weights
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn scores(&self, text: &str) -> Vec<f64> {
        let x = vectorize(text, &self.vocabulary, &self.config);
        self.weights
            .iter()
            .map(|row| {
                x.entries()
                    .iter()
                    .map(|&(id, v)| v * sparse_lookup(row, id).unwrap_or(0.0))
                    .sum()
            })
            .collect()
    }

    pub(super) fn validated(self) -> Result<Self> {
        if self.weights.len() != self.label_space.len() {
            return Err(Error::InvalidParameter(
                "linear model rows do not match label space".into(),
            ));
        }
        let v = self.vocabulary.len() as u32;
        for row in &self.weights {
            if !row.windows(2).all(|w| w[0].0 < w[1].0)
                || row.last().is_some_and(|e| e.0 >= v)
                || row.iter().any(|e| !e.1.is_finite())
            {
                return Err(Error::InvalidParameter(
                    "linear model rows must be sorted, finite and in-vocabulary".into(),
                ));
            }
        }
        Ok(self)
    }
}

impl Classifier for LinearModel {
    fn kind(&self) -> &'static str {
        "linear"
    }

    fn label_space(&self) -> &LabelSpace {
        &self.label_space
    }

    fn predict_ranked(&self, text: &str) -> RankedPrediction {
        RankedPrediction::from_scores(&self.label_space, &self.scores(text))
    }

    fn to_serialized(&self) -> SerializedModel {
        SerializedModel::Linear(self.clone())
    }
}
