use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Classifier, RankedPrediction, SerializedModel, Trainer};
use crate::corpus::{filter_groups, Dataset, GroupId, Instance, LabelSpace, LanguageLabel};
use crate::features::FeatureConfig;
use crate::{Error, Result};

/// Two-stage trainer: a group classifier, then one classifier per group.
#[derive(Debug, Clone)]
pub struct HierarchicalTrainer {
    base: Arc<dyn Trainer>,
}

impl HierarchicalTrainer {
    pub fn new(base: Arc<dyn Trainer>) -> Self {
        HierarchicalTrainer { base }
    }
}

impl Trainer for HierarchicalTrainer {
    fn name(&self) -> String {
        format!("hierarchical({})", self.base.name())
    }

    fn train(&self, ds: &Dataset, cfg: &FeatureConfig) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_hierarchical(ds, cfg, self.base.as_ref())?))
    }
}

/// Group → language model.
///
/// With a single group the group stage is skipped. Groups with a single
/// label carry no within-group model.
#[derive(Debug)]
pub struct HierarchicalModel {
    label_space: LabelSpace,
    groups: Vec<GroupId>,
    group_model: Option<Box<dyn Classifier>>,
    per_group: Vec<Option<Box<dyn Classifier>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HierarchicalFile {
    label_space: LabelSpace,
    group_model: Option<Box<SerializedModel>>,
    per_group: Vec<GroupEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupEntry {
    group: GroupId,
    model: Option<SerializedModel>,
}

/// Dataset relabelled with group ids.
fn group_dataset(ds: &Dataset) -> Result<Dataset> {
    let space = ds.label_space();
    let group_space = space.group_space();
    let instances = ds
        .instances()
        .iter()
        .map(|inst| {
            let g = space.group_of(&inst.label).expect("label in space");
            Ok(Instance {
                text: inst.text.clone(),
                label: LanguageLabel::new(g.as_str())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(instances, group_space)
}

pub fn train_hierarchical(
    ds: &Dataset,
    cfg: &FeatureConfig,
    base: &dyn Trainer,
) -> Result<HierarchicalModel> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let space = ds.label_space();
    let groups = space.groups();
    let counts = ds.counts_per_label();
    for g in &groups {
        if space.members(g).iter().all(|&l| counts[l] == 0) {
            return Err(Error::EmptyGroupData(g.to_string()));
        }
    }

    let group_model = if groups.len() > 1 {
        Some(base.train(&group_dataset(ds)?, cfg)?)
    } else {
        None
    };
    let per_group = groups
        .par_iter()
        .map(|g| {
            if space.members(g).len() == 1 {
                return Ok(None);
            }
            let only: BTreeSet<GroupId> = [g.clone()].into();
            base.train(&filter_groups(ds, &only)?, cfg).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(HierarchicalModel {
        label_space: space.clone(),
        groups,
        group_model,
        per_group,
    })
}

impl HierarchicalModel {
    pub fn groups(&self) -> &[GroupId] {
        &self.groups
    }

    pub fn has_group_stage(&self) -> bool {
        self.group_model.is_some()
    }

    fn group_index(&self, group: &LanguageLabel) -> usize {
        self.groups
            .iter()
            .position(|g| g.as_str() == group.as_str())
            .expect("group model predicts known groups")
    }

    /// Groups ordered by the group stage.
    fn ranked_groups(&self, text: &str) -> Vec<usize> {
        match &self.group_model {
            Some(m) => m
                .predict_ranked(text)
                .entries()
                .iter()
                .map(|(g, _)| self.group_index(g))
                .collect(),
            None => vec![0],
        }
    }

    fn within_group(&self, group: usize, text: &str) -> Vec<LanguageLabel> {
        match &self.per_group[group] {
            Some(m) => m
                .predict_ranked(text)
                .entries()
                .iter()
                .map(|e| e.0.clone())
                .collect(),
            None => self
                .label_space
                .members(&self.groups[group])
                .into_iter()
                .map(|l| self.label_space.label(l).clone())
                .collect(),
        }
    }

    pub fn predict_hierarchical(&self, text: &str) -> (GroupId, LanguageLabel) {
        let g = self.ranked_groups(text)[0];
        let label = self.within_group(g, text).swap_remove(0);
        (self.groups[g].clone(), label)
    }

    pub(super) fn from_file(file: HierarchicalFile) -> Result<Self> {
        let groups = file.label_space.groups();
        if file.per_group.len() != groups.len()
            || file
                .per_group
                .iter()
                .zip(&groups)
                .any(|(e, g)| &e.group != g)
        {
            return Err(Error::InvalidParameter(
                "hierarchical model groups do not match label space".into(),
            ));
        }
        let group_model = file.group_model.map(|m| m.into_classifier()).transpose()?;
        if groups.len() > 1 && group_model.is_none() {
            return Err(Error::InvalidParameter(
                "hierarchical model lacks its group stage".into(),
            ));
        }
        let per_group = file
            .per_group
            .into_iter()
            .map(|e| e.model.map(SerializedModel::into_classifier).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(HierarchicalModel {
            label_space: file.label_space,
            groups,
            group_model,
            per_group,
        })
    }
}

impl Classifier for HierarchicalModel {
    fn kind(&self) -> &'static str {
        "hierarchical"
    }

    fn label_space(&self) -> &LabelSpace {
        &self.label_space
    }

    /// Labels of the best group first (in within-group order), then the
    /// next group's, and so on. Scores are descending rank positions.
    fn predict_ranked(&self, text: &str) -> RankedPrediction {
        let n = self.label_space.len();
        let entries = self
            .ranked_groups(text)
            .into_iter()
            .flat_map(|g| self.within_group(g, text))
            .enumerate()
            .map(|(rank, l)| (l, (n - rank) as f64))
            .collect();
        RankedPrediction::from_entries(entries)
    }

    fn predict_with_group(&self, text: &str) -> (GroupId, LanguageLabel) {
        self.predict_hierarchical(text)
    }

    fn to_serialized(&self) -> SerializedModel {
        SerializedModel::Hierarchical(HierarchicalFile {
            label_space: self.label_space.clone(),
            group_model: self
                .group_model
                .as_ref()
                .map(|m| Box::new(m.to_serialized())),
            per_group: self
                .groups
                .iter()
                .zip(&self.per_group)
                .map(|(g, m)| GroupEntry {
                    group: g.clone(),
                    model: m.as_ref().map(|m| m.to_serialized()),
                })
                .collect(),
        })
    }
}
