//! The resampling protocol: for every classifier and every replicate, draw a
//! fraction of the training bags, fit, and label the fixed test split.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::auc::auc;
use super::report::{BaselineRow, ClassifierReport, ReplicateReport, StabilityReport, TestBag};
use crate::error::{Error, Result};
use crate::milclassifiers::{predict_bags, predict_instances, MilClassifierSpec};
use crate::mildata::{
    generate_synthetic, load_dataset, resample_train_bags, Dataset, SplitSpec, Standardizer,
    SynthConfig,
};
use crate::seed;
use crate::stability::{
    matrix_correlation, mean_pairwise, pairwise_matrix, positiveness_histogram, InstanceLabeling,
    Measure,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Csv(PathBuf),
    Synthetic(SynthConfig),
}

fn default_test_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SplitConfig {
    /// Stratified random bag split.
    Random {
        #[serde(default = "default_test_fraction")]
        test_fraction: f64,
        seed: u64,
    },
    Explicit {
        train: Vec<String>,
        test: Vec<String>,
    },
}

/// A classifier spec with a display name (defaults to the kind).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierEntry {
    pub name: String,
    pub spec: MilClassifierSpec,
}

impl ClassifierEntry {
    pub fn new(name: impl Into<String>, spec: MilClassifierSpec) -> Self {
        ClassifierEntry {
            name: name.into(),
            spec,
        }
    }
}

impl Serialize for ClassifierEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.spec).map_err(serde::ser::Error::custom)?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("name".into(), serde_json::Value::String(self.name.clone()));
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassifierEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut v = serde_json::Value::deserialize(d)?;
        let name = match &mut v {
            serde_json::Value::Object(map) => match map.remove("name") {
                Some(serde_json::Value::String(s)) => Some(s),
                Some(_) => return Err(serde::de::Error::custom("classifier name must be a string")),
                None => None,
            },
            _ => return Err(serde::de::Error::custom("classifier entry must be an object")),
        };
        let spec: MilClassifierSpec = serde_json::from_value(v).map_err(serde::de::Error::custom)?;
        Ok(ClassifierEntry {
            name: name.unwrap_or_else(|| spec.kind_name().to_string()),
            spec,
        })
    }
}

fn default_repetitions() -> usize {
    10
}
fn default_fraction() -> f64 {
    0.8
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub split: SplitConfig,
    pub classifiers: Vec<ClassifierEntry>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    pub seed: u64,
    /// z-score features with statistics of each replicate's training bags.
    #[serde(default = "default_true")]
    pub standardize: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 2 {
            return Err(Error::config(format!(
                "repetitions must be at least 2 (R >= 2), got {}",
                self.repetitions
            )));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::config(format!(
                "fraction must lie in (0, 1], got {}",
                self.fraction
            )));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config("no classifiers configured"));
        }
        let mut names = HashSet::new();
        for c in &self.classifiers {
            if !names.insert(c.name.as_str()) {
                return Err(Error::config(format!("duplicate classifier name {}", c.name)));
            }
            c.spec.validate()?;
        }
        if let DataSource::Synthetic(s) = &self.data {
            s.validate()?;
        }
        if let SplitConfig::Random { test_fraction, .. } = self.split {
            if !(test_fraction > 0.0 && test_fraction < 1.0) {
                return Err(Error::config(format!(
                    "test_fraction must lie in (0, 1), got {test_fraction}"
                )));
            }
        }
        Ok(())
    }

    /// Makes a relative CSV path relative to `base` (typically the config's directory).
    pub fn resolve_paths(&mut self, base: &Path) {
        if let DataSource::Csv(p) = &mut self.data {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn load_data(&self) -> Result<Dataset> {
        match &self.data {
            DataSource::Csv(p) => load_dataset(p),
            DataSource::Synthetic(s) => Ok(generate_synthetic(s)?.dataset),
        }
    }

    pub fn split_for(&self, dataset: &Dataset) -> Result<SplitSpec> {
        let split = match &self.split {
            SplitConfig::Random {
                test_fraction,
                seed,
            } => SplitSpec::random(dataset, *test_fraction, *seed)?,
            SplitConfig::Explicit { train, test } => SplitSpec {
                train_bag_ids: train.clone(),
                test_bag_ids: test.clone(),
                seed: self.seed,
            },
        };
        split.validate(dataset)?;
        Ok(split)
    }
}

/// How replicate work units are scheduled. Results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Loads the configured data and runs the protocol.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<StabilityReport> {
    cfg.validate()?;
    let dataset = cfg.load_data()?;
    run_experiment_on(cfg, &dataset, Execution::Parallel)
}

struct Outcome {
    auc: f64,
    bag_scores: Vec<f64>,
    bag_labels: Vec<bool>,
    instance_labels: Vec<bool>,
    diagnostics: crate::milclassifiers::FitDiagnostics,
}

fn run_replicate(
    cfg: &ExperimentConfig,
    dataset: &Dataset,
    split: &SplitSpec,
    test: &Dataset,
    spec: &MilClassifierSpec,
    replicate_seed: u64,
) -> Result<(usize, Outcome)> {
    let ids = resample_train_bags(dataset, &split.train_bag_ids, cfg.fraction, replicate_seed)?;
    let mut train = dataset.subset(&ids)?;
    let mut test_r = test.clone();
    if cfg.standardize {
        let st = Standardizer::fit(&train);
        train = st.transform(&train);
        test_r = st.transform(test);
    }
    let model = spec.fit(&train)?;
    let inst = predict_instances(&model, &test_r)?;
    let bags = predict_bags(&model, &test_r)?;
    let truth: Vec<bool> = test.bags.iter().map(|b| b.label).collect();
    let auc = auc(&bags.scores, &truth)?;
    Ok((
        ids.len(),
        Outcome {
            auc,
            bag_scores: bags.scores,
            bag_labels: bags.labels,
            instance_labels: inst.labels,
            diagnostics: model.diagnostics,
        },
    ))
}

/// Runs every `(classifier, replicate)` unit on `dataset` and assembles the
/// report in index order. Replicate failures are recorded, not propagated.
pub fn run_experiment_on(cfg: &ExperimentConfig, dataset: &Dataset, exec: Execution) -> Result<StabilityReport> {
    cfg.validate()?;
    let split = cfg.split_for(dataset)?;
    let test = dataset.subset(&split.test_bag_ids)?;
    test.require_both_classes()
        .map_err(|e| Error::config(format!("test split: {e}")))?;
    dataset
        .subset(&split.train_bag_ids)?
        .require_both_classes()
        .map_err(|e| Error::config(format!("train split: {e}")))?;

    let units: Vec<(usize, usize)> = (0..cfg.classifiers.len())
        .flat_map(|c| (0..cfg.repetitions).map(move |r| (c, r)))
        .collect();
    let work = |&(c, r): &(usize, usize)| -> ReplicateReport {
        let replicate_seed = seed::derive(cfg.seed, c as u64, r as u64);
        match run_replicate(cfg, dataset, &split, &test, &cfg.classifiers[c].spec, replicate_seed) {
            Ok((n_train, o)) => ReplicateReport {
                index: r,
                seed: replicate_seed,
                train_bags: n_train,
                error: None,
                auc: Some(o.auc),
                bag_scores: Some(o.bag_scores),
                bag_labels: Some(o.bag_labels.iter().map(|&b| b as u8).collect()),
                instance_labels: Some(o.instance_labels.iter().map(|&b| b as u8).collect()),
                diagnostics: Some(o.diagnostics),
            },
            Err(e) => ReplicateReport {
                index: r,
                seed: replicate_seed,
                train_bags: 0,
                error: Some(e.to_string()),
                auc: None,
                bag_scores: None,
                bag_labels: None,
                instance_labels: None,
                diagnostics: None,
            },
        }
    };
    let results: Vec<ReplicateReport> = match exec {
        Execution::Parallel => units.par_iter().map(work).collect(),
        Execution::Sequential => units.iter().map(work).collect(),
    };

    let mut results = results.into_iter();
    let classifiers = cfg
        .classifiers
        .iter()
        .map(|entry| {
            let replicates: Vec<ReplicateReport> = results.by_ref().take(cfg.repetitions).collect();
            summarize(entry, replicates)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(StabilityReport {
        dataset: dataset.name.clone(),
        d: dataset.d,
        repetitions: cfg.repetitions,
        fraction: cfg.fraction,
        seed: cfg.seed,
        standardize: cfg.standardize,
        train_bag_ids: split.train_bag_ids.clone(),
        test_bags: test
            .bags
            .iter()
            .map(|b| TestBag {
                id: b.id.clone(),
                label: b.label as u8,
                instances: b.len(),
            })
            .collect(),
        classifiers,
        baseline: BaselineRow::all_positive(),
    })
}

fn summarize(entry: &ClassifierEntry, replicates: Vec<ReplicateReport>) -> Result<ClassifierReport> {
    let ok: Vec<&ReplicateReport> = replicates.iter().filter(|r| r.error.is_none()).collect();
    let failed = replicates.len() - ok.len();
    let mut report = ClassifierReport {
        name: entry.name.clone(),
        spec: entry.spec.clone(),
        failed_replicates: failed,
        mean_auc: None,
        mean_s: None,
        mean_s_plus: None,
        s_matrix: None,
        s_plus_matrix: None,
        s_vs_s_plus_correlation: None,
        degenerate_s_plus_pairs: 0,
        positiveness: None,
        replicates: Vec::new(),
    };
    if !ok.is_empty() {
        let aucs: Vec<f64> = ok.iter().filter_map(|r| r.auc).collect();
        report.mean_auc = Some(aucs.iter().sum::<f64>() / aucs.len() as f64);
        let labelings: Vec<InstanceLabeling> = ok
            .iter()
            .map(|r| InstanceLabeling {
                replicate: r.index,
                labels: r.instance_labels.clone().unwrap_or_default(),
            })
            .collect();
        report.positiveness = Some(positiveness_histogram(&labelings)?);
        if labelings.len() >= 2 {
            let s = pairwise_matrix(&labelings, Measure::Agreement)?;
            let sp = pairwise_matrix(&labelings, Measure::PositiveAgreement)?;
            report.mean_s = Some(mean_pairwise(&s)?);
            report.mean_s_plus = Some(mean_pairwise(&sp)?);
            report.s_vs_s_plus_correlation = matrix_correlation(&s, &sp);
            report.degenerate_s_plus_pairs = sp.degenerate_pairs;
            report.s_matrix = Some(s.values);
            report.s_plus_matrix = Some(sp.values);
        }
    }
    report.replicates = replicates;
    Ok(report)
}
