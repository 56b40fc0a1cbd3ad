//! MIL classifiers that emit both bag and instance decisions.
//!
//! Every trained classifier exposes an instance decision `f_I` and a bag
//! decision `f_B`. For SimpleMIL and the mi-family `f_B` is the maximum of the
//! instance scores; MILBoost combines instance probabilities with noisy-or;
//! MILES scores bags through its prototype embedding and defines
//! `f_I(x) = f_B({x})`.

mod l1logistic;
mod mi;
mod milboost;
mod miles;
mod simple;

use serde::{Deserialize, Serialize};

use crate::baselearners::{LinearModel, PrototypeKind, PrototypeModel, SvmParams};
use crate::error::{Error, Result};
use crate::mildata::Dataset;

pub use l1logistic::{train_l1_logistic, L1LogisticModel, L1LogisticParams};
pub use mi::{fit_mi, relabel_positive_bags, MiFit};
pub use milboost::{
    bag_log_likelihood, fit_milboost, noisy_or, noisy_or_gradient, sigmoid, StumpEnsemble,
};
pub use miles::{embed_bag, fit_miles, MilesModel};
pub use simple::fit_simplemil;

fn default_c() -> f64 {
    1.0
}
fn default_max_iter() -> usize {
    20
}
fn default_rounds() -> usize {
    100
}
fn default_lambda() -> f64 {
    0.01
}
fn default_gamma() -> f64 {
    1.0
}

/// Which classifier to train, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MilClassifierSpec {
    #[serde(rename = "simple_svm")]
    SimpleSvm {
        #[serde(default = "default_c")]
        c: f64,
    },
    #[serde(rename = "simple_nm")]
    SimpleNm,
    #[serde(rename = "simple_1nn")]
    Simple1nn,
    #[serde(rename = "mi_svm")]
    MiSvm {
        #[serde(default = "default_c")]
        c: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
    #[serde(rename = "mi_nm")]
    MiNm {
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
    #[serde(rename = "mi_1nn")]
    Mi1nn {
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
    #[serde(rename = "milboost")]
    MilBoost {
        #[serde(default = "default_rounds")]
        rounds: usize,
    },
    #[serde(rename = "miles")]
    Miles {
        #[serde(default = "default_lambda")]
        lambda: f64,
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
}

impl MilClassifierSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MilClassifierSpec::SimpleSvm { .. } => "simple_svm",
            MilClassifierSpec::SimpleNm => "simple_nm",
            MilClassifierSpec::Simple1nn => "simple_1nn",
            MilClassifierSpec::MiSvm { .. } => "mi_svm",
            MilClassifierSpec::MiNm { .. } => "mi_nm",
            MilClassifierSpec::Mi1nn { .. } => "mi_1nn",
            MilClassifierSpec::MilBoost { .. } => "milboost",
            MilClassifierSpec::Miles { .. } => "miles",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive, got {v}")))
            }
        };
        let at_least_one = |name: &str, v: usize| {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be at least 1")))
            }
        };
        match *self {
            MilClassifierSpec::SimpleSvm { c } => positive("C", c),
            MilClassifierSpec::SimpleNm | MilClassifierSpec::Simple1nn => Ok(()),
            MilClassifierSpec::MiSvm { c, max_iter } => {
                positive("C", c)?;
                at_least_one("max_iter", max_iter)
            }
            MilClassifierSpec::MiNm { max_iter } | MilClassifierSpec::Mi1nn { max_iter } => {
                at_least_one("max_iter", max_iter)
            }
            MilClassifierSpec::MilBoost { rounds } => at_least_one("rounds", rounds),
            MilClassifierSpec::Miles { lambda, gamma } => {
                positive("lambda", lambda)?;
                positive("gamma", gamma)
            }
        }
    }

    /// Trains this classifier on `train`.
    pub fn fit(&self, train: &Dataset) -> Result<TrainedMil> {
        self.validate()?;
        match *self {
            MilClassifierSpec::SimpleSvm { c } => {
                fit_simplemil(self.clone(), BaseLearner::Svm(SvmParams::with_c(c)), train)
            }
            MilClassifierSpec::SimpleNm => fit_simplemil(
                self.clone(),
                BaseLearner::Prototype(PrototypeKind::NearestMean),
                train,
            ),
            MilClassifierSpec::Simple1nn => fit_simplemil(
                self.clone(),
                BaseLearner::Prototype(PrototypeKind::OneNn),
                train,
            ),
            MilClassifierSpec::MiSvm { c, max_iter } => fit_mi(
                self.clone(),
                BaseLearner::Svm(SvmParams::with_c(c)),
                train,
                max_iter,
            )
            .map(|f| f.model),
            MilClassifierSpec::MiNm { max_iter } => fit_mi(
                self.clone(),
                BaseLearner::Prototype(PrototypeKind::NearestMean),
                train,
                max_iter,
            )
            .map(|f| f.model),
            MilClassifierSpec::Mi1nn { max_iter } => fit_mi(
                self.clone(),
                BaseLearner::Prototype(PrototypeKind::OneNn),
                train,
                max_iter,
            )
            .map(|f| f.model),
            MilClassifierSpec::MilBoost { rounds } => fit_milboost(train, rounds),
            MilClassifierSpec::Miles { lambda, gamma } => fit_miles(train, lambda, gamma),
        }
    }
}

/// Supervised learner plugged into SimpleMIL and the mi-family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseLearner {
    Svm(SvmParams),
    Prototype(PrototypeKind),
}

/// A trained instance-level model from a [`BaseLearner`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InstanceModel {
    Linear(LinearModel),
    Prototype(PrototypeModel),
}

impl BaseLearner {
    pub fn train<T: AsRef<[f64]>>(&self, x: &[T], y: &[bool]) -> Result<InstanceModel> {
        match self {
            BaseLearner::Svm(p) => crate::baselearners::train_linear_svm(x, y, *p).map(InstanceModel::Linear),
            BaseLearner::Prototype(kind) => {
                crate::baselearners::train_prototype(*kind, x, y).map(InstanceModel::Prototype)
            }
        }
    }
}

impl InstanceModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        match self {
            InstanceModel::Linear(m) => m.decision(x),
            InstanceModel::Prototype(m) => m.score(x),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InstanceModel::Linear(m) => m.dim(),
            InstanceModel::Prototype(m) => m.dim(),
        }
    }
}

/// The fitted model behind a [`TrainedMil`].
#[derive(Debug, Clone, PartialEq)]
pub enum MilModel {
    Instance(InstanceModel),
    Boost(StumpEnsemble),
    Miles(MilesModel),
}

/// How instance outputs become a bag output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BagRule {
    /// Bag score = max instance score; positive when > 0.
    MaxScore,
    /// Bag score = 1 - prod(1 - sigmoid(f_I)); positive when > 0.5.
    NoisyOr,
    /// Bag score computed from the bag's prototype embedding; positive when > 0.
    Embedding,
}

/// Training diagnostics reported per replicate.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected_prototypes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_prototypes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_log_likelihood: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedMil {
    pub spec: MilClassifierSpec,
    pub model: MilModel,
    pub rule: BagRule,
    pub d: usize,
    pub diagnostics: FitDiagnostics,
}

/// Flattened per-instance outputs in dataset order (bag order, then row order).
#[derive(Debug, Clone, PartialEq)]
pub struct InstancePredictions {
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BagPredictions {
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
}

impl TrainedMil {
    /// Instance decision value `f_I(x)`. Positive means positive label.
    pub fn instance_score(&self, x: &[f64]) -> f64 {
        match &self.model {
            MilModel::Instance(m) => m.score(x),
            MilModel::Boost(m) => m.decision(x),
            MilModel::Miles(m) => m.instance_decision(x),
        }
    }

    /// Bag decision value `f_B(B)` and its label.
    pub fn bag_score(&self, instances: &[Vec<f64>]) -> (f64, bool) {
        match (&self.model, self.rule) {
            (MilModel::Miles(m), _) => {
                let s = m.bag_decision(instances);
                (s, s > 0.0)
            }
            (MilModel::Boost(m), _) => {
                let f: Vec<f64> = instances.iter().map(|x| m.decision(x)).collect();
                let p = noisy_or(&f);
                (p, p > 0.5)
            }
            (_, _) => {
                let s = instances
                    .iter()
                    .map(|x| self.instance_score(x))
                    .fold(f64::NEG_INFINITY, f64::max);
                (s, s > 0.0)
            }
        }
    }

    fn check_dim(&self, test: &Dataset) -> Result<()> {
        if test.d != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: test.d,
            });
        }
        Ok(())
    }
}

/// Scores and labels (`score > 0`) for every test instance.
pub fn predict_instances(model: &TrainedMil, test: &Dataset) -> Result<InstancePredictions> {
    model.check_dim(test)?;
    let scores: Vec<f64> = test.instances().map(|x| model.instance_score(x)).collect();
    let labels = scores.iter().map(|&s| s > 0.0).collect();
    Ok(InstancePredictions { scores, labels })
}

/// Bag scores and labels under the model's combining rule.
pub fn predict_bags(model: &TrainedMil, test: &Dataset) -> Result<BagPredictions> {
    model.check_dim(test)?;
    let (scores, labels) = test.bags.iter().map(|b| model.bag_score(&b.instances)).unzip();
    Ok(BagPredictions { scores, labels })
}
