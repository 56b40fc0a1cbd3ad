//! MILES: bags embedded by their similarity to every training instance,
//! followed by a sparse linear bag classifier.

use serde::{Deserialize, Serialize};

use super::l1logistic::{train_l1_logistic, L1LogisticParams};
use super::{BagRule, FitDiagnostics, MilClassifierSpec, MilModel, TrainedMil};
use crate::baselearners::sq_dist;
use crate::error::{Error, Result};
use crate::mildata::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilesModel {
    /// All training instances, bag order then row order.
    pub prototypes: Vec<Vec<f64>>,
    pub gamma: f64,
    /// One weight per prototype.
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Indices of prototypes with nonzero weight, ascending.
    pub selected: Vec<usize>,
}

/// Similarity of a bag to a prototype: `exp(-gamma * min_k ||x - x_k||)`.
#[inline]
fn similarity(prototype: &[f64], bag: &[Vec<f64>], gamma: f64) -> f64 {
    let min_sq = bag
        .iter()
        .map(|x| sq_dist(prototype, x))
        .fold(f64::INFINITY, f64::min);
    (-gamma * min_sq.sqrt()).exp()
}

/// Embedding of `bag` against every prototype.
pub fn embed_bag(prototypes: &[Vec<f64>], gamma: f64, bag: &[Vec<f64>]) -> Vec<f64> {
    prototypes.iter().map(|p| similarity(p, bag, gamma)).collect()
}

impl MilesModel {
    /// `f_B(B) = b + sum_j w_j s(B, p_j)` over the selected prototypes.
    pub fn bag_decision(&self, bag: &[Vec<f64>]) -> f64 {
        self.bias
            + self
                .selected
                .iter()
                .map(|&j| self.weights[j] * similarity(&self.prototypes[j], bag, self.gamma))
                .sum::<f64>()
    }

    /// `f_I(x) = f_B({x})`.
    pub fn instance_decision(&self, x: &[f64]) -> f64 {
        let singleton = [x.to_vec()];
        self.bag_decision(&singleton)
    }

    pub fn sparsity(&self) -> f64 {
        self.selected.len() as f64 / self.weights.len() as f64
    }
}

pub fn fit_miles(train: &Dataset, lambda: f64, gamma: f64) -> Result<TrainedMil> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::config(format!("lambda must be positive, got {lambda}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::config(format!("gamma must be positive, got {gamma}")));
    }
    train.require_both_classes()?;
    let prototypes: Vec<Vec<f64>> = train.instances().cloned().collect();
    let embedded: Vec<Vec<f64>> = train
        .bags
        .iter()
        .map(|b| embed_bag(&prototypes, gamma, &b.instances))
        .collect();
    let labels: Vec<bool> = train.bags.iter().map(|b| b.label).collect();
    let fit = train_l1_logistic(&embedded, &labels, L1LogisticParams::new(lambda))?;
    let selected: Vec<usize> = (0..fit.w.len()).filter(|&j| fit.w[j] != 0.0).collect();
    if selected.is_empty() {
        return Err(Error::DegenerateModel {
            lambda,
            lambda_max: fit.lambda_max,
        });
    }
    let model = MilesModel {
        gamma,
        weights: fit.w,
        bias: fit.b,
        selected,
        prototypes,
    };
    Ok(TrainedMil {
        spec: MilClassifierSpec::Miles { lambda, gamma },
        diagnostics: FitDiagnostics {
            iterations: Some(fit.sweeps),
            selected_prototypes: Some(model.selected.len()),
            total_prototypes: Some(model.weights.len()),
            ..FitDiagnostics::default()
        },
        model: MilModel::Miles(model),
        rule: BagRule::Embedding,
        d: train.d,
    })
}
