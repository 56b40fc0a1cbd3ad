//! Noisy-or boosting of decision stumps.
//!
//! Instance probability `p = sigmoid(f_I(x))`, bag probability
//! `P = 1 - prod_k (1 - p_k)`. Each round fits a stump to the gradient of the
//! bag log-likelihood with respect to the instance scores and adds it with a
//! step found by a 1-D line search on the likelihood.

use serde::{Deserialize, Serialize};

use super::{BagRule, FitDiagnostics, MilClassifierSpec, MilModel, TrainedMil};
use crate::baselearners::{train_stump_weighted, Stump};
use crate::error::{Error, Result};
use crate::mildata::Dataset;

const MAX_STEP: f64 = 64.0;
const GOLDEN_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StumpEnsemble {
    /// `(stump, stage weight)` per round.
    pub stumps: Vec<(Stump, f64)>,
    pub rounds: usize,
    /// Training bag log-likelihood before the first round and after each round.
    pub log_likelihood: Vec<f64>,
}

impl StumpEnsemble {
    /// `f_I(x) = sum_t alpha_t h_t(x)`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.stumps.iter().map(|(s, a)| a * s.predict(x)).sum()
    }
}

#[inline]
pub fn sigmoid(f: f64) -> f64 {
    if f >= 0.0 {
        1.0 / (1.0 + (-f).exp())
    } else {
        let e = f.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^f)` without overflow.
#[inline]
fn softplus(f: f64) -> f64 {
    f.max(0.0) + (-f.abs()).exp().ln_1p()
}

/// `-log(1 - P)` for a bag: `sum_k softplus(f_k)`.
fn neg_log_miss(scores: &[f64]) -> f64 {
    scores.iter().map(|&f| softplus(f)).sum()
}

/// Noisy-or bag probability from instance scores (logits).
pub fn noisy_or(scores: &[f64]) -> f64 {
    -(-neg_log_miss(scores)).exp_m1()
}

fn log_p_from_s(s: f64) -> f64 {
    // log(1 - e^{-s}); for tiny s the expm1 form keeps full precision.
    (-(-s).exp_m1()).max(f64::MIN_POSITIVE).ln()
}

/// Bag log-likelihood `sum_i y_i log P_i + (1 - y_i) log(1 - P_i)`.
///
/// `scores[i]` holds the instance scores of bag `i`.
pub fn bag_log_likelihood(scores: &[Vec<f64>], labels: &[bool]) -> f64 {
    scores
        .iter()
        .zip(labels)
        .map(|(f, &y)| {
            let s = neg_log_miss(f);
            if y {
                log_p_from_s(s)
            } else {
                -s
            }
        })
        .sum()
}

/// Gradient of [`bag_log_likelihood`] with respect to every instance score.
///
/// Negative bag: `-p_k`. Positive bag: `p_k (1 - P) / P`.
pub fn noisy_or_gradient(scores: &[Vec<f64>], labels: &[bool]) -> Vec<Vec<f64>> {
    scores
        .iter()
        .zip(labels)
        .map(|(f, &y)| {
            if y {
                let s = neg_log_miss(f);
                let ratio = (-s).exp() / (-(-s).exp_m1()).max(f64::MIN_POSITIVE);
                f.iter().map(|&v| sigmoid(v) * ratio).collect()
            } else {
                f.iter().map(|&v| -sigmoid(v)).collect()
            }
        })
        .collect()
}

fn shifted(scores: &[Vec<f64>], h: &[Vec<f64>], step: f64) -> Vec<Vec<f64>> {
    scores
        .iter()
        .zip(h)
        .map(|(f, hh)| f.iter().zip(hh).map(|(a, b)| a + step * b).collect())
        .collect()
}

/// Step along `h` maximizing the likelihood: bracket by doubling up to
/// `MAX_STEP`, refine by golden-section search, and never return a step whose
/// likelihood is below that of step 0.
fn line_search(scores: &[Vec<f64>], h: &[Vec<f64>], labels: &[bool]) -> (f64, f64) {
    let eval = |a: f64| bag_log_likelihood(&shifted(scores, h, a), labels);
    let base = eval(0.0);
    let mut hi = 1.0;
    let mut prev = eval(hi);
    while hi < MAX_STEP {
        let next = eval(2.0 * hi);
        if next <= prev {
            break;
        }
        hi *= 2.0;
        prev = next;
    }
    let upper = (2.0 * hi).min(MAX_STEP);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, upper);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
        }
    }
    let mut best = (0.0, base);
    for cand in [0.5 * (a + b), hi, upper] {
        let v = eval(cand);
        if v > best.1 {
            best = (cand, v);
        }
    }
    best
}

/// MILBoost with `rounds` stumps. Stops early if the gradient vanishes.
pub fn fit_milboost(train: &Dataset, rounds: usize) -> Result<TrainedMil> {
    if rounds < 1 {
        return Err(Error::config("MILBoost needs at least one round"));
    }
    train.require_both_classes()?;
    let labels: Vec<bool> = train.bags.iter().map(|b| b.label).collect();
    let x: Vec<&[f64]> = train.instances().map(Vec::as_slice).collect();
    let mut scores: Vec<Vec<f64>> = train.bags.iter().map(|b| vec![0.0; b.len()]).collect();
    let mut stumps = Vec::with_capacity(rounds);
    let mut history = vec![bag_log_likelihood(&scores, &labels)];

    for _ in 0..rounds {
        let grad: Vec<f64> = noisy_or_gradient(&scores, &labels).into_iter().flatten().collect();
        let targets: Vec<bool> = grad.iter().map(|&g| g > 0.0).collect();
        let weights: Vec<f64> = grad.iter().map(|g| g.abs()).collect();
        if weights.iter().sum::<f64>() <= f64::MIN_POSITIVE {
            break;
        }
        let (stump, _) = train_stump_weighted(&x, &targets, &weights)?;
        let h: Vec<Vec<f64>> = train
            .bags
            .iter()
            .map(|b| b.instances.iter().map(|xi| stump.predict(xi)).collect())
            .collect();
        let (step, ll) = line_search(&scores, &h, &labels);
        scores = shifted(&scores, &h, step);
        stumps.push((stump, step));
        history.push(ll);
    }

    let ensemble = StumpEnsemble {
        rounds: stumps.len(),
        stumps,
        log_likelihood: history,
    };
    Ok(TrainedMil {
        spec: MilClassifierSpec::MilBoost { rounds },
        diagnostics: FitDiagnostics {
            iterations: Some(ensemble.rounds),
            train_log_likelihood: ensemble.log_likelihood.last().copied(),
            ..FitDiagnostics::default()
        },
        model: MilModel::Boost(ensemble),
        rule: BagRule::NoisyOr,
        d: train.d,
    })
}
