//! L1-regularized logistic regression by cyclic coordinate descent.
//!
//! Minimizes
//!
//! ```text
//! F(w, b) = sum_i [ log(1 + exp(eta_i)) - y_i eta_i ] + lambda * ||w||_1,
//! eta_i = b + <w, s_i>
//! ```
//!
//! The bias is unpenalized. Each coordinate takes a proximal Newton step
//! (soft-thresholded) followed by backtracking until `F` does not increase, so
//! the objective is monotone over updates. Sweeps run in fixed coordinate
//! order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1LogisticParams {
    pub lambda: f64,
    /// Stop when no coefficient moves by more than this in a sweep.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl L1LogisticParams {
    pub fn new(lambda: f64) -> Self {
        L1LogisticParams {
            lambda,
            tol: 1e-6,
            max_sweeps: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1LogisticModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub sweeps: usize,
    pub converged: bool,
    pub objective: f64,
    /// Smallest lambda at which every weight is zero.
    pub lambda_max: f64,
}

impl L1LogisticModel {
    pub fn nonzero(&self) -> usize {
        self.w.iter().filter(|&&v| v != 0.0).count()
    }
}

#[inline]
fn logistic_loss(eta: f64, y: f64) -> f64 {
    eta.max(0.0) + (-eta.abs()).exp().ln_1p() - y * eta
}

#[inline]
fn sigmoid(f: f64) -> f64 {
    super::milboost::sigmoid(f)
}

fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Trains on rows `s` (one per sample) with binary targets `y`.
///
/// Fails with [`Error::DegenerateModel`] when `lambda >= lambda_max`, where
/// every weight is zero at the optimum.
pub fn train_l1_logistic(s: &[Vec<f64>], y: &[bool], params: L1LogisticParams) -> Result<L1LogisticModel> {
    let d = crate::baselearners::check_xy(s, y.len())?;
    crate::baselearners::require_both(y)?;
    if !(params.lambda > 0.0 && params.lambda.is_finite()) {
        return Err(Error::config(format!("lambda must be positive, got {}", params.lambda)));
    }
    let n = s.len();
    let lambda = params.lambda;
    let yv: Vec<f64> = y.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect();

    // Column-major copy for coordinate access.
    let cols: Vec<Vec<f64>> = (0..d).map(|j| s.iter().map(|r| r[j]).collect()).collect();

    let mean_y = yv.iter().sum::<f64>() / n as f64;
    let mut b = (mean_y / (1.0 - mean_y)).ln();
    let p0 = sigmoid(b);
    let lambda_max = cols
        .iter()
        .map(|c| c.iter().zip(&yv).map(|(v, yi)| (p0 - yi) * v).sum::<f64>().abs())
        .fold(0.0, f64::max);
    if lambda >= lambda_max {
        return Err(Error::DegenerateModel { lambda, lambda_max });
    }

    let mut w = vec![0.0; d];
    let mut eta = vec![b; n];
    let loss_of = |eta: &[f64]| -> f64 { eta.iter().zip(&yv).map(|(&e, &yi)| logistic_loss(e, yi)).sum() };
    let mut loss = loss_of(&eta);
    let mut trial = vec![0.0; n];

    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < params.max_sweeps {
        sweeps += 1;
        let mut max_change: f64 = 0.0;

        // Bias: unpenalized Newton step with backtracking.
        {
            let (mut g, mut h) = (0.0, 0.0);
            for (e, yi) in eta.iter().zip(&yv) {
                let p = sigmoid(*e);
                g += p - yi;
                h += p * (1.0 - p);
            }
            let mut step = -g / h.max(1e-12);
            for _ in 0..50 {
                for (t, e) in trial.iter_mut().zip(&eta) {
                    *t = e + step;
                }
                let new_loss = loss_of(&trial);
                if new_loss <= loss {
                    b += step;
                    std::mem::swap(&mut eta, &mut trial);
                    loss = new_loss;
                    max_change = max_change.max(step.abs());
                    break;
                }
                step *= 0.5;
            }
        }

        for j in 0..d {
            let col = &cols[j];
            let (mut g, mut h) = (0.0, 0.0);
            for ((e, yi), v) in eta.iter().zip(&yv).zip(col) {
                if *v == 0.0 {
                    continue;
                }
                let p = sigmoid(*e);
                g += (p - yi) * v;
                h += p * (1.0 - p) * v * v;
            }
            let h = h.max(1e-12);
            let old = w[j];
            let target = soft_threshold(old - g / h, lambda / h);
            let mut delta = target - old;
            if delta == 0.0 {
                continue;
            }
            let base = loss + lambda * old.abs();
            for _ in 0..50 {
                let cand = old + delta;
                for ((t, e), v) in trial.iter_mut().zip(&eta).zip(col) {
                    *t = e + delta * v;
                }
                let new_loss = loss_of(&trial);
                if new_loss + lambda * cand.abs() <= base {
                    w[j] = cand;
                    std::mem::swap(&mut eta, &mut trial);
                    loss = new_loss;
                    max_change = max_change.max(delta.abs());
                    break;
                }
                delta *= 0.5;
            }
        }

        if max_change < params.tol {
            converged = true;
            break;
        }
    }

    let objective = loss + lambda * w.iter().map(|v| v.abs()).sum::<f64>();
    Ok(L1LogisticModel {
        w,
        b,
        sweeps,
        converged,
        objective,
        lambda_max,
    })
}
