//! Linear soft-margin SVM.
//!
//! Solves the L1-loss (hinge) problem
//!
//! ```text
//! min_{w,b}  1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (<w, x_i> + b))
//! ```
//!
//! with an unregularized bias through its dual, using SMO pair updates with
//! second-order working-set selection. `w` is kept explicitly, so each update
//! costs O(n d). Pair updates minimize the dual exactly along a feasible
//! direction, so the dual objective never increases.

use serde::{Deserialize, Serialize};

use super::{check_xy, dot, require_both};
use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    /// One epoch is `n` pair updates.
    pub max_epochs: usize,
    /// Stop when the dual objective changes by less than this fraction over an epoch.
    pub tol: f64,
    /// Stop when the maximal KKT violation drops below this.
    pub kkt_tol: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            max_epochs: 200,
            tol: 1e-4,
            kkt_tol: 1e-6,
        }
    }
}

impl SvmParams {
    pub fn with_c(c: f64) -> Self {
        SvmParams {
            c,
            ..Self::default()
        }
    }
}

/// Training diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmMeta {
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Sum of slack values at the returned solution.
    pub hinge_loss: f64,
    pub iterations: usize,
    pub epochs: usize,
    pub converged: bool,
    /// Dual objective (minimization form) after each completed epoch.
    pub dual_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub meta: SvmMeta,
}

impl LinearModel {
    #[inline]
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) + self.b
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }
}

/// Trains a linear SVM. `y[i] == true` is the +1 class.
pub fn train_linear_svm<T: AsRef<[f64]>>(x: &[T], y: &[bool], params: SvmParams) -> Result<LinearModel> {
    let d = check_xy(x, y.len())?;
    require_both(y)?;
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::config(format!("C must be positive, got {}", params.c)));
    }
    let n = x.len();
    let c = params.c;
    let ys: Vec<f64> = y.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    let kd: Vec<f64> = x.iter().map(|r| dot(r.as_ref(), r.as_ref())).collect();

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut w = vec![0.0; d];
    let mut krow = vec![0.0; n];

    let is_upper = |a: f64| a >= c;
    let is_lower = |a: f64| a <= 0.0;

    let mut iterations = 0usize;
    let mut epochs = 0usize;
    let mut converged = false;
    let mut dual_history = Vec::new();
    let mut prev_obj = 0.0;

    'outer: while epochs < params.max_epochs {
        for _ in 0..n {
            // Select i: maximal -y_t G_t over the "up" set.
            let mut gmax = f64::NEG_INFINITY;
            let mut i_sel = usize::MAX;
            for t in 0..n {
                let v = -ys[t] * grad[t];
                let up = if ys[t] > 0.0 { !is_upper(alpha[t]) } else { !is_lower(alpha[t]) };
                if up && v > gmax {
                    gmax = v;
                    i_sel = t;
                }
            }
            if i_sel == usize::MAX {
                converged = true;
                break 'outer;
            }
            let i = i_sel;
            let xi = x[i].as_ref();
            for (t, k) in krow.iter_mut().enumerate() {
                *k = dot(xi, x[t].as_ref());
            }

            // Select j: second-order gain over the "low" set.
            let mut gmax2 = f64::NEG_INFINITY;
            let mut j_sel = usize::MAX;
            let mut best_gain = f64::INFINITY;
            for t in 0..n {
                let low = if ys[t] > 0.0 { !is_lower(alpha[t]) } else { !is_upper(alpha[t]) };
                if !low {
                    continue;
                }
                let v = ys[t] * grad[t];
                if v > gmax2 {
                    gmax2 = v;
                }
                let grad_diff = gmax + v;
                if grad_diff > 0.0 {
                    let quad = kd[i] + kd[t] - 2.0 * krow[t];
                    let quad = if quad > 0.0 { quad } else { TAU };
                    let gain = -(grad_diff * grad_diff) / quad;
                    if gain < best_gain {
                        best_gain = gain;
                        j_sel = t;
                    }
                }
            }
            if gmax + gmax2 < params.kkt_tol || j_sel == usize::MAX {
                converged = true;
                break 'outer;
            }
            let j = j_sel;

            let (old_i, old_j) = (alpha[i], alpha[j]);
            let qij = ys[i] * ys[j] * krow[j];
            if ys[i] != ys[j] {
                let quad = kd[i] + kd[j] + 2.0 * qij;
                let quad = if quad > 0.0 { quad } else { TAU };
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if diff > 0.0 {
                    if alpha[j] < 0.0 {
                        alpha[j] = 0.0;
                        alpha[i] = diff;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if diff > 0.0 {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let quad = kd[i] + kd[j] - 2.0 * qij;
                let quad = if quad > 0.0 { quad } else { TAU };
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }

            let di = (alpha[i] - old_i) * ys[i];
            let dj = (alpha[j] - old_j) * ys[j];
            let xj = x[j].as_ref();
            let mut dw = vec![0.0; d];
            for k in 0..d {
                dw[k] = di * xi[k] + dj * xj[k];
                w[k] += dw[k];
            }
            for t in 0..n {
                grad[t] += ys[t] * dot(&dw, x[t].as_ref());
            }
            iterations += 1;
        }
        epochs += 1;
        let obj = dual_objective(&w, &alpha);
        dual_history.push(obj);
        if epochs > 1 && (prev_obj - obj).abs() <= params.tol * obj.abs().max(1e-12) {
            converged = true;
            break;
        }
        prev_obj = obj;
    }
    let dual = dual_objective(&w, &alpha);
    if dual_history.last() != Some(&dual) {
        dual_history.push(dual);
    }

    let b = -rho(&ys, &grad, &alpha, c);
    let hinge_loss: f64 = x
        .iter()
        .zip(&ys)
        .map(|(r, yi)| (1.0 - yi * (dot(&w, r.as_ref()) + b)).max(0.0))
        .sum();
    let primal = 0.5 * dot(&w, &w) + c * hinge_loss;

    Ok(LinearModel {
        w,
        b,
        meta: SvmMeta {
            primal_objective: primal,
            dual_objective: dual,
            hinge_loss,
            iterations,
            epochs,
            converged,
            dual_history,
        },
    })
}

/// Primal objective of an arbitrary `(w, b)`.
pub fn primal_objective<T: AsRef<[f64]>>(x: &[T], y: &[bool], c: f64, w: &[f64], b: f64) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(r, &l)| {
            let yi = if l { 1.0 } else { -1.0 };
            (1.0 - yi * (dot(w, r.as_ref()) + b)).max(0.0)
        })
        .sum();
    0.5 * dot(w, w) + c * hinge
}

fn dual_objective(w: &[f64], alpha: &[f64]) -> f64 {
    0.5 * dot(w, w) - alpha.iter().sum::<f64>()
}

fn rho(ys: &[f64], grad: &[f64], alpha: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut n_free = 0usize;
    let mut sum_free = 0.0;
    for t in 0..ys.len() {
        let yg = ys[t] * grad[t];
        if alpha[t] >= c {
            if ys[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if ys[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    }
}
