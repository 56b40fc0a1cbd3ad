use serde::{Deserialize, Serialize};

use super::check_xy;
use crate::error::{Error, Result};

/// Axis-aligned decision stump: `polarity` if `x[feature] > threshold`,
/// otherwise `-polarity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    /// +1.0 or -1.0.
    pub polarity: f64,
}

impl Stump {
    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        if x[self.feature] > self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// Minimizes weighted misclassification over every feature and every
/// midpoint between consecutive distinct feature values.
///
/// Candidates are visited by feature, then ascending threshold, then polarity
/// `+1` before `-1`; a candidate replaces the incumbent only if its error is
/// lower by more than `1e-12` of the total weight, so near-ties keep the
/// earliest candidate. If every feature is constant, a constant stump
/// (threshold at the maximum of feature 0) is returned.
///
/// Returns the stump and its weighted error.
pub fn train_stump_weighted<T: AsRef<[f64]>>(
    x: &[T],
    targets: &[bool],
    weights: &[f64],
) -> Result<(Stump, f64)> {
    let d = check_xy(x, targets.len())?;
    if weights.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: weights.len(),
        });
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::invalid("stump weights must be finite and non-negative"));
    }
    let w_pos: f64 = weights.iter().zip(targets).filter(|(_, &t)| t).map(|(w, _)| w).sum();
    let w_neg: f64 = weights.iter().zip(targets).filter(|(_, &t)| !t).map(|(w, _)| w).sum();
    let total = w_pos + w_neg;
    if total <= 0.0 {
        return Err(Error::invalid("stump weights are all zero"));
    }
    let eps = 1e-12 * total;

    let mut best: Option<(Stump, f64)> = None;
    let mut order: Vec<usize> = (0..x.len()).collect();
    for f in 0..d {
        order.sort_by(|&a, &b| x[a].as_ref()[f].total_cmp(&x[b].as_ref()[f]));
        // Weight at or below the current threshold, by target class.
        let (mut below_pos, mut below_neg) = (0.0, 0.0);
        let mut k = 0;
        while k < order.len() {
            let v = x[order[k]].as_ref()[f];
            while k < order.len() && x[order[k]].as_ref()[f] == v {
                let i = order[k];
                if targets[i] {
                    below_pos += weights[i];
                } else {
                    below_neg += weights[i];
                }
                k += 1;
            }
            if k == order.len() {
                break;
            }
            let next = x[order[k]].as_ref()[f];
            let threshold = 0.5 * (v + next);
            let candidates = [
                (1.0, below_pos + (w_neg - below_neg)),
                (-1.0, below_neg + (w_pos - below_pos)),
            ];
            for (polarity, err) in candidates {
                if best.as_ref().is_none_or(|(_, e)| err < e - eps) {
                    best = Some((
                        Stump {
                            feature: f,
                            threshold,
                            polarity,
                        },
                        err,
                    ));
                }
            }
        }
    }

    Ok(best.unwrap_or_else(|| {
        let threshold = x
            .iter()
            .map(|r| r.as_ref()[0])
            .fold(f64::NEG_INFINITY, f64::max);
        // Everything falls at or below the threshold and gets -polarity.
        let (polarity, err) = if w_pos >= w_neg { (-1.0, w_neg) } else { (1.0, w_pos) };
        (
            Stump {
                feature: 0,
                threshold,
                polarity,
            },
            err,
        )
    }))
}
