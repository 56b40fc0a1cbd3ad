use serde::{Deserialize, Serialize};

use super::{check_xy, require_both, sq_dist};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrototypeKind {
    NearestMean,
    OneNn,
}

/// Distance-based classifier. Scores are `d(x, negative) - d(x, positive)`,
/// so positive scores mean the positive class is nearer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrototypeModel {
    NearestMean {
        negative_mean: Vec<f64>,
        positive_mean: Vec<f64>,
    },
    OneNn {
        negatives: Vec<Vec<f64>>,
        positives: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub label: bool,
}

pub fn train_prototype<T: AsRef<[f64]>>(kind: PrototypeKind, x: &[T], y: &[bool]) -> Result<PrototypeModel> {
    let d = check_xy(x, y.len())?;
    require_both(y)?;
    match kind {
        PrototypeKind::NearestMean => {
            let mut sums = [vec![0.0; d], vec![0.0; d]];
            let mut counts = [0usize; 2];
            for (row, &l) in x.iter().zip(y) {
                let c = l as usize;
                counts[c] += 1;
                for (s, v) in sums[c].iter_mut().zip(row.as_ref()) {
                    *s += v;
                }
            }
            let [mut neg, mut pos] = sums;
            neg.iter_mut().for_each(|v| *v /= counts[0] as f64);
            pos.iter_mut().for_each(|v| *v /= counts[1] as f64);
            Ok(PrototypeModel::NearestMean {
                negative_mean: neg,
                positive_mean: pos,
            })
        }
        PrototypeKind::OneNn => {
            let (mut negatives, mut positives) = (Vec::new(), Vec::new());
            for (row, &l) in x.iter().zip(y) {
                if l {
                    positives.push(row.as_ref().to_vec());
                } else {
                    negatives.push(row.as_ref().to_vec());
                }
            }
            Ok(PrototypeModel::OneNn {
                negatives,
                positives,
            })
        }
    }
}

impl PrototypeModel {
    pub fn kind(&self) -> PrototypeKind {
        match self {
            PrototypeModel::NearestMean { .. } => PrototypeKind::NearestMean,
            PrototypeModel::OneNn { .. } => PrototypeKind::OneNn,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PrototypeModel::NearestMean { positive_mean, .. } => positive_mean.len(),
            PrototypeModel::OneNn { positives, .. } => positives[0].len(),
        }
    }

    /// `d(x, negative) - d(x, positive)` with Euclidean distances.
    pub fn score(&self, x: &[f64]) -> f64 {
        match self {
            PrototypeModel::NearestMean {
                negative_mean,
                positive_mean,
            } => sq_dist(x, negative_mean).sqrt() - sq_dist(x, positive_mean).sqrt(),
            PrototypeModel::OneNn {
                negatives,
                positives,
            } => nearest(x, negatives) - nearest(x, positives),
        }
    }
}

fn nearest(x: &[f64], points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .map(|p| sq_dist(x, p))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Label is positive only when the positive side is strictly nearer.
pub fn predict_prototype(model: &PrototypeModel, x: &[f64]) -> Result<Prediction> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.len(),
        });
    }
    let score = model.score(x);
    Ok(Prediction {
        score,
        label: score > 0.0,
    })
}
