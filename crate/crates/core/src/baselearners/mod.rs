//! Supervised instance-level learners used inside the MIL wrappers.

mod prototype;
mod stump;
mod svm;

pub use prototype::{predict_prototype, train_prototype, Prediction, PrototypeKind, PrototypeModel};
pub use stump::{train_stump_weighted, Stump};
pub use svm::{primal_objective, train_linear_svm, LinearModel, SvmMeta, SvmParams};

use crate::error::{Error, Result};

pub(crate) fn check_xy<T: AsRef<[f64]>>(x: &[T], n_labels: usize) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::invalid("training set has zero rows"));
    }
    if x.len() != n_labels {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: n_labels,
        });
    }
    let d = x[0].as_ref().len();
    if d == 0 {
        return Err(Error::invalid("training rows have zero features"));
    }
    for row in x {
        if row.as_ref().len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: row.as_ref().len(),
            });
        }
    }
    Ok(d)
}

pub(crate) fn require_both(labels: &[bool]) -> Result<()> {
    if !labels.iter().any(|&l| l) {
        Err(Error::SingleClass("no positive instances"))
    } else if labels.iter().all(|&l| l) {
        Err(Error::SingleClass("no negative instances"))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
