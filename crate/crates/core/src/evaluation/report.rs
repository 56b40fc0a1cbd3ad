//! Experiment report and its JSON encoding.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly; non-finite values become `null`. Matrices are arrays of
//! rows.

use std::io;

use serde::{Deserialize, Serialize};

use super::pareto::ParetoPoint;
use crate::error::{Error, Result};
use crate::milclassifiers::{FitDiagnostics, MilClassifierSpec};
use crate::stability::{Measure, Positiveness};

pub const BASELINE_NAME: &str = "all_positive";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestBag {
    pub id: String,
    pub label: u8,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateReport {
    pub index: usize,
    pub seed: u64,
    pub train_bags: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub auc: Option<f64>,
    pub bag_scores: Option<Vec<f64>>,
    pub bag_labels: Option<Vec<u8>>,
    pub instance_labels: Option<Vec<u8>>,
    pub diagnostics: Option<FitDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub name: String,
    pub spec: MilClassifierSpec,
    pub failed_replicates: usize,
    pub mean_auc: Option<f64>,
    pub mean_s: Option<f64>,
    pub mean_s_plus: Option<f64>,
    pub s_matrix: Option<Vec<Vec<f64>>>,
    pub s_plus_matrix: Option<Vec<Vec<f64>>>,
    pub s_vs_s_plus_correlation: Option<f64>,
    pub degenerate_s_plus_pairs: usize,
    pub positiveness: Option<Positiveness>,
    pub replicates: Vec<ReplicateReport>,
}

impl ClassifierReport {
    /// True when no replicate produced a model.
    pub fn all_failed(&self) -> bool {
        self.failed_replicates == self.replicates.len()
    }

    pub fn mean_stability(&self, measure: Measure) -> Option<f64> {
        match measure {
            Measure::Agreement => self.mean_s,
            Measure::PositiveAgreement => self.mean_s_plus,
        }
    }
}

/// Reference classifier labeling every instance positive: constant scores give
/// AUC 0.5 and identical labelings give S = S+ = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub name: String,
    pub mean_auc: f64,
    pub mean_s: f64,
    pub mean_s_plus: f64,
}

impl BaselineRow {
    pub fn all_positive() -> Self {
        BaselineRow {
            name: BASELINE_NAME.to_string(),
            mean_auc: 0.5,
            mean_s: 1.0,
            mean_s_plus: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub dataset: String,
    pub d: usize,
    pub repetitions: usize,
    pub fraction: f64,
    pub seed: u64,
    pub standardize: bool,
    pub train_bag_ids: Vec<String>,
    pub test_bags: Vec<TestBag>,
    pub classifiers: Vec<ClassifierReport>,
    pub baseline: BaselineRow,
}

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

impl StabilityReport {
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
        self.serialize(&mut ser)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }

    pub fn test_instance_count(&self) -> usize {
        self.test_bags.iter().map(|b| b.instances).sum()
    }

    pub fn classifier(&self, name: &str) -> Option<&ClassifierReport> {
        self.classifiers.iter().find(|c| c.name == name)
    }

    pub fn classifier_names(&self) -> Vec<&str> {
        self.classifiers.iter().map(|c| c.name.as_str()).collect()
    }

    /// True when some classifier failed on every replicate.
    pub fn has_total_failure(&self) -> bool {
        self.classifiers.iter().any(ClassifierReport::all_failed)
    }

    /// One point per classifier with a mean AUC and mean stability, followed
    /// by the all-positive baseline.
    pub fn pareto_points(&self, measure: Measure) -> Vec<ParetoPoint> {
        let mut points: Vec<ParetoPoint> = self
            .classifiers
            .iter()
            .filter_map(|c| {
                Some(ParetoPoint::new(
                    c.name.clone(),
                    c.mean_auc?,
                    c.mean_stability(measure)?,
                ))
            })
            .collect();
        let b = &self.baseline;
        points.push(ParetoPoint::new(
            b.name.clone(),
            b.mean_auc,
            match measure {
                Measure::Agreement => b.mean_s,
                Measure::PositiveAgreement => b.mean_s_plus,
            },
        ));
        points
    }

    /// Instance index range of each test bag in the flattened labelings.
    pub fn bag_offsets(&self) -> Vec<(String, std::ops::Range<usize>)> {
        let mut start = 0;
        self.test_bags
            .iter()
            .map(|b| {
                let r = start..start + b.instances;
                start = r.end;
                (b.id.clone(), r)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits_and_round_trip() {
        let report = StabilityReport {
            dataset: "x".into(),
            d: 1,
            repetitions: 2,
            fraction: 0.8,
            seed: 1,
            standardize: true,
            train_bag_ids: vec!["a".into()],
            test_bags: vec![],
            classifiers: vec![],
            baseline: BaselineRow::all_positive(),
        };
        let bytes = report.to_json().unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"fraction\":8.0000000000000004e-1"), "{text}");
        assert_eq!(StabilityReport::from_json(&text).unwrap(), report);
    }
}
