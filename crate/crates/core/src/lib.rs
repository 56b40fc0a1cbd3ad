//! Multiple-instance learning classifiers and the stability of the instance
//! labels they produce.
//!
//! The crate is organized by stage:
//!
//! - [`mildata`]: bags, datasets, CSV I/O, synthetic data, resampling.
//! - [`baselearners`]: linear SVM, nearest mean, 1-NN, weighted stumps.
//! - [`milclassifiers`]: SimpleMIL, miSVM/miNM/mi1NN, MILBoost, MILES.
//! - [`stability`]: agreement `S`, positive agreement `S+`, pairwise
//!   matrices and positiveness histograms.
//! - [`evaluation`]: bag AUC, the resampling experiment, Pareto selection.

pub mod baselearners;
pub mod error;
pub mod evaluation;
pub mod milclassifiers;
pub mod mildata;
pub mod seed;
pub mod stability;

pub use error::{Error, Result};
pub use evaluation::{
    auc, best_by, pareto_frontier, run_experiment, run_experiment_on, Criterion, Execution,
    ExperimentConfig, ParetoPoint, ParetoResult, StabilityReport,
};
pub use milclassifiers::{predict_bags, predict_instances, MilClassifierSpec, TrainedMil};
pub use mildata::{Bag, Dataset, SplitSpec};
pub use stability::{InstanceLabeling, Measure};
