//! Bag-level AUC, the resampling experiment and AUC-versus-stability
//! Pareto selection.

mod auc;
mod experiment;
mod pareto;
mod report;

pub use auc::auc;
pub use experiment::{
    run_experiment, run_experiment_on, ClassifierEntry, DataSource, Execution, ExperimentConfig,
    SplitConfig,
};
pub use pareto::{best_by, dominates, pareto_frontier, Criterion, ParetoPoint, ParetoResult};
pub use report::{
    BaselineRow, ClassifierReport, ReplicateReport, StabilityReport, TestBag, BASELINE_NAME,
};
