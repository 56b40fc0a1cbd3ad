use super::{BagRule, BaseLearner, FitDiagnostics, MilClassifierSpec, MilModel, TrainedMil};
use crate::error::Result;
use crate::mildata::Dataset;

/// SimpleMIL: every instance inherits its bag label and the base learner is
/// trained on the pooled instances. Bags are combined with the max rule.
pub fn fit_simplemil(spec: MilClassifierSpec, learner: BaseLearner, train: &Dataset) -> Result<TrainedMil> {
    train.require_both_classes()?;
    let x: Vec<&[f64]> = train.instances().map(Vec::as_slice).collect();
    let y: Vec<bool> = train
        .bags
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.label, b.len()))
        .collect();
    let model = learner.train(&x, &y)?;
    Ok(TrainedMil {
        spec,
        model: MilModel::Instance(model),
        rule: BagRule::MaxScore,
        d: train.d,
        diagnostics: FitDiagnostics::default(),
    })
}
