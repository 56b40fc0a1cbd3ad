//! The mi-family: alternate between training an instance learner and
//! re-estimating the hidden instance labels of positive bags.

use super::{BagRule, BaseLearner, FitDiagnostics, InstanceModel, MilClassifierSpec, MilModel, TrainedMil};
use crate::error::{Error, Result};
use crate::mildata::Dataset;

/// Result of an mi-family fit: the classifier plus the final hidden labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MiFit {
    pub model: TrainedMil,
    /// Final instance labels, one vector per training bag.
    pub labels: Vec<Vec<bool>>,
    pub iterations: usize,
    pub fixed_point: bool,
}

/// New hidden labels from per-instance scores.
///
/// Instances of negative bags are always negative. Instances of positive bags
/// take the predicted label (`score > 0`); a positive bag with no positive
/// prediction gets its highest-scoring instance (first on ties) set positive.
pub fn relabel_positive_bags(bag_labels: &[bool], scores: &[Vec<f64>]) -> Vec<Vec<bool>> {
    bag_labels
        .iter()
        .zip(scores)
        .map(|(&positive, s)| {
            if !positive {
                return vec![false; s.len()];
            }
            let mut z: Vec<bool> = s.iter().map(|&v| v > 0.0).collect();
            if !z.iter().any(|&v| v) {
                let mut best = 0;
                for (k, &v) in s.iter().enumerate() {
                    if v > s[best] {
                        best = k;
                    }
                }
                z[best] = true;
            }
            z
        })
        .collect()
}

/// Alternating optimization:
///
/// 1. initialize hidden labels by propagating bag labels;
/// 2. train the base learner on all instances with the current labels;
/// 3. relabel with [`relabel_positive_bags`];
/// 4. stop when the labels no longer change or after `max_iter` trainings.
///
/// The returned model is the one trained on the final labels when a fixed
/// point is reached, otherwise the last one trained.
pub fn fit_mi(spec: MilClassifierSpec, learner: BaseLearner, train: &Dataset, max_iter: usize) -> Result<MiFit> {
    train.require_both_classes()?;
    if max_iter < 1 {
        return Err(Error::config("max_iter must be at least 1"));
    }
    let x: Vec<&[f64]> = train.instances().map(Vec::as_slice).collect();
    let bag_labels: Vec<bool> = train.bags.iter().map(|b| b.label).collect();
    let mut z: Vec<Vec<bool>> = train.bags.iter().map(|b| vec![b.label; b.len()]).collect();

    let mut iterations = 0;
    let mut fixed_point = false;
    let mut model: Option<InstanceModel> = None;
    while iterations < max_iter {
        let flat: Vec<bool> = z.iter().flatten().copied().collect();
        let m = learner.train(&x, &flat)?;
        iterations += 1;
        let scores: Vec<Vec<f64>> = train
            .bags
            .iter()
            .map(|b| b.instances.iter().map(|xi| m.score(xi)).collect())
            .collect();
        let next = relabel_positive_bags(&bag_labels, &scores);
        model = Some(m);
        if next == z {
            fixed_point = true;
            break;
        }
        z = next;
    }

    let model = TrainedMil {
        spec,
        model: MilModel::Instance(model.expect("at least one training round")),
        rule: BagRule::MaxScore,
        d: train.d,
        diagnostics: FitDiagnostics {
            iterations: Some(iterations),
            fixed_point: Some(fixed_point),
            ..FitDiagnostics::default()
        },
    };
    Ok(MiFit {
        model,
        labels: z,
        iterations,
        fixed_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselearners::{PrototypeKind, SvmParams};
    use crate::mildata::{generate_synthetic, Bag, SynthConfig};

    #[test]
    fn repair_flips_argmax_only() {
        let z = relabel_positive_bags(&[true, false], &[vec![-3.0, -0.5, -1.0], vec![2.0, 5.0]]);
        assert_eq!(z, vec![vec![false, true, false], vec![false, false]]);
    }

    #[test]
    fn repair_tie_takes_first() {
        let z = relabel_positive_bags(&[true], &[vec![-1.0, -1.0]]);
        assert_eq!(z, vec![vec![true, false]]);
    }

    #[test]
    fn predicted_positives_kept() {
        let z = relabel_positive_bags(&[true], &[vec![0.1, -0.1, 0.0, 2.0]]);
        assert_eq!(z, vec![vec![true, false, false, true]]);
    }

    #[test]
    fn fixed_point_after_one_pass() {
        // Positive bag instances are far on the positive side, so the learner
        // reproduces the propagated labels immediately.
        let ds = Dataset::new(
            "fp",
            vec![
                Bag::new("p", true, vec![vec![4.0], vec![5.0]]).unwrap(),
                Bag::new("n", false, vec![vec![-4.0], vec![-5.0]]).unwrap(),
            ],
        )
        .unwrap();
        let spec = MilClassifierSpec::MiNm { max_iter: 20 };
        let fit = fit_mi(spec, BaseLearner::Prototype(PrototypeKind::NearestMean), &ds, 20).unwrap();
        assert_eq!(fit.iterations, 1);
        assert!(fit.fixed_point);
        assert_eq!(fit.labels, vec![vec![true, true], vec![false, false]]);
    }

    #[test]
    fn recovers_witnesses_on_separable_data() {
        let data = generate_synthetic(&SynthConfig {
            n_pos_bags: 20,
            n_neg_bags: 20,
            inst_per_bag: 10,
            d: 5,
            witness_fraction: 0.1,
            cluster_separation: 6.0,
            seed: 11,
        })
        .unwrap();
        let spec = MilClassifierSpec::MiSvm { c: 1.0, max_iter: 20 };
        let fit = fit_mi(spec, BaseLearner::Svm(SvmParams::default()), &data.dataset, 20).unwrap();
        let (agree, total) = fit
            .labels
            .iter()
            .flatten()
            .zip(data.instance_labels.iter().flatten())
            .fold((0, 0), |(a, t), (p, q)| (a + (p == q) as usize, t + 1));
        assert!(agree as f64 / total as f64 >= 0.95, "{agree}/{total}");
    }

    #[test]
    fn constraints_hold_at_termination() {
        for seed in 0..10 {
            let data = generate_synthetic(&SynthConfig {
                n_pos_bags: 6,
                n_neg_bags: 6,
                inst_per_bag: 4,
                d: 3,
                witness_fraction: 0.25,
                cluster_separation: 1.0,
                seed,
            })
            .unwrap();
            for learner in [
                BaseLearner::Svm(SvmParams::default()),
                BaseLearner::Prototype(PrototypeKind::NearestMean),
                BaseLearner::Prototype(PrototypeKind::OneNn),
            ] {
                let fit = fit_mi(MilClassifierSpec::MiNm { max_iter: 5 }, learner, &data.dataset, 5).unwrap();
                for (bag, z) in data.dataset.bags.iter().zip(&fit.labels) {
                    if bag.label {
                        assert!(z.iter().any(|&v| v));
                    } else {
                        assert!(z.iter().all(|&v| !v));
                    }
                }
            }
        }
    }
}
