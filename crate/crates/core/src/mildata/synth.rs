use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Bag, Dataset};
use crate::error::{Error, Result};
use crate::seed;

/// Parameters of the two-Gaussian bag generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub n_pos_bags: usize,
    pub n_neg_bags: usize,
    pub inst_per_bag: usize,
    pub d: usize,
    pub witness_fraction: f64,
    pub cluster_separation: f64,
    pub seed: u64,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_pos_bags < 1 || self.n_neg_bags < 1 {
            return Err(Error::config("need at least one positive and one negative bag"));
        }
        if self.inst_per_bag < 1 || self.d < 1 {
            return Err(Error::config("inst_per_bag and d must be at least 1"));
        }
        if !(self.witness_fraction > 0.0 && self.witness_fraction <= 1.0) {
            return Err(Error::config(format!(
                "witness_fraction must lie in (0, 1], got {}",
                self.witness_fraction
            )));
        }
        if !(self.cluster_separation > 0.0 && self.cluster_separation.is_finite()) {
            return Err(Error::config(format!(
                "cluster_separation must be positive, got {}",
                self.cluster_separation
            )));
        }
        Ok(())
    }

    /// Witnesses per positive bag, `ceil(witness_fraction * inst_per_bag)`.
    pub fn witnesses_per_bag(&self) -> usize {
        // The epsilon absorbs products like 0.3 * 10 = 3.0000000000000004.
        let w = (self.witness_fraction * self.inst_per_bag as f64 - 1e-9).ceil() as usize;
        w.clamp(1, self.inst_per_bag)
    }
}

/// Generated data plus ground-truth instance labels (one vector per bag).
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub dataset: Dataset,
    pub instance_labels: Vec<Vec<bool>>,
}

/// Negative bags hold only background instances drawn from N(0, I). Positive
/// bags hold `witnesses_per_bag()` witnesses drawn from N(sep * e1, I) at
/// random positions, the rest background.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<SyntheticData> {
    cfg.validate()?;
    let mut rng = seed::rng(cfg.seed);
    let n_wit = cfg.witnesses_per_bag();
    let mut bags = Vec::with_capacity(cfg.n_pos_bags + cfg.n_neg_bags);
    let mut truth = Vec::with_capacity(bags.capacity());

    let draw = |rng: &mut rand_chacha::ChaCha8Rng, shift: f64| -> Vec<f64> {
        (0..cfg.d)
            .map(|j| {
                let z: f64 = rng.sample(StandardNormal);
                if j == 0 {
                    z + shift
                } else {
                    z
                }
            })
            .collect()
    };

    for i in 0..cfg.n_pos_bags {
        let mut labels = vec![false; cfg.inst_per_bag];
        for k in rand::seq::index::sample(&mut rng, cfg.inst_per_bag, n_wit) {
            labels[k] = true;
        }
        let instances = labels
            .iter()
            .map(|&w| draw(&mut rng, if w { cfg.cluster_separation } else { 0.0 }))
            .collect();
        bags.push(Bag::new(format!("pos{i}"), true, instances)?);
        truth.push(labels);
    }
    for i in 0..cfg.n_neg_bags {
        let instances = (0..cfg.inst_per_bag).map(|_| draw(&mut rng, 0.0)).collect();
        bags.push(Bag::new(format!("neg{i}"), false, instances)?);
        truth.push(vec![false; cfg.inst_per_bag]);
    }

    Ok(SyntheticData {
        dataset: Dataset::new("synthetic", bags)?,
        instance_labels: truth,
    })
}
