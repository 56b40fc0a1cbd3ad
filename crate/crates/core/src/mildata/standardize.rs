use serde::{Deserialize, Serialize};

use super::{Bag, Dataset};

/// Per-feature z-scoring with statistics pooled over every instance of the
/// fitting dataset. Constant features get unit scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(dataset: &Dataset) -> Self {
        let d = dataset.d;
        let n = dataset.n_instances() as f64;
        let mut mean = vec![0.0; d];
        for x in dataset.instances() {
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for x in dataset.instances() {
            for ((s, v), m) in var.iter_mut().zip(x).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn transform_instance(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }

    pub fn transform(&self, dataset: &Dataset) -> Dataset {
        let bags = dataset
            .bags
            .iter()
            .map(|b| Bag {
                id: b.id.clone(),
                label: b.label,
                instances: b
                    .instances
                    .iter()
                    .map(|x| self.transform_instance(x))
                    .collect(),
            })
            .collect();
        Dataset {
            name: dataset.name.clone(),
            d: dataset.d,
            bags,
        }
    }
}
