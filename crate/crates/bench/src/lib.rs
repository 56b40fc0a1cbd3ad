//! Shared fixtures for the criterion benchmarks.

use milstab_core::mildata::{generate_synthetic, SynthConfig};
use milstab_core::Dataset;

/// Synthetic dataset with `bags_per_class` bags of each class.
pub fn synthetic(bags_per_class: usize, inst_per_bag: usize, d: usize) -> Dataset {
    generate_synthetic(&SynthConfig {
        n_pos_bags: bags_per_class,
        n_neg_bags: bags_per_class,
        inst_per_bag,
        d,
        witness_fraction: 0.2,
        cluster_separation: 3.0,
        seed: 17,
    })
    .expect("valid config")
    .dataset
}
