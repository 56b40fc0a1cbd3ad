//! Bags, instances and datasets, plus file I/O, synthetic generation,
//! bag-level resampling and feature standardization.

mod csv_io;
mod resample;
mod standardize;
mod synth;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub use csv_io::{load_dataset, read_dataset, write_dataset, write_instance_labels};
pub use resample::resample_train_bags;
pub use standardize::Standardizer;
pub use synth::{generate_synthetic, SynthConfig, SyntheticData};

/// Feature vector of one instance.
pub type Instance = Vec<f64>;

/// A labeled set of instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bag {
    pub id: String,
    pub label: bool,
    pub instances: Vec<Instance>,
}

impl Bag {
    pub fn new(id: impl Into<String>, label: bool, instances: Vec<Instance>) -> Result<Self> {
        let id = id.into();
        let Some(first) = instances.first() else {
            return Err(Error::invalid(format!("bag {id} has no instances")));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::invalid(format!("bag {id} has zero-dimensional instances")));
        }
        for (k, x) in instances.iter().enumerate() {
            if x.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.len(),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!(
                    "bag {id} instance {k} has a non-finite feature"
                )));
            }
        }
        Ok(Bag {
            id,
            label,
            instances,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.instances[0].len()
    }
}

/// An ordered collection of bags sharing one dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub d: usize,
    pub bags: Vec<Bag>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, bags: Vec<Bag>) -> Result<Self> {
        let name = name.into();
        let Some(first) = bags.first() else {
            return Err(Error::invalid(format!("dataset {name} has no bags")));
        };
        let d = first.dim();
        let mut seen = HashSet::with_capacity(bags.len());
        for bag in &bags {
            if bag.is_empty() {
                return Err(Error::invalid(format!("bag {} has no instances", bag.id)));
            }
            if bag.dim() != d || bag.instances.iter().any(|x| x.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: bag.dim(),
                });
            }
            if !seen.insert(bag.id.as_str()) {
                return Err(Error::invalid(format!("duplicate bag id {}", bag.id)));
            }
        }
        Ok(Dataset { name, d, bags })
    }

    pub fn n_bags(&self) -> usize {
        self.bags.len()
    }

    pub fn n_instances(&self) -> usize {
        self.bags.iter().map(Bag::len).sum()
    }

    pub fn n_positive(&self) -> usize {
        self.bags.iter().filter(|b| b.label).count()
    }

    pub fn n_negative(&self) -> usize {
        self.n_bags() - self.n_positive()
    }

    pub fn has_both_classes(&self) -> bool {
        self.n_positive() > 0 && self.n_negative() > 0
    }

    pub fn require_both_classes(&self) -> Result<()> {
        if self.n_positive() == 0 {
            Err(Error::SingleClass("no positive bags"))
        } else if self.n_negative() == 0 {
            Err(Error::SingleClass("no negative bags"))
        } else {
            Ok(())
        }
    }

    pub fn bag_ids(&self) -> Vec<String> {
        self.bags.iter().map(|b| b.id.clone()).collect()
    }

    pub fn bag(&self, id: &str) -> Option<&Bag> {
        self.bags.iter().find(|b| b.id == id)
    }

    /// All instances in bag order, then row order.
    pub fn instances(&self) -> impl Iterator<Item = &Instance> {
        self.bags.iter().flat_map(|b| b.instances.iter())
    }

    /// The bags named by `ids`, in the order they appear in `self`.
    pub fn subset(&self, ids: &[String]) -> Result<Dataset> {
        let wanted: HashSet<&str> = ids.iter().map(String::as_str).collect();
        if wanted.len() != ids.len() {
            return Err(Error::invalid("subset ids contain duplicates"));
        }
        let bags: Vec<Bag> = self
            .bags
            .iter()
            .filter(|b| wanted.contains(b.id.as_str()))
            .cloned()
            .collect();
        if bags.len() != wanted.len() {
            let missing: Vec<&str> = ids
                .iter()
                .map(String::as_str)
                .filter(|id| self.bag(id).is_none())
                .collect();
            return Err(Error::invalid(format!("unknown bag ids: {}", missing.join(","))));
        }
        Dataset::new(self.name.clone(), bags)
    }

    /// Range of instances per bag, as `(min, max)`.
    pub fn bag_size_range(&self) -> (usize, usize) {
        let sizes = self.bags.iter().map(Bag::len);
        let min = sizes.clone().min().unwrap_or(0);
        let max = sizes.max().unwrap_or(0);
        (min, max)
    }
}

/// A partition of a dataset's bags into train and test sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_bag_ids: Vec<String>,
    pub test_bag_ids: Vec<String>,
    pub seed: u64,
}

impl SplitSpec {
    /// Stratified random split by bag: `round(test_fraction * n_c)` bags of
    /// each class go to the test side, at least one per class, leaving at
    /// least one per class for training.
    pub fn random(dataset: &Dataset, test_fraction: f64, seed: u64) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::config(format!(
                "test fraction must lie in (0, 1), got {test_fraction}"
            )));
        }
        dataset.require_both_classes()?;
        let mut rng = seed::rng(seed);
        let mut test = HashSet::new();
        for class in [true, false] {
            let mut ids: Vec<&str> = dataset
                .bags
                .iter()
                .filter(|b| b.label == class)
                .map(|b| b.id.as_str())
                .collect();
            if ids.len() < 2 {
                return Err(Error::invalid(format!(
                    "need at least two {} bags to split",
                    if class { "positive" } else { "negative" }
                )));
            }
            rand::seq::SliceRandom::shuffle(ids.as_mut_slice(), &mut rng);
            let k = ((test_fraction * ids.len() as f64).round() as usize).clamp(1, ids.len() - 1);
            test.extend(ids.into_iter().take(k));
        }
        let (test_bag_ids, train_bag_ids): (Vec<String>, Vec<String>) = dataset
            .bags
            .iter()
            .map(|b| b.id.clone())
            .partition(|id| test.contains(id.as_str()));
        Ok(SplitSpec {
            train_bag_ids,
            test_bag_ids,
            seed,
        })
    }

    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        if self.train_bag_ids.is_empty() || self.test_bag_ids.is_empty() {
            return Err(Error::config("train and test sets must both be non-empty"));
        }
        let train: HashSet<&str> = self.train_bag_ids.iter().map(String::as_str).collect();
        if let Some(id) = self.test_bag_ids.iter().find(|id| train.contains(id.as_str())) {
            return Err(Error::config(format!("bag {id} is in both train and test")));
        }
        for id in self.train_bag_ids.iter().chain(&self.test_bag_ids) {
            if dataset.bag(id).is_none() {
                return Err(Error::config(format!("split names unknown bag {id}")));
            }
        }
        Ok(())
    }

    /// `(train, test)` datasets.
    pub fn apply(&self, dataset: &Dataset) -> Result<(Dataset, Dataset)> {
        self.validate(dataset)?;
        Ok((
            dataset.subset(&self.train_bag_ids)?,
            dataset.subset(&self.test_bag_ids)?,
        ))
    }
}
