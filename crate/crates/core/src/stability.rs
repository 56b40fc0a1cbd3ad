//! Unsupervised instance-label stability between classifier replicates.
//!
//! Two labelings `z`, `z'` of the same test instances are compared through
//! their agreement counts `n00, n01, n10, n11`:
//!
//! - agreement `S = (n00 + n11) / (n00 + n01 + n10 + n11)`
//! - positive agreement `S+ = n11 / (n01 + n10 + n11)`, the Jaccard index of
//!   the positive sets. When both labelings are all-negative the denominator
//!   is zero and `S+` is defined as 1; such pairs are counted as degenerate.
//!
//! Nothing here takes true instance labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One replicate's binary labels over a fixed test-instance ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceLabeling {
    pub replicate: usize,
    pub labels: Vec<u8>,
}

impl InstanceLabeling {
    pub fn new(replicate: usize, labels: Vec<u8>) -> Result<Self> {
        check_binary(&labels)?;
        Ok(InstanceLabeling { replicate, labels })
    }

    pub fn from_bools(replicate: usize, labels: &[bool]) -> Self {
        InstanceLabeling {
            replicate,
            labels: labels.iter().map(|&b| b as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementCounts {
    pub n00: usize,
    pub n01: usize,
    pub n10: usize,
    pub n11: usize,
}

impl AgreementCounts {
    pub fn total(&self) -> usize {
        self.n00 + self.n01 + self.n10 + self.n11
    }

    pub fn agreement(&self) -> f64 {
        (self.n00 + self.n11) as f64 / self.total() as f64
    }

    /// `S+`, or 1 when no instance is positive in either labeling.
    pub fn positive_agreement(&self) -> f64 {
        let denom = self.n01 + self.n10 + self.n11;
        if denom == 0 {
            1.0
        } else {
            self.n11 as f64 / denom as f64
        }
    }

    /// True when `S+` fell back to the all-negative convention.
    pub fn is_degenerate(&self) -> bool {
        self.n01 + self.n10 + self.n11 == 0
    }
}

fn check_binary(z: &[u8]) -> Result<()> {
    match z.iter().position(|&v| v > 1) {
        Some(position) => Err(Error::NonBinary {
            position,
            value: z[position],
        }),
        None => Ok(()),
    }
}

pub fn count_agreements(z: &[u8], z2: &[u8]) -> Result<AgreementCounts> {
    if z.len() != z2.len() {
        return Err(Error::LengthMismatch {
            left: z.len(),
            right: z2.len(),
        });
    }
    if z.is_empty() {
        return Err(Error::invalid("labelings are empty"));
    }
    check_binary(z)?;
    check_binary(z2)?;
    let mut c = [0usize; 4];
    for (&a, &b) in z.iter().zip(z2) {
        c[(a as usize) << 1 | b as usize] += 1;
    }
    Ok(AgreementCounts {
        n00: c[0],
        n01: c[1],
        n10: c[2],
        n11: c[3],
    })
}

/// Agreement fraction `S`.
pub fn agreement(z: &[u8], z2: &[u8]) -> Result<f64> {
    count_agreements(z, z2).map(|c| c.agreement())
}

/// Positive agreement `S+` (1 for two all-negative labelings).
pub fn positive_agreement(z: &[u8], z2: &[u8]) -> Result<f64> {
    count_agreements(z, z2).map(|c| c.positive_agreement())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "S")]
    Agreement,
    #[serde(rename = "S+")]
    PositiveAgreement,
}

impl Measure {
    pub fn of(&self, c: &AgreementCounts) -> f64 {
        match self {
            Measure::Agreement => c.agreement(),
            Measure::PositiveAgreement => c.positive_agreement(),
        }
    }
}

/// Symmetric `R x R` matrix of pairwise stability with unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityMatrix {
    pub measure: Measure,
    /// Row-major.
    pub values: Vec<Vec<f64>>,
    /// Number of upper-triangle pairs that used the all-negative `S+` convention.
    pub degenerate_pairs: usize,
}

impl StabilityMatrix {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// Strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let r = self.size();
        (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .map(|(i, j)| self.values[i][j])
            .collect()
    }
}

pub fn pairwise_matrix(labelings: &[InstanceLabeling], measure: Measure) -> Result<StabilityMatrix> {
    let r = labelings.len();
    if r < 2 {
        return Err(Error::invalid(format!("need at least 2 labelings, got {r}")));
    }
    let mut values = vec![vec![1.0; r]; r];
    let mut degenerate_pairs = 0;
    for i in 0..r {
        for j in i + 1..r {
            let c = count_agreements(&labelings[i].labels, &labelings[j].labels)?;
            let v = measure.of(&c);
            if c.is_degenerate() {
                degenerate_pairs += 1;
            }
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(StabilityMatrix {
        measure,
        values,
        degenerate_pairs,
    })
}

/// Mean of the `R(R-1)/2` strictly-upper-triangle entries.
pub fn mean_pairwise(matrix: &StabilityMatrix) -> Result<f64> {
    let upper = matrix.upper_triangle();
    if upper.is_empty() {
        return Err(Error::invalid("matrix has no off-diagonal entries"));
    }
    Ok(upper.iter().sum::<f64>() / upper.len() as f64)
}

/// Pearson correlation of two equally sized samples, `None` if either is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

/// Correlation between the upper triangles of an `S` and an `S+` matrix.
pub fn matrix_correlation(s: &StabilityMatrix, s_plus: &StabilityMatrix) -> Option<f64> {
    pearson(&s.upper_triangle(), &s_plus.upper_triangle())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positiveness {
    /// Per instance: how many replicates labeled it positive.
    pub counts: Vec<usize>,
    /// `histogram[c]` = number of instances with count `c`, for `c` in `0..=R`.
    pub histogram: Vec<usize>,
}

pub fn positiveness_histogram(labelings: &[InstanceLabeling]) -> Result<Positiveness> {
    let Some(first) = labelings.first() else {
        return Err(Error::invalid("need at least one labeling"));
    };
    let n = first.len();
    let mut counts = vec![0usize; n];
    for l in labelings {
        if l.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: l.len(),
            });
        }
        check_binary(&l.labels)?;
        for (c, &v) in counts.iter_mut().zip(&l.labels) {
            *c += v as usize;
        }
    }
    let mut histogram = vec![0usize; labelings.len() + 1];
    for &c in &counts {
        histogram[c] += 1;
    }
    Ok(Positiveness { counts, histogram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lab(r: usize, v: &[u8]) -> InstanceLabeling {
        InstanceLabeling::new(r, v.to_vec()).unwrap()
    }

    #[test]
    fn counts_examples() {
        let c = count_agreements(&[1, 0, 1], &[1, 1, 0]).unwrap();
        assert_eq!((c.n00, c.n01, c.n10, c.n11), (0, 1, 1, 1));
        let c = count_agreements(&[0, 0], &[0, 0]).unwrap();
        assert_eq!((c.n00, c.n01, c.n10, c.n11), (2, 0, 0, 0));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(agreement(&[1, 0, 1], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(agreement(&[1, 0, 1], &[1, 1, 0]).unwrap(), 1.0 / 3.0);
        assert_eq!(agreement(&[0, 0, 0, 0], &[1, 1, 1, 1]).unwrap(), 0.0);
        assert_eq!(positive_agreement(&[1, 0, 1], &[1, 1, 0]).unwrap(), 1.0 / 3.0);
        assert_eq!(positive_agreement(&[1, 1, 0], &[1, 0, 0]).unwrap(), 0.5);
        let c = count_agreements(&[0, 0, 0], &[0, 0, 0]).unwrap();
        assert_eq!(c.positive_agreement(), 1.0);
        assert!(c.is_degenerate());
    }

    #[test]
    fn errors() {
        assert!(matches!(agreement(&[1, 0], &[1]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            agreement(&[1, 2], &[1, 0]),
            Err(Error::NonBinary { position: 1, value: 2 })
        ));
        assert!(agreement(&[], &[]).is_err());
        assert!(InstanceLabeling::new(0, vec![0, 3]).is_err());
        assert!(pairwise_matrix(&[lab(0, &[1])], Measure::Agreement).is_err());
        assert!(positiveness_histogram(&[lab(0, &[1]), lab(1, &[1, 0])]).is_err());
    }

    #[test]
    fn matrix_examples() {
        let ls = [lab(0, &[1, 0]), lab(1, &[1, 1]), lab(2, &[0, 0])];
        let m = pairwise_matrix(&ls, Measure::Agreement).unwrap();
        assert_eq!(m.values[0][1], 0.5);
        assert_eq!(m.values[0][2], 0.5);
        assert_eq!(m.values[1][2], 0.0);
        assert_eq!(m.values[2][1], 0.0);
        assert!((0..3).all(|i| m.values[i][i] == 1.0));
        assert!((mean_pairwise(&m).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let same = vec![lab(0, &[1, 0, 1]); 4];
        let m = pairwise_matrix(&same, Measure::PositiveAgreement).unwrap();
        assert!(m.values.iter().flatten().all(|&v| v == 1.0));
        assert_eq!(mean_pairwise(&m).unwrap(), 1.0);

        let pair = [lab(0, &[1, 1, 0, 0, 1]), lab(1, &[1, 0, 0, 1, 1])];
        let m = pairwise_matrix(&pair, Measure::Agreement).unwrap();
        assert_eq!(m.values[0][1], agreement(&pair[0].labels, &pair[1].labels).unwrap());
        assert!((mean_pairwise(&m).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn histogram_examples() {
        let p = positiveness_histogram(&[lab(0, &[1, 0]), lab(1, &[0, 0])]).unwrap();
        assert_eq!(p.counts, vec![1, 0]);
        assert_eq!(p.histogram, vec![1, 1, 0]);
        let same = vec![lab(0, &[1, 0, 0, 1, 1]); 10];
        let p = positiveness_histogram(&same).unwrap();
        assert_eq!(p.histogram[0], 2);
        assert_eq!(p.histogram[10], 3);
        assert_eq!(p.histogram[1..10].iter().sum::<usize>(), 0);
    }

    #[test]
    fn degenerate_pairs_counted() {
        let ls = [lab(0, &[0, 0]), lab(1, &[0, 0]), lab(2, &[1, 0])];
        let m = pairwise_matrix(&ls, Measure::PositiveAgreement).unwrap();
        assert_eq!(m.degenerate_pairs, 1);
        assert_eq!(m.values[0][1], 1.0);
        assert_eq!(m.values[0][2], 0.0);
    }

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(pearson(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    fn pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (1usize..64).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..2, n),
                proptest::collection::vec(0u8..2, n),
            )
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in pair()) {
            let s = agreement(&a, &b).unwrap();
            let sp = positive_agreement(&a, &b).unwrap();
            prop_assert_eq!(s, agreement(&b, &a).unwrap());
            prop_assert_eq!(sp, positive_agreement(&b, &a).unwrap());
            prop_assert!((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&sp));
            prop_assert!(s >= sp);
            prop_assert_eq!(s == 1.0, a == b);
        }

        #[test]
        fn flipping_toward_agreement((a, mut b) in pair(), pick in any::<prop::sample::Index>()) {
            let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            prop_assume!(!diff.is_empty());
            let i = diff[pick.index(diff.len())];
            let (s0, sp0) = (agreement(&a, &b).unwrap(), positive_agreement(&a, &b).unwrap());
            b[i] = a[i];
            prop_assert!(agreement(&a, &b).unwrap() > s0);
            prop_assert!(positive_agreement(&a, &b).unwrap() >= sp0);
        }

        #[test]
        fn histogram_conserves_instances(rows in proptest::collection::vec(proptest::collection::vec(0u8..2, 7), 1..12)) {
            let ls: Vec<InstanceLabeling> = rows.into_iter().enumerate().map(|(r, v)| lab(r, &v)).collect();
            let p = positiveness_histogram(&ls).unwrap();
            prop_assert_eq!(p.histogram.iter().sum::<usize>(), 7);
            prop_assert_eq!(p.histogram.len(), ls.len() + 1);
        }
    }
}
