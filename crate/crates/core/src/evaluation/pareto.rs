use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A classifier summarized by its mean bag AUC and mean stability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub id: String,
    pub auc: f64,
    pub stability: f64,
}

impl ParetoPoint {
    pub fn new(id: impl Into<String>, auc: f64, stability: f64) -> Self {
        ParetoPoint {
            id: id.into(),
            auc,
            stability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoResult {
    pub points: Vec<ParetoPoint>,
    /// Indices into `points` of the non-dominated points, ascending.
    pub frontier: Vec<usize>,
}

impl ParetoResult {
    pub fn frontier_points(&self) -> Vec<ParetoPoint> {
        self.frontier.iter().map(|&i| self.points[i].clone()).collect()
    }

    pub fn is_on_frontier(&self, index: usize) -> bool {
        self.frontier.binary_search(&index).is_ok()
    }
}

/// `p` dominates `q` when it is no worse in both coordinates and better in one.
pub fn dominates(p: &ParetoPoint, q: &ParetoPoint) -> bool {
    p.auc >= q.auc && p.stability >= q.stability && (p.auc > q.auc || p.stability > q.stability)
}

fn check(points: &[ParetoPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("no points given"));
    }
    if let Some(p) = points.iter().find(|p| p.auc.is_nan() || p.stability.is_nan()) {
        return Err(Error::invalid(format!("point {} has a NaN coordinate", p.id)));
    }
    Ok(())
}

/// Non-dominated subset with both coordinates maximized. Identical points are
/// all kept. Runs in O(n log n).
pub fn pareto_frontier(points: &[ParetoPoint]) -> Result<ParetoResult> {
    check(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[b]
            .auc
            .total_cmp(&points[a].auc)
            .then(points[b].stability.total_cmp(&points[a].stability))
    });
    let mut frontier = Vec::new();
    // Best stability among points with strictly larger AUC.
    let mut best_higher = f64::NEG_INFINITY;
    let mut i = 0;
    while i < order.len() {
        let group_auc = points[order[i]].auc;
        let group_max = points[order[i]].stability;
        let mut j = i;
        while j < order.len() && points[order[j]].auc == group_auc {
            let p = &points[order[j]];
            if p.stability == group_max && p.stability > best_higher {
                frontier.push(order[j]);
            }
            j += 1;
        }
        best_higher = best_higher.max(group_max);
        i = j;
    }
    frontier.sort_unstable();
    Ok(ParetoResult {
        points: points.to_vec(),
        frontier,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Auc,
    Stability,
    Frontier,
}

/// Points that are best under `criterion`; ties all returned in input order.
pub fn best_by(points: &[ParetoPoint], criterion: Criterion) -> Result<Vec<ParetoPoint>> {
    check(points)?;
    let pick = |key: fn(&ParetoPoint) -> f64| {
        let max = points.iter().map(key).fold(f64::NEG_INFINITY, f64::max);
        points.iter().filter(|p| key(p) == max).cloned().collect()
    };
    Ok(match criterion {
        Criterion::Auc => pick(|p| p.auc),
        Criterion::Stability => pick(|p| p.stability),
        Criterion::Frontier => pareto_frontier(points)?.frontier_points(),
    })
}
