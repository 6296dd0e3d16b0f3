use serde::{Deserialize, Serialize};

use crate::fga::FgaScores;
use crate::wsn::Wsn;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsThresholds {
    /// Nodes with indegree strictly below this count as small-indegree.
    pub small_indegree: usize,
    pub fair_high: f64,
    pub fair_low: f64,
    pub goodness_nonnegative: f64,
    pub goodness_high: f64,
    pub goodness_low: f64,
}

impl Default for StatsThresholds {
    fn default() -> Self {
        Self {
            small_indegree: 10,
            fair_high: 0.95,
            fair_low: 0.7,
            goodness_nonnegative: 0.0,
            goodness_high: 0.5,
            goodness_low: -0.3,
        }
    }
}

/// Summary statistics of a network and its scores. Fractions are in `[0, 1]`
/// and are 0 for an empty graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub positive_edge_fraction: f64,
    pub small_indegree_fraction: f64,
    pub fair_fraction_high: f64,
    pub fair_fraction_low: f64,
    pub mean_fairness: f64,
    pub goodness_fraction_nonnegative: f64,
    pub goodness_fraction_high: f64,
    pub goodness_fraction_low: f64,
    pub thresholds: StatsThresholds,
}

fn fraction(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Share of nodes with fairness `>= tau`.
pub fn fair_fraction_at(scores: &FgaScores, tau: f64) -> f64 {
    fraction(
        scores.fairness.iter().filter(|&&f| f >= tau).count(),
        scores.len(),
    )
}

pub fn goodness_fraction_ge(scores: &FgaScores, tau: f64) -> f64 {
    fraction(
        scores.goodness.iter().filter(|&&g| g >= tau).count(),
        scores.len(),
    )
}

pub fn goodness_fraction_le(scores: &FgaScores, tau: f64) -> f64 {
    fraction(
        scores.goodness.iter().filter(|&&g| g <= tau).count(),
        scores.len(),
    )
}

pub fn compute_stats(g: &Wsn, scores: &FgaScores, t: &StatsThresholds) -> DatasetStats {
    let n = g.node_count();
    let positive = g.edges().filter(|&(_, _, w)| w > 0.0).count();
    let small = g.nodes().filter(|&v| g.indeg(v) < t.small_indegree).count();
    let mean_fairness = if n == 0 {
        0.0
    } else {
        scores.fairness.iter().sum::<f64>() / n as f64
    };
    DatasetStats {
        node_count: n,
        edge_count: g.edge_count(),
        positive_edge_fraction: fraction(positive, g.edge_count()),
        small_indegree_fraction: fraction(small, n),
        fair_fraction_high: fair_fraction_at(scores, t.fair_high),
        fair_fraction_low: fair_fraction_at(scores, t.fair_low),
        mean_fairness,
        goodness_fraction_nonnegative: goodness_fraction_ge(scores, t.goodness_nonnegative),
        goodness_fraction_high: goodness_fraction_ge(scores, t.goodness_high),
        goodness_fraction_low: goodness_fraction_le(scores, t.goodness_low),
        thresholds: *t,
    }
}
