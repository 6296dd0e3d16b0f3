//! Fairness/goodness fixed point and edge-weight prediction.
//!
//! Goodness of `v` is the fairness-weighted mean of its incoming ratings;
//! fairness of `u` is one minus half the mean absolute error of its outgoing
//! ratings against the goodness of the rated nodes. Nodes nobody rates have
//! goodness 1 and nodes that rate nobody have fairness 1.
//!
//! Each sweep runs a full goodness pass from the previous fairness vector and
//! then a full fairness pass from the new goodness vector. Starting from all
//! ones, after `t` sweeps fairness is within `2^-t` of the limit and goodness
//! within `2^-(t-1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wsn::{NodeId, Wsn};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgaConfig {
    pub max_iterations: usize,
    /// Stop once no value moved by this much in the last sweep.
    pub residual_tolerance: f64,
}

impl Default for FgaConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            residual_tolerance: 1e-8,
        }
    }
}

impl FgaConfig {
    pub fn new(max_iterations: usize, residual_tolerance: f64) -> Result<Self> {
        if max_iterations == 0 || residual_tolerance.is_nan() || residual_tolerance <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "max_iterations must be >= 1 and residual_tolerance > 0 (got {max_iterations}, {residual_tolerance})"
            )));
        }
        Ok(Self {
            max_iterations,
            residual_tolerance,
        })
    }

    /// Tolerance used when results are compared at 1e-9: the residual bounds
    /// the distance to the fixed point, so it must sit well below that.
    pub fn precise() -> Self {
        Self {
            max_iterations: 1000,
            residual_tolerance: 1e-13,
        }
    }

    /// A config whose sweep budget alone guarantees every value is within
    /// `epsilon` of the fixed point from a cold start.
    pub fn for_accuracy(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "accuracy target must lie in (0, 1), got {epsilon}"
            )));
        }
        Self::new(sweeps_for_accuracy(epsilon), epsilon)
    }
}

/// Smallest `t` with `2^-(t-1) <= epsilon`.
pub fn sweeps_for_accuracy(epsilon: f64) -> usize {
    ((1.0 / epsilon).log2().ceil() as usize + 1).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgaScores {
    pub fairness: Vec<f64>,
    pub goodness: Vec<f64>,
    pub iterations_run: usize,
    /// Largest change of any value during the last sweep.
    pub max_residual: f64,
}

impl FgaScores {
    pub fn len(&self) -> usize {
        self.fairness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fairness.is_empty()
    }

    pub fn fairness(&self, v: NodeId) -> f64 {
        self.fairness[v.index()]
    }

    pub fn goodness(&self, v: NodeId) -> f64 {
        self.goodness[v.index()]
    }

    pub fn converged(&self, cfg: &FgaConfig) -> bool {
        self.max_residual < cfg.residual_tolerance
    }
}

/// One goodness pass: `out[v]` from the fairness vector.
pub fn goodness_pass(g: &Wsn, fairness: &[f64], out: &mut [f64]) {
    for v in g.nodes() {
        let preds = g.predecessors(v);
        out[v.index()] = if preds.is_empty() {
            1.0
        } else {
            let sum: f64 = preds.iter().map(|&(u, w)| fairness[u.index()] * w).sum();
            (sum / preds.len() as f64).clamp(-1.0, 1.0)
        };
    }
}

/// One fairness pass: `out[u]` from the goodness vector.
pub fn fairness_pass(g: &Wsn, goodness: &[f64], out: &mut [f64]) {
    for u in g.nodes() {
        let succs = g.successors(u);
        out[u.index()] = if succs.is_empty() {
            1.0
        } else {
            let err: f64 = succs
                .iter()
                .map(|&(v, w)| (w - goodness[v.index()]).abs())
                .sum();
            (1.0 - err / (2.0 * succs.len() as f64)).clamp(0.0, 1.0)
        };
    }
}

/// The iterates `(f⁽ᵗ⁾, g⁽ᵗ⁾)` for `t = 1, 2, ...`, starting from the given
/// vectors (all ones for a cold start).
pub struct Sweeps<'a> {
    graph: &'a Wsn,
    fairness: Vec<f64>,
    goodness: Vec<f64>,
    next_goodness: Vec<f64>,
    next_fairness: Vec<f64>,
}

impl<'a> Sweeps<'a> {
    pub fn cold(graph: &'a Wsn) -> Self {
        let n = graph.node_count();
        Self::from_state(graph, vec![1.0; n], vec![1.0; n])
    }

    pub fn from_state(graph: &'a Wsn, fairness: Vec<f64>, goodness: Vec<f64>) -> Self {
        let n = graph.node_count();
        debug_assert!(fairness.len() == n && goodness.len() == n);
        Self {
            graph,
            fairness,
            goodness,
            next_goodness: vec![0.0; n],
            next_fairness: vec![0.0; n],
        }
    }

    /// Runs one sweep and returns the largest change.
    pub fn step(&mut self) -> f64 {
        goodness_pass(self.graph, &self.fairness, &mut self.next_goodness);
        fairness_pass(self.graph, &self.next_goodness, &mut self.next_fairness);
        let residual = max_abs_diff(&self.goodness, &self.next_goodness)
            .max(max_abs_diff(&self.fairness, &self.next_fairness));
        std::mem::swap(&mut self.goodness, &mut self.next_goodness);
        std::mem::swap(&mut self.fairness, &mut self.next_fairness);
        residual
    }

    pub fn fairness(&self) -> &[f64] {
        &self.fairness
    }

    pub fn goodness(&self) -> &[f64] {
        &self.goodness
    }

    fn run(mut self, cfg: &FgaConfig) -> FgaScores {
        let mut iterations_run = 0;
        let mut max_residual = 0.0;
        if self.graph.node_count() > 0 {
            while iterations_run < cfg.max_iterations {
                max_residual = self.step();
                iterations_run += 1;
                if max_residual < cfg.residual_tolerance {
                    break;
                }
            }
        }
        FgaScores {
            fairness: self.fairness,
            goodness: self.goodness,
            iterations_run,
            max_residual,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Iterates from `f = g = 1` until the residual drops below tolerance or the
/// sweep budget runs out. Non-convergence shows up as `max_residual`.
pub fn compute_fga(g: &Wsn, cfg: &FgaConfig) -> FgaScores {
    Sweeps::cold(g).run(cfg)
}

/// Re-solves after edge additions, weight updates or appended nodes, starting
/// from previously computed scores. New nodes start at `f = g = 1`.
pub fn recompute_after(g: &Wsn, warm: &FgaScores, cfg: &FgaConfig) -> Result<FgaScores> {
    let n = g.node_count();
    if warm.len() > n || warm.goodness.len() != warm.fairness.len() {
        return Err(Error::NodeSetMismatch {
            warm: warm.len(),
            graph: n,
        });
    }
    let mut fairness = warm.fairness.clone();
    let mut goodness = warm.goodness.clone();
    fairness.resize(n, 1.0);
    goodness.resize(n, 1.0);
    Ok(Sweeps::from_state(g, fairness, goodness).run(cfg))
}

/// Predicted rating of `v` by `u`: `f(u) * g(v)`.
pub fn predict_weight(scores: &FgaScores, u: NodeId, v: NodeId) -> Result<f64> {
    let f = scores
        .fairness
        .get(u.index())
        .ok_or(Error::UnknownNode(u))?;
    let g = scores
        .goodness
        .get(v.index())
        .ok_or(Error::UnknownNode(v))?;
    Ok(f * g)
}
