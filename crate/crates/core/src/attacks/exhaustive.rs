use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_attackers, place, AttackMove, AttackOptions, AttackOutcome};
use crate::error::{Error, Result};
use crate::fga::{compute_fga, FgaScores};
use crate::wsn::{NodeId, Wsn};

/// Largest number of move sets [`solve_exhaustive`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Decrease,
    Increase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Targets {
    /// Goodness of each node must pass the threshold.
    Nodes(Vec<NodeId>),
    /// Predicted weight `f(u)·g(v)` of each unlinked pair must pass the
    /// threshold.
    Pairs(Vec<(NodeId, NodeId)>),
}

/// Attackers may each rate nodes of `intermediaries`; at most `budget`
/// ratings in total, one per (attacker, rated) pair.
#[derive(Clone, Debug)]
pub struct AttackProblem {
    pub graph: Wsn,
    pub attackers: Vec<NodeId>,
    pub targets: Targets,
    pub intermediaries: Vec<NodeId>,
    pub budget: usize,
    pub threshold: f64,
    pub direction: Direction,
}

impl AttackProblem {
    fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidParameters(format!(
                "threshold {} outside [-1, 1]",
                self.threshold
            )));
        }
        let target_nodes: Vec<NodeId> = match &self.targets {
            Targets::Nodes(t) => t.clone(),
            Targets::Pairs(p) => {
                for &(u, v) in p {
                    if !self.graph.contains(u) || !self.graph.contains(v) {
                        return Err(Error::UnknownNode(if self.graph.contains(u) {
                            v
                        } else {
                            u
                        }));
                    }
                    if u == v || self.graph.has_edge(u, v) {
                        return Err(Error::InvalidParameters(format!(
                            "target pair ({u}, {v}) must be distinct and unlinked"
                        )));
                    }
                }
                p.iter().flat_map(|&(u, v)| [u, v]).collect()
            }
        };
        check_attackers(&self.graph, &self.attackers, &target_nodes)?;
        for &i in &self.intermediaries {
            if !self.graph.contains(i) {
                return Err(Error::UnknownNode(i));
            }
        }
        Ok(())
    }

    /// The quantity that must pass the threshold for every target: the
    /// largest goodness or prediction when decreasing, the smallest when
    /// increasing.
    pub fn objective(&self, s: &FgaScores) -> f64 {
        let values: Vec<f64> = match &self.targets {
            Targets::Nodes(t) => t.iter().map(|&v| s.goodness(v)).collect(),
            Targets::Pairs(p) => p
                .iter()
                .map(|&(u, v)| s.fairness(u) * s.goodness(v))
                .collect(),
        };
        match self.direction {
            Direction::Decrease => values.into_iter().fold(f64::NEG_INFINITY, f64::max),
            Direction::Increase => values.into_iter().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn meets_threshold(&self, objective: f64) -> bool {
        match self.direction {
            Direction::Decrease => objective < self.threshold,
            Direction::Increase => objective > self.threshold,
        }
    }

    fn better(&self, a: f64, b: f64) -> bool {
        match self.direction {
            Direction::Decrease => a < b,
            Direction::Increase => a > b,
        }
    }

    fn target_nodes(&self) -> Vec<NodeId> {
        match &self.targets {
            Targets::Nodes(t) => t.clone(),
            Targets::Pairs(p) => p.iter().map(|&(_, v)| v).collect(),
        }
    }

    fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for &a in &self.attackers {
            for &i in &self.intermediaries {
                if a != i {
                    out.push((a, i));
                }
            }
        }
        out
    }
}

/// Number of move sets of size at most `budget` drawn from `pairs`
/// (attacker, rated) pairs, each with one of `grid` weights.
pub fn move_set_count(pairs: usize, grid: usize, budget: usize) -> u128 {
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    let mut weights: u128 = 1;
    for j in 0..=budget.min(pairs) {
        if j > 0 {
            choose = choose * (pairs - j + 1) as u128 / j as u128;
            weights = weights.saturating_mul(grid as u128);
        }
        total = total.saturating_add(choose.saturating_mul(weights));
    }
    total
}

#[derive(Clone, Debug)]
pub struct ExhaustiveResult {
    /// The move set with the best objective, earliest in enumeration order
    /// on ties. Its `delta_goodness` refers to the node targets, or to the
    /// rated side of each target pair.
    pub best: AttackOutcome,
    pub objective: f64,
    pub feasible: bool,
    pub move_sets_evaluated: usize,
}

fn enumerate(pairs: usize, grid: usize, budget: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        start: usize,
        pairs: usize,
        grid: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for p in start..pairs {
            for w in 0..grid {
                cur.push((p, w));
                rec(p + 1, pairs, grid, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, pairs, grid, budget, &mut Vec::new(), &mut out);
    out
}

/// Scores every move set of size at most the budget from scratch and returns
/// the best one, or reports that none meets the threshold.
pub fn solve_exhaustive(
    p: &AttackProblem,
    weight_grid: &[f64],
    opts: &AttackOptions,
) -> Result<ExhaustiveResult> {
    p.validate()?;
    if weight_grid.is_empty() || weight_grid.iter().any(|w| !(-1.0..=1.0).contains(w)) {
        return Err(Error::InvalidParameters(
            "weight grid must be non-empty and within [-1, 1]".into(),
        ));
    }
    let pairs = p.pairs();
    let count = move_set_count(pairs.len(), weight_grid.len(), p.budget);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::InstanceTooLarge {
            candidates: count,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let sets = enumerate(pairs.len(), weight_grid.len(), p.budget);
    let build = |set: &[(usize, usize)]| -> (Wsn, Vec<AttackMove>) {
        let mut g = p.graph.clone();
        let moves = set
            .iter()
            .map(|&(pi, wi)| {
                let (a, i) = pairs[pi];
                place(&mut g, a, i, weight_grid[wi]).expect("validated move")
            })
            .collect();
        (g, moves)
    };
    let objectives: Vec<f64> = sets
        .par_iter()
        .map(|set| p.objective(&compute_fga(&build(set).0, &opts.fga)))
        .collect();

    let mut best = 0;
    for (i, &o) in objectives.iter().enumerate() {
        if p.better(o, objectives[best]) {
            best = i;
        }
    }
    let (graph, moves) = build(&sets[best]);
    let before = compute_fga(&p.graph, &opts.fga);
    let after = compute_fga(&graph, &opts.fga);
    let objective = objectives[best];
    Ok(ExhaustiveResult {
        best: AttackOutcome::new(moves, graph, before, after, p.target_nodes()),
        objective,
        feasible: p.meets_threshold(objective),
        move_sets_evaluated: sets.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::complete_positive;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn counts_match_enumeration() {
        for (pairs, grid, k) in [(0, 2, 3), (3, 2, 0), (4, 2, 2), (5, 3, 3), (2, 2, 5)] {
            assert_eq!(
                move_set_count(pairs, grid, k),
                enumerate(pairs, grid, k).len() as u128
            );
        }
        assert_eq!(move_set_count(4, 2, 1), 1 + 8);
    }

    #[test]
    fn direct_flip_is_feasible() {
        // node 1 rates node 0 with +0.2; one −1 rating from a fresh node flips it
        let mut g = Wsn::with_nodes(3);
        g.add_edge(n(1), n(0), 0.2).unwrap();
        let p = AttackProblem {
            graph: g,
            attackers: vec![n(2)],
            targets: Targets::Nodes(vec![n(0)]),
            intermediaries: vec![n(0)],
            budget: 1,
            threshold: 0.0,
            direction: Direction::Decrease,
        };
        let r = solve_exhaustive(&p, &[-1.0, 1.0], &AttackOptions::precise()).unwrap();
        assert!(r.feasible);
        assert_eq!(r.best.moves.len(), 1);
        assert_eq!(r.best.moves[0].weight, -1.0);
        assert!(r.best.scores_after.goodness(n(0)) < 0.0);
        assert_eq!(r.move_sets_evaluated, 3);

        let p0 = AttackProblem { budget: 0, ..p };
        let r = solve_exhaustive(&p0, &[-1.0, 1.0], &AttackOptions::precise()).unwrap();
        assert!(!r.feasible);
        assert!(r.best.moves.is_empty());
    }

    #[test]
    fn pair_targets_and_increase() {
        let g = complete_positive(3).unwrap();
        let mut g = g;
        let x = g.add_node();
        let y = g.add_node();
        let p = AttackProblem {
            graph: g,
            attackers: vec![y],
            targets: Targets::Pairs(vec![(n(0), x)]),
            intermediaries: vec![x],
            budget: 1,
            threshold: 0.5,
            direction: Direction::Decrease,
        };
        let r = solve_exhaustive(&p, &[-1.0, 1.0], &AttackOptions::precise()).unwrap();
        assert!(r.feasible);
        assert!((r.objective + 1.0).abs() < 1e-9);

        let q = AttackProblem {
            direction: Direction::Increase,
            threshold: 0.99,
            ..p.clone()
        };
        let r = solve_exhaustive(&q, &[-1.0, 1.0], &AttackOptions::precise()).unwrap();
        // x is unrated: its goodness already sits at the baseline 1
        assert!(r.feasible);

        let linked = AttackProblem {
            targets: Targets::Pairs(vec![(n(0), n(1))]),
            ..p
        };
        assert!(solve_exhaustive(&linked, &[-1.0], &AttackOptions::default()).is_err());
    }

    #[test]
    fn guard_rejects_large_instances() {
        let g = complete_positive(12).unwrap();
        let mut g = g;
        let attackers: Vec<NodeId> = (0..10).map(|_| g.add_node()).collect();
        let p = AttackProblem {
            graph: g,
            attackers,
            targets: Targets::Nodes(vec![n(0)]),
            intermediaries: (0..12).map(n).collect(),
            budget: 4,
            threshold: 0.0,
            direction: Direction::Decrease,
        };
        assert!(matches!(
            solve_exhaustive(&p, &[-1.0, 1.0], &AttackOptions::default()),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
