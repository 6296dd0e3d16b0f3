//! Attacks on goodness: direct ratings of the target, greedy indirect attacks
//! through the target's raters, their batched variant, mixed attacks, Sybil
//! injection, target/attacker selection and an exhaustive optimum for tiny
//! instances.

mod exhaustive;
mod greedy;
mod select;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fga::{compute_fga, recompute_after, FgaConfig, FgaScores};
use crate::wsn::{MoveKind, NodeId, Wsn};

pub use exhaustive::{
    move_set_count, solve_exhaustive, AttackProblem, Direction, ExhaustiveResult, Targets,
    EXHAUSTIVE_LIMIT,
};
pub use greedy::{
    greedy_candidates, indirect_attack_greedy, indirect_attack_scaled, scaled_batch_len,
    DEFAULT_MAX_EDGES, DEFAULT_SCALE,
};
pub use select::{select_attackers, select_targets, AttackerClass, SelectionCriteria};

/// One rating placed by an attacker.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackMove {
    pub kind: MoveKind,
    pub attacker: NodeId,
    pub rated: NodeId,
    pub weight: f64,
}

/// How scores are recomputed after each committed move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackOptions {
    pub fga: FgaConfig,
    /// Recompute from `f = g = 1` instead of warm-starting from the previous
    /// scores.
    pub cold: bool,
}

impl AttackOptions {
    pub fn precise() -> Self {
        Self {
            fga: FgaConfig::precise(),
            cold: false,
        }
    }

    pub(crate) fn rescore(&self, g: &Wsn, warm: &FgaScores) -> FgaScores {
        if self.cold {
            compute_fga(g, &self.fga)
        } else {
            recompute_after(g, warm, &self.fga).expect("graphs only grow during an attack")
        }
    }
}

#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub moves: Vec<AttackMove>,
    pub graph_after: Wsn,
    pub scores_before: FgaScores,
    pub scores_after: FgaScores,
    pub targets: Vec<NodeId>,
    /// `g_after(t) - g_before(t)` per target.
    pub delta_goodness: Vec<f64>,
    /// Whether each target's goodness went down.
    pub success: Vec<bool>,
    /// Set when a greedy attack ran out of candidate moves before using every
    /// attacker.
    pub exhausted: bool,
}

impl AttackOutcome {
    pub(crate) fn new(
        moves: Vec<AttackMove>,
        graph_after: Wsn,
        scores_before: FgaScores,
        scores_after: FgaScores,
        targets: Vec<NodeId>,
    ) -> Self {
        let delta_goodness: Vec<f64> = targets
            .iter()
            .map(|&t| scores_after.goodness(t) - scores_before.goodness(t))
            .collect();
        let success = delta_goodness.iter().map(|&d| d < 0.0).collect();
        Self {
            moves,
            graph_after,
            scores_before,
            scores_after,
            targets,
            delta_goodness,
            success,
            exhausted: false,
        }
    }

    /// Goodness change of the first target.
    pub fn delta(&self) -> f64 {
        self.delta_goodness.first().copied().unwrap_or(0.0)
    }
}

pub(crate) fn check_attackers(g: &Wsn, attackers: &[NodeId], targets: &[NodeId]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &a in attackers {
        if !g.contains(a) {
            return Err(Error::UnknownNode(a));
        }
        if targets.contains(&a) {
            return Err(Error::TargetIsAttacker(a));
        }
        if !seen.insert(a) {
            return Err(Error::InvalidParameters(format!(
                "attacker {a} listed twice"
            )));
        }
    }
    for &t in targets {
        if !g.contains(t) {
            return Err(Error::UnknownNode(t));
        }
    }
    Ok(())
}

pub(crate) fn place(
    g: &mut Wsn,
    attacker: NodeId,
    rated: NodeId,
    weight: f64,
) -> Result<AttackMove> {
    let kind = g.set_weight(attacker, rated, weight)?;
    Ok(AttackMove {
        kind,
        attacker,
        rated,
        weight,
    })
}

/// Every attacker rates `t` with −1; an existing rating of `t` is overwritten.
pub fn direct_attack(
    g: &Wsn,
    attackers: &[NodeId],
    t: NodeId,
    opts: &AttackOptions,
) -> Result<AttackOutcome> {
    let before = compute_fga(g, &opts.fga);
    direct_attack_from(g, &before, attackers, t, opts)
}

pub(crate) fn direct_attack_from(
    g: &Wsn,
    before: &FgaScores,
    attackers: &[NodeId],
    t: NodeId,
    opts: &AttackOptions,
) -> Result<AttackOutcome> {
    check_attackers(g, attackers, &[t])?;
    let mut graph = g.clone();
    let moves = attackers
        .iter()
        .map(|&a| place(&mut graph, a, t, -1.0))
        .collect::<Result<Vec<_>>>()?;
    let after = if moves.is_empty() {
        before.clone()
    } else {
        opts.rescore(&graph, before)
    };
    Ok(AttackOutcome::new(
        moves,
        graph,
        before.clone(),
        after,
        vec![t],
    ))
}

/// A mixed attack and its split into the direct share `Δ₁` (measured after
/// only the direct moves) and the indirect share `Δ₂ = Δ_S − Δ₁`.
#[derive(Clone, Debug)]
pub struct MixedOutcome {
    pub outcome: AttackOutcome,
    pub delta_direct: f64,
    pub delta_indirect: f64,
    pub delta_total: f64,
}

/// `direct` attackers rate `t` with −1, then `indirect` attackers run the
/// greedy indirect attack on the resulting graph.
pub fn mixed_attack(
    g: &Wsn,
    direct: &[NodeId],
    indirect: &[NodeId],
    t: NodeId,
    opts: &AttackOptions,
) -> Result<MixedOutcome> {
    if let Some(&a) = direct.iter().find(|a| indirect.contains(a)) {
        return Err(Error::OverlappingAttackers(a));
    }
    let all: Vec<NodeId> = direct.iter().chain(indirect).copied().collect();
    check_attackers(g, &all, &[t])?;

    let before = compute_fga(g, &opts.fga);
    let first = direct_attack_from(g, &before, direct, t, opts)?;
    let second = greedy::greedy_from(&first.graph_after, &first.scores_after, indirect, t, opts)?;

    let delta_direct = first.delta();
    let delta_total = second.scores_after.goodness(t) - before.goodness(t);
    let mut moves = first.moves;
    moves.extend(second.moves);
    let exhausted = second.exhausted;
    let mut outcome = AttackOutcome::new(
        moves,
        second.graph_after,
        before,
        second.scores_after,
        vec![t],
    );
    outcome.exhausted = exhausted;
    Ok(MixedOutcome {
        outcome,
        delta_direct,
        delta_indirect: delta_total - delta_direct,
        delta_total,
    })
}

/// A copy of `g` with a fresh node `sybil-*` whose only edge rates `rated`
/// with `w`.
pub fn inject_sybil(g: &Wsn, rated: NodeId, w: f64) -> Result<(Wsn, NodeId)> {
    if !g.contains(rated) {
        return Err(Error::UnknownNode(rated));
    }
    if !(-1.0..=1.0).contains(&w) {
        return Err(Error::WeightOutOfRange(w));
    }
    let mut h = g.clone();
    let s = h.add_labelled_node("sybil-");
    h.add_edge(s, rated, w)?;
    Ok((h, s))
}
