use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{check_attackers, place, AttackMove, AttackOptions, AttackOutcome};
use crate::error::{Error, Result};
use crate::fga::{compute_fga, FgaScores};
use crate::wsn::{NodeId, Wsn};

pub const DEFAULT_SCALE: usize = 5;
pub const DEFAULT_MAX_EDGES: usize = 10;

const WEIGHTS: [f64; 2] = [1.0, -1.0];

/// Nodes an attacker may rate in an indirect attack on `t`: successors of
/// `t`'s raters, other than `t` and the attacker itself.
pub fn greedy_candidates(g: &Wsn, t: NodeId, attacker: NodeId) -> BTreeSet<NodeId> {
    g.predecessors(t)
        .iter()
        .flat_map(|&(n1, _)| g.successors(n1).iter().map(|&(n2, _)| n2))
        .filter(|&n2| n2 != t && n2 != attacker)
        .collect()
}

/// Attackers in descending fairness, ties by id.
pub(crate) fn by_fairness(attackers: &[NodeId], scores: &FgaScores) -> Vec<NodeId> {
    let mut sorted = attackers.to_vec();
    sorted.sort_by(|&a, &b| {
        scores
            .fairness(b)
            .partial_cmp(&scores.fairness(a))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    sorted
}

struct Step {
    rated: NodeId,
    weight: f64,
}

/// The move `(n2, w)` for `attacker` that minimizes the recomputed `g(t)`.
/// Candidates are scanned by `n2` ascending with `+1` before `−1`; a later
/// candidate wins only if it is lower by more than the solver tolerance.
fn best_step(
    g: &Wsn,
    scores: &FgaScores,
    attacker: NodeId,
    t: NodeId,
    opts: &AttackOptions,
) -> Option<Step> {
    let candidates: Vec<(NodeId, f64)> = greedy_candidates(g, t, attacker)
        .into_iter()
        .flat_map(|n2| WEIGHTS.iter().map(move |&w| (n2, w)))
        .collect();
    let values: Vec<f64> = candidates
        .par_iter()
        .map(|&(n2, w)| {
            let mut h = g.clone();
            h.set_weight(attacker, n2, w)
                .expect("candidate is a valid rating");
            opts.rescore(&h, scores).goodness(t)
        })
        .collect();
    let eps = opts.fga.residual_tolerance;
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if v >= b - eps => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| Step {
        rated: candidates[i].0,
        weight: candidates[i].1,
    })
}

/// Each attacker, in descending fairness order, places the single rating of a
/// successor of one of `t`'s raters that lowers `g(t)` most. Stops early,
/// flagging `exhausted`, when an attacker has no candidate.
pub fn indirect_attack_greedy(
    g: &Wsn,
    attackers: &[NodeId],
    t: NodeId,
    opts: &AttackOptions,
) -> Result<AttackOutcome> {
    check_attackers(g, attackers, &[t])?;
    let before = compute_fga(g, &opts.fga);
    greedy_from(g, &before, attackers, t, opts)
}

pub(crate) fn greedy_from(
    g: &Wsn,
    before: &FgaScores,
    attackers: &[NodeId],
    t: NodeId,
    opts: &AttackOptions,
) -> Result<AttackOutcome> {
    let mut graph = g.clone();
    let mut scores = before.clone();
    let mut moves = Vec::new();
    let mut exhausted = false;
    for a in by_fairness(attackers, before) {
        let Some(step) = best_step(&graph, &scores, a, t, opts) else {
            exhausted = true;
            break;
        };
        moves.push(place(&mut graph, a, step.rated, step.weight)?);
        scores = opts.rescore(&graph, &scores);
    }
    let mut out = AttackOutcome::new(moves, graph, before.clone(), scores, vec![t]);
    out.exhausted = exhausted;
    Ok(out)
}

/// Batch size for a scaled pick: `min(scale·indeg(n2), max_edges, remaining)`.
pub fn scaled_batch_len(
    indeg_n2: usize,
    scale: usize,
    max_edges: usize,
    remaining: usize,
) -> usize {
    (scale * indeg_n2).min(max_edges).min(remaining)
}

/// Like the greedy attack, but every pick of `(n2, w)` is copied by a batch of
/// the next attackers in fairness order, sized by [`scaled_batch_len`].
pub fn indirect_attack_scaled(
    g: &Wsn,
    attackers: &[NodeId],
    t: NodeId,
    scale: usize,
    max_edges: usize,
    opts: &AttackOptions,
) -> Result<AttackOutcome> {
    if scale == 0 || max_edges == 0 {
        return Err(Error::InvalidParameters(
            "scale and max_edges must be positive".into(),
        ));
    }
    check_attackers(g, attackers, &[t])?;
    let before = compute_fga(g, &opts.fga);
    let order = by_fairness(attackers, &before);

    let mut graph = g.clone();
    let mut scores = before.clone();
    let mut moves: Vec<AttackMove> = Vec::new();
    let mut exhausted = false;
    let mut i = 0;
    while i < order.len() {
        let Some(step) = best_step(&graph, &scores, order[i], t, opts) else {
            exhausted = true;
            break;
        };
        let len = scaled_batch_len(graph.indeg(step.rated), scale, max_edges, order.len() - i);
        for &a in &order[i..i + len] {
            if a != step.rated {
                moves.push(place(&mut graph, a, step.rated, step.weight)?);
            }
        }
        i += len;
        scores = opts.rescore(&graph, &scores);
    }
    let mut out = AttackOutcome::new(moves, graph, before, scores, vec![t]);
    out.exhausted = exhausted;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::FgaConfig;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    /// 2→1, 3→1, 2→4 plus an unconnected attacker 5 (ids shifted down by one).
    fn example_network() -> Wsn {
        let mut g = Wsn::with_nodes(5);
        g.add_edge(n(1), n(0), 1.0).unwrap();
        g.add_edge(n(2), n(0), 1.0).unwrap();
        g.add_edge(n(1), n(3), 1.0).unwrap();
        g
    }

    #[test]
    fn greedy_picks_the_shared_successor() {
        let g = example_network();
        let out = indirect_attack_greedy(&g, &[n(4)], n(0), &AttackOptions::precise()).unwrap();
        assert_eq!(out.moves.len(), 1);
        assert_eq!(out.moves[0].rated, n(3));
        assert_eq!(out.moves[0].weight, -1.0);
        assert!(out.delta() < 0.0);
        assert!(out.scores_after.fairness(n(1)) < 1.0);
        assert!(!out.exhausted);
    }

    #[test]
    fn greedy_without_candidates_is_exhausted() {
        let mut g = Wsn::with_nodes(3);
        g.add_edge(n(1), n(0), 1.0).unwrap();
        let out = indirect_attack_greedy(&g, &[n(2)], n(0), &AttackOptions::default()).unwrap();
        assert!(out.moves.is_empty());
        assert!(out.exhausted);
        assert_eq!(out.delta(), 0.0);
    }

    #[test]
    fn attackers_sorted_by_fairness_then_id() {
        let mut g = Wsn::with_nodes(4);
        g.add_edge(n(1), n(0), 1.0).unwrap();
        g.add_edge(n(3), n(0), 1.0).unwrap();
        g.add_edge(n(2), n(0), -1.0).unwrap();
        let s = compute_fga(&g, &FgaConfig::precise());
        assert_eq!(by_fairness(&[n(2), n(1), n(3)], &s), vec![n(1), n(3), n(2)]);
    }

    #[test]
    fn batch_sizes() {
        assert_eq!(scaled_batch_len(1, 5, 10, 20), 5);
        assert_eq!(scaled_batch_len(4, 5, 10, 20), 10);
        assert_eq!(scaled_batch_len(1, 5, 10, 2), 2);
    }

    #[test]
    fn scaled_attack_spends_batches() {
        let mut g = example_network();
        let attackers: Vec<NodeId> = (0..7).map(|_| g.add_node()).chain([n(4)]).collect();
        let out =
            indirect_attack_scaled(&g, &attackers, n(0), 5, 10, &AttackOptions::precise()).unwrap();
        // first pick rates node 3 (indeg 1): 5 edges, then the remaining 3
        assert_eq!(out.moves.len(), 8);
        assert!(out.moves[..5]
            .iter()
            .all(|m| m.rated == n(3) && m.weight == -1.0));
        assert!(out.delta() < 0.0);
        assert!(
            indirect_attack_scaled(&g, &attackers, n(0), 0, 10, &AttackOptions::default()).is_err()
        );
    }
}
