use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fga_core::attacks::{
    direct_attack, greedy_candidates, indirect_attack_greedy, indirect_attack_scaled, mixed_attack,
    solve_exhaustive, AttackOptions, AttackProblem, Direction, Targets,
};
use fga_core::data::random_erdos;
use fga_core::{compute_fga, FgaConfig, NodeId, Wsn};

fn cold_precise() -> AttackOptions {
    AttackOptions {
        fga: FgaConfig::precise(),
        cold: true,
    }
}

/// A target with raters and `k` attackers distinct from it.
fn instance(n: usize, m: usize, k: usize, seed: u64) -> (Wsn, NodeId, Vec<NodeId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = random_erdos(n, m, 0.8, rng.gen()).unwrap();
        let t = NodeId(rng.gen_range(0..n as u32));
        if g.indeg(t) == 0 {
            continue;
        }
        let a = sample(&mut rng, n - 1, k)
            .into_iter()
            .map(|i| {
                if i >= t.index() {
                    NodeId(i as u32 + 1)
                } else {
                    NodeId(i as u32)
                }
            })
            .collect();
        return (g, t, a);
    }
}

#[test]
fn warm_and_cold_attacks_agree() {
    for seed in 0..4 {
        let (g, t, a) = instance(50, 250, 3, seed);
        let warm = indirect_attack_greedy(&g, &a, t, &AttackOptions::precise()).unwrap();
        let cold = indirect_attack_greedy(&g, &a, t, &cold_precise()).unwrap();
        assert_eq!(warm.moves, cold.moves);
        assert!((warm.delta() - cold.delta()).abs() < 1e-9);

        let mut h = g.clone();
        let s = h.add_node();
        let warm = direct_attack(&h, &[s], t, &AttackOptions::precise()).unwrap();
        let cold = direct_attack(&h, &[s], t, &cold_precise()).unwrap();
        for v in h.nodes() {
            assert!((warm.scores_after.goodness(v) - cold.scores_after.goodness(v)).abs() < 1e-9);
            assert!((warm.scores_after.fairness(v) - cold.scores_after.fairness(v)).abs() < 1e-9);
        }
    }
}

/// Every greedy move must reach the lowest `g(t)` of a full rescan done from
/// scratch on the graph as it stood.
#[test]
fn each_greedy_move_is_a_rescan_minimum() {
    let cfg = FgaConfig::precise();
    for seed in 10..16 {
        let (g, t, a) = instance(30, 150, 3, seed);
        let out = indirect_attack_greedy(&g, &a, t, &AttackOptions::precise()).unwrap();
        let mut cur = g.clone();
        for mv in &out.moves {
            let raters: Vec<NodeId> = cur.predecessors(t).iter().map(|&(u, _)| u).collect();
            let mut best = f64::INFINITY;
            for u in raters {
                for &(n2, _) in cur.successors(u) {
                    if n2 == t || n2 == mv.attacker {
                        continue;
                    }
                    for w in [1.0, -1.0] {
                        let mut h = cur.clone();
                        h.set_weight(mv.attacker, n2, w).unwrap();
                        best = best.min(compute_fga(&h, &cfg).goodness(t));
                    }
                }
            }
            cur.set_weight(mv.attacker, mv.rated, mv.weight).unwrap();
            let got = compute_fga(&cur, &cfg).goodness(t);
            assert!(got <= best + 1e-9, "seed {seed}: {got} vs rescan {best}");
        }
    }
}

#[test]
fn greedy_is_never_better_than_exhaustive() {
    let opts = cold_precise();
    let mut checked = 0;
    for seed in 100..160 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(5..=10);
        let k = rng.gen_range(1..=2);
        let (g, t, a) = instance(n, 2 * n, k, seed);
        let inter: BTreeSet<NodeId> = a
            .iter()
            .flat_map(|&x| greedy_candidates(&g, t, x))
            .collect();
        if inter.is_empty() {
            continue;
        }
        checked += 1;
        let p = AttackProblem {
            graph: g.clone(),
            attackers: a.clone(),
            targets: Targets::Nodes(vec![t]),
            intermediaries: inter.into_iter().collect(),
            budget: k,
            threshold: -1.0,
            direction: Direction::Decrease,
        };
        let greedy = indirect_attack_greedy(&g, &a, t, &opts).unwrap();
        let best = solve_exhaustive(&p, &[-1.0, 1.0], &opts).unwrap();
        assert!(greedy.scores_after.goodness(t) >= best.objective - 1e-9);
        assert!(!best.feasible);
    }
    assert!(checked >= 30);
}

#[test]
fn mixed_attack_decomposes() {
    let cfg = FgaConfig::precise();
    for seed in 20..24 {
        let (g, t, a) = instance(40, 200, 4, seed);
        let (d, i) = a.split_at(2);
        let out = mixed_attack(&g, d, i, t, &AttackOptions::precise()).unwrap();
        let before = compute_fga(&g, &cfg).goodness(t);

        let mut h = g.clone();
        for mv in &out.outcome.moves[..2] {
            assert_eq!((mv.rated, mv.weight), (t, -1.0));
            h.set_weight(mv.attacker, mv.rated, mv.weight).unwrap();
        }
        let direct_only = compute_fga(&h, &cfg).goodness(t) - before;
        let total = compute_fga(&out.outcome.graph_after, &cfg).goodness(t) - before;
        assert!((out.delta_direct - direct_only).abs() < 1e-9);
        assert!((out.delta_total - total).abs() < 1e-9);
        assert_eq!(out.delta_direct + out.delta_indirect, out.delta_total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_more_direct_rater_never_raises_goodness(seed in any::<u64>(), k in 1usize..8) {
        let (g, t, a) = instance(40, 200, k + 1, seed);
        let opts = AttackOptions::precise();
        let fewer = direct_attack(&g, &a[..k], t, &opts).unwrap();
        let more = direct_attack(&g, &a, t, &opts).unwrap();
        prop_assert!(more.scores_after.goodness(t) <= fewer.scores_after.goodness(t) + 1e-9);
    }

    #[test]
    fn attacks_respect_the_budget(seed in any::<u64>(), k in 1usize..6) {
        let (g, t, a) = instance(30, 150, k, seed);
        let opts = AttackOptions::default();
        prop_assert_eq!(direct_attack(&g, &a, t, &opts).unwrap().moves.len(), k);
        prop_assert!(indirect_attack_greedy(&g, &a, t, &opts).unwrap().moves.len() <= k);
        prop_assert!(indirect_attack_scaled(&g, &a, t, 5, 10, &opts).unwrap().moves.len() <= k);
    }
}
