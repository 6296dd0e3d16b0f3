//! The worked four-node example: a base network where node 5 either rates 1
//! directly or rates 4, lowering the fairness of 4's rater.
//!
//! The printed tables are rounded (one decimal for the direct case, two for
//! the indirect one), so the topology is recovered by search.

use fga_core::attacks::{direct_attack, indirect_attack_greedy, AttackOptions};
use fga_core::{compute_fga, FgaConfig, FgaScores, NodeId, Wsn};

const DIRECT: [(char, usize, f64); 5] = [
    ('g', 1, 0.4),
    ('f', 2, 0.8),
    ('f', 3, 0.7),
    ('g', 4, 0.8),
    ('f', 5, 0.3),
];
const INDIRECT: [(char, usize, f64); 5] = [
    ('g', 1, 0.83),
    ('f', 2, 0.75),
    ('f', 3, 0.92),
    ('g', 4, 0.17),
    ('f', 5, 0.42),
];

fn v(i: usize) -> NodeId {
    NodeId(i as u32 - 1)
}

fn network(edges: &[(usize, usize)], extra: (usize, usize)) -> Wsn {
    let mut g = Wsn::with_nodes(5);
    for &(a, b) in edges {
        g.add_edge(v(a), v(b), 1.0).unwrap();
    }
    g.add_edge(v(extra.0), v(extra.1), -1.0).unwrap();
    g
}

fn matches(s: &FgaScores, table: &[(char, usize, f64)], tol: f64) -> bool {
    table.iter().all(|&(kind, i, want)| {
        let got = if kind == 'g' {
            s.goodness(v(i))
        } else {
            s.fairness(v(i))
        };
        (got - want).abs() <= tol
    })
}

fn all_pairs() -> Vec<(usize, usize)> {
    (1..=4)
        .flat_map(|a| (1..=4).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

#[test]
fn base_network_is_the_minimal_topology_matching_both_tables() {
    let cfg = FgaConfig::precise();
    let pairs = all_pairs();
    assert_eq!(pairs.len(), 12);
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    for mask in 0u32..(1 << 12) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let b = compute_fga(&network(&edges, (5, 1)), &cfg);
        let c = compute_fga(&network(&edges, (5, 4)), &cfg);
        if matches(&b, &DIRECT, 0.05 + 1e-9) && matches(&c, &INDIRECT, 0.005 + 1e-9) {
            found.push(edges);
        }
    }
    let base = vec![(2, 1), (2, 4), (3, 1)];
    assert!(found.contains(&base), "{found:?}");
    let fewest = found.iter().map(Vec::len).min().unwrap();
    assert_eq!(fewest, 3);
    assert_eq!(found.iter().filter(|e| e.len() == fewest).count(), 1);
}

#[test]
fn exact_fixed_points_of_both_networks() {
    let cfg = FgaConfig::precise();
    let direct = compute_fga(&network(&[(2, 1), (3, 1), (2, 4)], (5, 1)), &cfg);
    let indirect = compute_fga(&network(&[(2, 1), (3, 1), (2, 4)], (5, 4)), &cfg);
    let frozen = [
        (
            &direct,
            [2.0 / 5.0, 4.0 / 5.0, 7.0 / 10.0, 4.0 / 5.0, 3.0 / 10.0],
        ),
        (
            &indirect,
            [5.0 / 6.0, 3.0 / 4.0, 11.0 / 12.0, 1.0 / 6.0, 5.0 / 12.0],
        ),
    ];
    for (s, want) in frozen {
        let got = [
            s.goodness(v(1)),
            s.fairness(v(2)),
            s.fairness(v(3)),
            s.goodness(v(4)),
            s.fairness(v(5)),
        ];
        for (x, y) in got.iter().zip(want) {
            assert!((x - y).abs() < 1e-9, "{got:?} vs {want:?}");
        }
    }
}

fn base() -> Wsn {
    let mut g = Wsn::with_nodes(5);
    for (a, b) in [(2, 1), (3, 1), (2, 4)] {
        g.add_edge(v(a), v(b), 1.0).unwrap();
    }
    g
}

#[test]
fn direct_attack_reproduces_the_direct_table() {
    let out = direct_attack(&base(), &[v(5)], v(1), &AttackOptions::precise()).unwrap();
    assert!(matches(&out.scores_after, &DIRECT, 0.05 + 1e-9));
    assert!((out.scores_after.goodness(v(1)) - 0.4).abs() < 0.01);
    assert_eq!(out.scores_before.goodness(v(1)), 1.0);
}

#[test]
fn greedy_chooses_the_indirect_move() {
    let out = indirect_attack_greedy(&base(), &[v(5)], v(1), &AttackOptions::precise()).unwrap();
    assert_eq!(out.moves.len(), 1);
    assert_eq!((out.moves[0].rated, out.moves[0].weight), (v(4), -1.0));
    assert!(matches(&out.scores_after, &INDIRECT, 0.005 + 1e-9));
    assert!((out.scores_after.fairness(v(2)) - 0.75).abs() < 0.005);
}
