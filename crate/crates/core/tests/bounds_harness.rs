use fga_core::bounds::{
    direct_flip_budget, direct_sybil_bound, indirect_sybil_bound_value, stabiliser_lower_bound,
    verify_bound_empirically, verify_stabiliser, Scenario, StabilisedGadget,
};
use fga_core::data::{generate_min_k_neighbour, random_erdos};
use fga_core::{compute_fga, FgaConfig, NodeId, Wsn};

#[test]
fn flip_budget_for_a_fully_trusted_target() {
    let mut g = Wsn::with_nodes(3);
    g.add_edge(NodeId(1), NodeId(0), 1.0).unwrap();
    g.add_edge(NodeId(2), NodeId(0), 1.0).unwrap();
    let s = compute_fga(&g, &FgaConfig::precise());
    assert_eq!(direct_flip_budget(&s, &g, NodeId(0)).unwrap(), 4);
    assert_eq!(direct_sybil_bound(&g, NodeId(0)).unwrap(), 1.0);
}

#[test]
fn indirect_bound_shrinks_with_degree_and_k() {
    let mut prev = f64::INFINITY;
    for d in 1..20 {
        let b = indirect_sybil_bound_value(d, 3);
        assert!(b < prev);
        assert!(indirect_sybil_bound_value(d, 4) < b);
        prev = b;
    }
    assert_eq!(indirect_sybil_bound_value(1, 1), 1.0);
}

#[test]
fn stabiliser_gadget_matches_its_closed_form() {
    for (k, l, delta) in [(1, 0, 0.5), (3, 5, 0.1), (2, 50, 1.0)] {
        let gadget = StabilisedGadget::build(k, l, delta).unwrap();
        let s = compute_fga(&gadget.graph, &FgaConfig::precise());
        let floor = stabiliser_lower_bound(k, l, delta).unwrap();
        let g = s.goodness(gadget.x);
        assert!((g - gadget.expected_goodness).abs() < 1e-9);
        assert!(g >= floor - 1e-9);
        assert!(verify_stabiliser(k, l, delta).unwrap().satisfied);
    }
}

#[test]
fn empirical_harness_holds_on_small_runs() {
    let g = generate_min_k_neighbour(30, 3, 1).unwrap();
    let r = verify_bound_empirically(&g, Scenario::IndirectSybil, 3, 40, 2).unwrap();
    assert_eq!(r.len(), 40);
    assert!(r.iter().all(|x| x.satisfied));

    let g = random_erdos(50, 250, 0.8, 5).unwrap();
    let r = verify_bound_empirically(&g, Scenario::DirectSybil, 0, 40, 3).unwrap();
    assert!(r
        .iter()
        .all(|x| x.satisfied && x.observed_delta.abs() <= x.bound_value + 1e-9));

    let again = verify_bound_empirically(&g, Scenario::DirectSybil, 0, 40, 3).unwrap();
    assert_eq!(format!("{r:?}"), format!("{again:?}"));
}
