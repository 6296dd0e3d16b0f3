//! Closed-form limits on how far attacks can move goodness, and harnesses that
//! check them against recomputed scores.

use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{direct_attack, inject_sybil, AttackOptions};
use crate::axioms::{attach_error_sink, sink_plan};
use crate::error::{Error, Result};
use crate::fga::{compute_fga, FgaConfig, FgaScores};
use crate::wsn::{NodeId, Wsn};

/// Slack added to every analytic bound to absorb fixed-point residuals.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Weights swept by indirect Sybil trials.
pub const SYBIL_WEIGHTS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

/// Smallest influencer fairness the stabiliser gadget realizes; a requested
/// drop of 1 is realized as a drop to this floor.
pub const STABILISER_FAIRNESS_FLOOR: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationReason {
    Indeg,
    Outdeg,
    WeightMass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinKNeighbourCert {
    pub k: usize,
    pub holds: bool,
    pub violations: Vec<(NodeId, ViolationReason)>,
}

/// Checks that every node has indegree and outdegree at least `k` and at most
/// `k` total absolute incoming weight.
pub fn check_min_k_neighbour(g: &Wsn, k: usize) -> Result<MinKNeighbourCert> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let mut violations = Vec::new();
    for v in g.nodes() {
        if g.indeg(v) < k {
            violations.push((v, ViolationReason::Indeg));
        }
        if g.outdeg(v) < k {
            violations.push((v, ViolationReason::Outdeg));
        }
        let mass: f64 = g.predecessors(v).iter().map(|&(_, w)| w.abs()).sum();
        if mass > k as f64 {
            violations.push((v, ViolationReason::WeightMass));
        }
    }
    Ok(MinKNeighbourCert {
        k,
        holds: violations.is_empty(),
        violations,
    })
}

/// `2 / ((indeg(i) + 1) k)`
pub fn indirect_sybil_bound_value(indeg_i: usize, k: usize) -> f64 {
    2.0 / ((indeg_i as f64 + 1.0) * k as f64)
}

/// Largest change of any goodness caused by one Sybil rating intermediary `i`
/// in a minimum-`k`-neighbour network.
pub fn indirect_sybil_bound(g: &Wsn, i: NodeId, k: usize) -> Result<f64> {
    if !g.contains(i) {
        return Err(Error::UnknownNode(i));
    }
    let cert = check_min_k_neighbour(g, k)?;
    if !cert.holds {
        return Err(Error::BoundPrecondition(format!(
            "not a minimum-{k}-neighbour network ({} violations)",
            cert.violations.len()
        )));
    }
    Ok(indirect_sybil_bound_value(g.indeg(i), k))
}

/// Largest change of `g(t)` caused by one Sybil rating `t` directly:
/// `2 / indeg(t)`.
pub fn direct_sybil_bound(g: &Wsn, t: NodeId) -> Result<f64> {
    if !g.contains(t) {
        return Err(Error::UnknownNode(t));
    }
    match g.indeg(t) {
        0 => Err(Error::BoundPrecondition(format!(
            "node {t} is unrated; a first rating sets its goodness outright"
        ))),
        d => Ok(2.0 / d as f64),
    }
}

/// `⌈2 g(t) indeg(t)⌉`: more attackers than this, each with fairness at least
/// 1/2 after rating `t` with −1, make `g(t)` negative.
pub fn direct_flip_budget(scores: &FgaScores, g: &Wsn, t: NodeId) -> Result<usize> {
    if !g.contains(t) {
        return Err(Error::UnknownNode(t));
    }
    let gt = scores.goodness(t);
    if gt <= 0.0 {
        return Err(Error::BoundPrecondition(format!(
            "goodness of {t} is already {gt}"
        )));
    }
    Ok((2.0 * gt * g.indeg(t) as f64).ceil() as usize)
}

/// `1 − 2Δk/(k+l)`: lower bound on the goodness of a node rated +1 by `k`
/// influencers whose fairness dropped by `Δ` and `l` stabilisers.
pub fn stabiliser_lower_bound(k: usize, l: usize, delta: f64) -> Result<f64> {
    if k + l == 0 {
        return Err(Error::InvalidParameters("k + l must be positive".into()));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameters(format!(
            "delta {delta} outside [0, 1]"
        )));
    }
    Ok(1.0 - 2.0 * delta * k as f64 / (k + l) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    DirectSybil,
    IndirectSybil,
    Stabiliser,
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct-sybil" => Ok(Scenario::DirectSybil),
            "indirect-sybil" => Ok(Scenario::IndirectSybil),
            "stabiliser" | "stabilizer" => Ok(Scenario::Stabiliser),
            _ => Err(Error::InvalidParameters(format!("unknown scenario {s:?}"))),
        }
    }
}

/// One trial of a bound: `satisfied` iff `|observed_delta| <= bound_value + 1e-9`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub scenario: Scenario,
    pub trial: usize,
    pub target: NodeId,
    pub intermediary: Option<NodeId>,
    pub k: Option<usize>,
    pub weight: Option<f64>,
    pub bound_value: f64,
    pub observed_delta: f64,
    pub satisfied: bool,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        scenario: Scenario,
        trial: usize,
        target: NodeId,
        intermediary: Option<NodeId>,
        k: Option<usize>,
        weight: Option<f64>,
        bound_value: f64,
        observed_delta: f64,
    ) -> Self {
        Self {
            scenario,
            trial,
            target,
            intermediary,
            k,
            weight,
            bound_value,
            observed_delta,
            satisfied: observed_delta.abs() <= bound_value + BOUND_TOLERANCE,
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn bound_config() -> FgaConfig {
    FgaConfig::precise()
}

/// Sybils rating a random rated node with a random weight in `[-1, 1]`.
pub fn verify_direct_sybil(g: &Wsn, trials: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let rated: Vec<NodeId> = g.nodes().filter(|&v| g.indeg(v) > 0).collect();
    if rated.is_empty() {
        return Err(Error::BoundPrecondition("no node has a rater".into()));
    }
    let before = compute_fga(g, &bound_config());
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let t = *rated.choose(&mut rng).expect("non-empty");
            let w = rng.gen_range(-1.0..=1.0);
            let bound = direct_sybil_bound(g, t)?;
            let (h, _) = inject_sybil(g, t, w)?;
            let after = compute_fga(&h, &bound_config());
            Ok(BoundReport::new(
                Scenario::DirectSybil,
                trial,
                t,
                None,
                None,
                Some(w),
                bound,
                after.goodness(t) - before.goodness(t),
            ))
        })
        .collect()
}

/// Sybils rating a random intermediary `i`; the observed target is a random
/// successor of one of `i`'s raters (the nodes most exposed to the change),
/// or any other node when there is none.
pub fn verify_indirect_sybil(
    g: &Wsn,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    if g.node_count() < 2 {
        return Err(Error::BoundPrecondition("need at least two nodes".into()));
    }
    indirect_sybil_bound(g, NodeId(0), k)?;
    let before = compute_fga(g, &bound_config());
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let i = NodeId::from(rng.gen_range(0..g.node_count()));
            let exposed: Vec<NodeId> = g
                .predecessors(i)
                .iter()
                .flat_map(|&(r, _)| g.successors(r).iter().map(|&(s, _)| s))
                .filter(|&s| s != i)
                .collect();
            let t = match exposed.choose(&mut rng) {
                Some(&t) => t,
                None => loop {
                    let t = NodeId::from(rng.gen_range(0..g.node_count()));
                    if t != i {
                        break t;
                    }
                },
            };
            let w = SYBIL_WEIGHTS[trial % SYBIL_WEIGHTS.len()];
            let bound = indirect_sybil_bound_value(g.indeg(i), k);
            let (h, _) = inject_sybil(g, i, w)?;
            let after = compute_fga(&h, &bound_config());
            Ok(BoundReport::new(
                Scenario::IndirectSybil,
                trial,
                t,
                Some(i),
                Some(k),
                Some(w),
                bound,
                after.goodness(t) - before.goodness(t),
            ))
        })
        .collect()
}

/// A node `x` rated +1 by `l` stabilisers (which rate nothing else) and by `k`
/// influencers whose fairness is pinned to `1 − Δ` through extra ratings.
#[derive(Clone, Debug)]
pub struct StabilisedGadget {
    pub graph: Wsn,
    pub x: NodeId,
    pub influencers: Vec<NodeId>,
    /// The fairness drop actually realized.
    pub delta: f64,
    /// `1 − 2kΔ/(2k+l)`
    pub expected_goodness: f64,
}

impl StabilisedGadget {
    pub fn build(k: usize, l: usize, delta: f64) -> Result<Self> {
        stabiliser_lower_bound(k, l, delta)?;
        let fairness = (1.0 - delta).max(STABILISER_FAIRNESS_FLOOR);
        let delta = 1.0 - fairness;
        let (kf, lf) = (k as f64, l as f64);
        let expected_goodness = 1.0 - 2.0 * kf * delta / (2.0 * kf + lf);

        let mut graph = Wsn::new();
        let x = graph.add_labelled_node("x-");
        for _ in 0..l {
            let s = graph.add_labelled_node("stabiliser-");
            graph.add_edge(s, x, 1.0)?;
        }
        let (sinks, d) = sink_plan(fairness, 1.0 - expected_goodness)?;
        let mut influencers = Vec::with_capacity(k);
        for _ in 0..k {
            let n = graph.add_labelled_node("influencer-");
            graph.add_edge(n, x, 1.0)?;
            for _ in 0..sinks {
                attach_error_sink(&mut graph, n, fairness, d)?;
            }
            influencers.push(n);
        }
        Ok(Self {
            graph,
            x,
            influencers,
            delta,
            expected_goodness,
        })
    }
}

/// Converges a stabilised gadget and compares `1 − g(x)` with the allowed
/// drop `2Δk/(k+l)`, using the realized `Δ`.
pub fn verify_stabiliser(k: usize, l: usize, delta: f64) -> Result<BoundReport> {
    let gadget = StabilisedGadget::build(k, l, delta)?;
    let s = compute_fga(&gadget.graph, &bound_config());
    for &n in &gadget.influencers {
        let f = s.fairness(n);
        if (f - (1.0 - gadget.delta)).abs() > BOUND_TOLERANCE {
            return Err(Error::Unrealizable(format!(
                "influencer {n} converged to fairness {f}, wanted {}",
                1.0 - gadget.delta
            )));
        }
    }
    let floor = stabiliser_lower_bound(k, l, gadget.delta)?;
    Ok(BoundReport::new(
        Scenario::Stabiliser,
        0,
        gadget.x,
        None,
        Some(k),
        Some(1.0),
        1.0 - floor,
        s.goodness(gadget.x) - 1.0,
    ))
}

/// Dispatches to the direct or indirect Sybil harness. The stabiliser
/// scenario builds its own gadget; use [`verify_stabiliser`].
pub fn verify_bound_empirically(
    g: &Wsn,
    scenario: Scenario,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    match scenario {
        Scenario::DirectSybil => verify_direct_sybil(g, trials, seed),
        Scenario::IndirectSybil => verify_indirect_sybil(g, k, trials, seed),
        Scenario::Stabiliser => Err(Error::InvalidParameters(
            "the stabiliser scenario builds its own gadget".into(),
        )),
    }
}

/// One direct attack with more attackers than the flip budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipReport {
    pub trial: usize,
    pub target: NodeId,
    pub budget: usize,
    pub attackers: usize,
    pub goodness_before: f64,
    pub goodness_after: f64,
    pub min_attacker_fairness: f64,
    /// Instances drawn and discarded because an attacker ended below
    /// fairness 1/2.
    pub discarded: usize,
    pub flipped: bool,
}

const FLIP_ATTEMPTS: usize = 1000;

/// Direct attacks by `budget + 1..=budget + 3` attackers on random targets
/// with positive goodness. Half the instances use fresh attacker nodes, half
/// reuse existing nodes (overwriting any rating they gave the target). An
/// instance where some attacker ends below fairness 1/2 is discarded and
/// redrawn.
pub fn verify_flip(g: &Wsn, trials: usize, seed: u64) -> Result<Vec<FlipReport>> {
    let opts = AttackOptions {
        fga: bound_config(),
        cold: false,
    };
    let before = compute_fga(g, &opts.fga);
    let targets: Vec<NodeId> = g
        .nodes()
        .filter(|&v| g.indeg(v) > 0 && before.goodness(v) > 0.0)
        .collect();
    if targets.is_empty() {
        return Err(Error::BoundPrecondition(
            "no rated node with positive goodness".into(),
        ));
    }
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            for discarded in 0..FLIP_ATTEMPTS {
                let t = *targets.choose(&mut rng).expect("non-empty");
                let budget = direct_flip_budget(&before, g, t)?;
                let size = budget + rng.gen_range(1..=3);
                let mut h = g.clone();
                let others = g.node_count() - 1;
                let attackers: Vec<NodeId> = if rng.gen_bool(0.5) || others < size {
                    (0..size).map(|_| h.add_labelled_node("sybil-")).collect()
                } else {
                    sample(&mut rng, others, size)
                        .into_iter()
                        .map(|i| {
                            if i >= t.index() {
                                NodeId::from(i + 1)
                            } else {
                                NodeId::from(i)
                            }
                        })
                        .collect()
                };
                let out = direct_attack(&h, &attackers, t, &opts)?;
                let min_f = attackers
                    .iter()
                    .map(|&a| out.scores_after.fairness(a))
                    .fold(f64::INFINITY, f64::min);
                if min_f < 0.5 {
                    continue;
                }
                let after = out.scores_after.goodness(t);
                return Ok(FlipReport {
                    trial,
                    target: t,
                    budget,
                    attackers: size,
                    goodness_before: before.goodness(t),
                    goodness_after: after,
                    min_attacker_fairness: min_f,
                    discarded,
                    flipped: after < 0.0,
                });
            }
            Err(Error::BoundPrecondition(format!(
                "trial {trial}: no instance kept attacker fairness at 1/2 in {FLIP_ATTEMPTS} draws"
            )))
        })
        .collect()
}
