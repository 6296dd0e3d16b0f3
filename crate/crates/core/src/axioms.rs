//! Executable checks of the eleven fairness/goodness axioms.
//!
//! The axioms quantify over nodes whose raters have a prescribed fairness, or
//! over raters that make a prescribed rating error. Both are realized exactly
//! at the fixed point with *error sinks*: a sink `s` is rated by the rater `r`
//! with weight `w` and by `h` anchors that rate only `s`, with +1. At the fixed
//! point each anchor has fairness `(1 + g(s)) / 2`, which gives
//!
//! ```text
//! g(s) = (h + 2 f(r) w) / (h + 2)
//! ```
//!
//! so for a target error `d` the weight `w = (h - d(h+2)) / (h + 2 - 2 f(r))`
//! yields `|w - g(s)| = d` exactly. `h` is the smallest anchor count that keeps
//! `w >= -1`.
//!
//! A rater meant to have fairness `f` while rating the gadget target with
//! error `e` gets `m` sinks of error `d_s = (2(m+1)(1-f) - e) / m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::random_erdos;
use crate::error::{Error, Result};
use crate::fga::{compute_fga, fairness_pass, FgaConfig, FgaScores};
use crate::wsn::{NodeId, Wsn};

/// Agreement required between measured scores and the axiom identities.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

const MAX_ANCHORS: usize = 20_000;
const MAX_SINKS: usize = 20_000;

/// Adds a sink that `rater` rates with error exactly `error` at the fixed
/// point, given that the rater's fixed-point fairness is `rater_fairness`.
pub(crate) fn attach_error_sink(
    g: &mut Wsn,
    rater: NodeId,
    rater_fairness: f64,
    error: f64,
) -> Result<NodeId> {
    let f = rater_fairness;
    if !(0.0..=1.0).contains(&f) || !(0.0..2.0).contains(&error) {
        return Err(Error::Unrealizable(format!(
            "rating error {error} with rater fairness {f}"
        )));
    }
    let reach = |h: usize| {
        let h = h as f64;
        (2.0 * h + 2.0 - 2.0 * f) / (h + 2.0)
    };
    let anchors = (1..=MAX_ANCHORS)
        .find(|&h| error <= reach(h))
        .ok_or_else(|| {
            Error::Unrealizable(format!("rating error {error} needs too many anchors"))
        })?;
    let h = anchors as f64;
    let w = ((h - error * (h + 2.0)) / (h + 2.0 - 2.0 * f)).clamp(-1.0, 1.0);

    let sink = g.add_labelled_node("sink-");
    g.add_edge(rater, sink, w)?;
    for _ in 0..anchors {
        let a = g.add_labelled_node("anchor-");
        g.add_edge(a, sink, 1.0)?;
    }
    Ok(sink)
}

/// Sink count and per-sink error giving fairness `f` to a rater whose other
/// rating has error `e`.
pub(crate) fn sink_plan(f: f64, e: f64) -> Result<(usize, f64)> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Unrealizable(format!("fairness {f} outside [0, 1]")));
    }
    if 1.0 - f <= 1e-15 {
        return if e <= 1e-12 {
            Ok((0, 0.0))
        } else {
            Err(Error::Unrealizable(format!(
                "fairness 1 requires an exact rating, but the rating error is {e}"
            )))
        };
    }
    let d_max = 2.0 - f;
    (1..=MAX_SINKS)
        .map(|m| {
            let mf = m as f64;
            (m, (2.0 * (mf + 1.0) * (1.0 - f) - e) / mf)
        })
        .find(|&(_, d)| (0.0..=d_max).contains(&d) && d < 2.0)
        .ok_or_else(|| Error::Unrealizable(format!("fairness {f} with rating error {e}")))
}

/// Node 0 rated by groups of raters; group `i` has `count` raters of fairness
/// `f_i`, each rating node 0 with `w_i`.
#[derive(Clone, Debug)]
pub struct GoodnessGadget {
    pub graph: Wsn,
    pub target: NodeId,
    pub raters: Vec<NodeId>,
    pub rater_fairness: Vec<f64>,
    /// `Σ n_i f_i w_i / Σ n_i`
    pub expected_goodness: f64,
}

impl GoodnessGadget {
    pub fn build(groups: &[(usize, f64, f64)]) -> Result<Self> {
        let total: usize = groups.iter().map(|g| g.0).sum();
        for &(_, f, w) in groups {
            if !(-1.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange(w));
            }
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Unrealizable(format!(
                    "rater fairness {f} cannot be realized"
                )));
            }
        }
        let expected_goodness = if total == 0 {
            1.0
        } else {
            groups
                .iter()
                .map(|&(n, f, w)| n as f64 * f * w)
                .sum::<f64>()
                / total as f64
        };

        let mut graph = Wsn::new();
        let target = graph.add_labelled_node("target-");
        let mut raters = Vec::with_capacity(total);
        let mut rater_fairness = Vec::with_capacity(total);
        for &(count, f, w) in groups {
            let (sinks, d) = sink_plan(f, (w - expected_goodness).abs())?;
            for _ in 0..count {
                let r = graph.add_labelled_node("rater-");
                graph.add_edge(r, target, w)?;
                for _ in 0..sinks {
                    attach_error_sink(&mut graph, r, f, d)?;
                }
                raters.push(r);
                rater_fairness.push(f);
            }
        }
        Ok(Self {
            graph,
            target,
            raters,
            rater_fairness,
            expected_goodness,
        })
    }

    /// Converged goodness of the target, after checking every rater reached
    /// its prescribed fairness.
    pub fn measure(&self) -> Result<f64> {
        let s = converge(&self.graph);
        for (&r, &f) in self.raters.iter().zip(&self.rater_fairness) {
            let got = s.fairness(r);
            if (got - f).abs() > AXIOM_TOLERANCE {
                return Err(Error::Unrealizable(format!(
                    "rater {r} converged to fairness {got}, wanted {f}"
                )));
            }
        }
        Ok(s.goodness(self.target))
    }
}

/// Node 0 rates groups of sinks; group `i` has `count` sinks rated with
/// error `d_i`.
#[derive(Clone, Debug)]
pub struct FairnessGadget {
    pub graph: Wsn,
    pub rater: NodeId,
    pub rated: Vec<NodeId>,
    pub errors: Vec<f64>,
    /// `1 - Σ n_i d_i / (2 Σ n_i)`
    pub expected_fairness: f64,
}

impl FairnessGadget {
    pub fn build(groups: &[(usize, f64)]) -> Result<Self> {
        let total: usize = groups.iter().map(|g| g.0).sum();
        let expected_fairness = if total == 0 {
            1.0
        } else {
            1.0 - groups.iter().map(|&(n, d)| n as f64 * d).sum::<f64>() / (2.0 * total as f64)
        };
        let mut graph = Wsn::new();
        let rater = graph.add_labelled_node("rater-");
        let mut rated = Vec::with_capacity(total);
        let mut errors = Vec::with_capacity(total);
        for &(count, d) in groups {
            for _ in 0..count {
                rated.push(attach_error_sink(&mut graph, rater, expected_fairness, d)?);
                errors.push(d);
            }
        }
        Ok(Self {
            graph,
            rater,
            rated,
            errors,
            expected_fairness,
        })
    }

    /// Converged fairness of the rater, after checking each realized error.
    pub fn measure(&self) -> Result<f64> {
        let s = converge(&self.graph);
        for (&u, &d) in self.rated.iter().zip(&self.errors) {
            let w = self.graph.weight(self.rater, u).expect("gadget edge");
            let got = (w - s.goodness(u)).abs();
            if (got - d).abs() > AXIOM_TOLERANCE {
                return Err(Error::Unrealizable(format!(
                    "rating of {u} converged to error {got}, wanted {d}"
                )));
            }
        }
        Ok(s.fairness(self.rater))
    }
}

fn converge(g: &Wsn) -> FgaScores {
    compute_fga(g, &FgaConfig::precise())
}

/// Outcome of one axiom instance: the two sides of the identity (or ordering)
/// and the largest deviation from the closed forms `g = f·w`, `f = 1 - d/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub closed_form_error: f64,
    pub pass: bool,
}

impl Check {
    fn identity(lhs: f64, rhs: f64, closed_form_error: f64) -> Self {
        let error = (lhs - rhs).abs();
        Self {
            lhs,
            rhs,
            error,
            closed_form_error,
            pass: error <= AXIOM_TOLERANCE && closed_form_error <= AXIOM_TOLERANCE,
        }
    }

    /// Passes when `lhs >= rhs` up to tolerance.
    fn at_least(lhs: f64, rhs: f64, closed_form_error: f64) -> Self {
        let error = (rhs - lhs).max(0.0);
        Self {
            lhs,
            rhs,
            error,
            closed_form_error,
            pass: error <= AXIOM_TOLERANCE && closed_form_error <= AXIOM_TOLERANCE,
        }
    }
}

fn goodness_of(groups: &[(usize, f64, f64)]) -> Result<(f64, f64)> {
    let gadget = GoodnessGadget::build(groups)?;
    let got = gadget.measure()?;
    Ok((got, (got - gadget.expected_goodness).abs()))
}

fn fairness_of(groups: &[(usize, f64)]) -> Result<(f64, f64)> {
    let gadget = FairnessGadget::build(groups)?;
    let got = gadget.measure()?;
    Ok((got, (got - gadget.expected_fairness).abs()))
}

/// SMOOTH GOODNESS: `g^{w0, f0+Δ} = g^{w0, f0} + g^{w0, Δ}` for `raters` unanimous raters.
pub fn check_smooth_goodness(raters: usize, f0: f64, delta: f64, omega0: f64) -> Result<Check> {
    let (sum, e1) = goodness_of(&[(raters, f0 + delta, omega0)])?;
    let (a, e2) = goodness_of(&[(raters, f0, omega0)])?;
    let (b, e3) = goodness_of(&[(raters, delta, omega0)])?;
    Ok(Check::identity(sum, a + b, e1.max(e2).max(e3)))
}

/// INCREASE WEIGHT: `g^{w0+Δ, f0} = g^{w0, f0} + g^{Δ, f0}`.
pub fn check_increase_weight(raters: usize, f0: f64, omega0: f64, delta: f64) -> Result<Check> {
    let (sum, e1) = goodness_of(&[(raters, f0, omega0 + delta)])?;
    let (a, e2) = goodness_of(&[(raters, f0, omega0)])?;
    let (b, e3) = goodness_of(&[(raters, f0, delta)])?;
    Ok(Check::identity(sum, a + b, e1.max(e2).max(e3)))
}

/// MONOTONICITY FOR GOODNESS on two unanimous homogeneous rater sets.
///
/// With equal fairness and `w1 > w2`, requires `g1 >= g2`. With equal
/// weights and `f1 > f2`, requires `g1 >= g2` for `w >= 0`; for negative
/// weights the goodness ordering reverses, so `|g1| >= |g2|` is required
/// instead.
pub fn check_monotonicity_pair(s1: (usize, f64, f64), s2: (usize, f64, f64)) -> Result<Check> {
    let (g1, e1) = goodness_of(&[s1])?;
    let (g2, e2) = goodness_of(&[s2])?;
    let cf = e1.max(e2);
    let (f1, w1) = (s1.1, s1.2);
    let (f2, w2) = (s2.1, s2.2);
    if f1 == f2 && w1 > w2 {
        Ok(Check::at_least(g1, g2, cf))
    } else if w1 == w2 && f1 > f2 {
        if w1 >= 0.0 {
            Ok(Check::at_least(g1, g2, cf))
        } else {
            Ok(Check::at_least(g1.abs(), g2.abs(), cf))
        }
    } else {
        Err(Error::InvalidParameters(
            "monotonicity pairs need equal fairness and w1 > w2, or equal weights and f1 > f2"
                .into(),
        ))
    }
}

/// GROUPS FOR GOODNESS: the mixed gadget's goodness equals the size-weighted
/// mean of the goodness each group produces alone.
pub fn check_groups_goodness(groups: &[(usize, f64, f64)]) -> Result<Check> {
    if groups.is_empty() || groups.iter().any(|g| g.0 == 0) {
        return Err(Error::InvalidParameters("groups must be non-empty".into()));
    }
    let (mixed, mut cf) = goodness_of(groups)?;
    let mut weighted = 0.0;
    let mut total = 0usize;
    for &group in groups {
        let (gi, e) = goodness_of(&[group])?;
        cf = cf.max(e);
        weighted += group.0 as f64 * gi;
        total += group.0;
    }
    Ok(Check::identity(mixed, weighted / total as f64, cf))
}

/// SMOOTH FAIRNESS: `f^{(d+D)/2} = (f^d + f^D) / 2` for a rater of `rated` nodes.
pub fn check_smooth_fairness(rated: usize, d: f64, big_d: f64) -> Result<Check> {
    let (mid, e1) = fairness_of(&[(rated, (d + big_d) / 2.0)])?;
    let (a, e2) = fairness_of(&[(rated, d)])?;
    let (b, e3) = fairness_of(&[(rated, big_d)])?;
    Ok(Check::identity(mid, (a + b) / 2.0, e1.max(e2).max(e3)))
}

/// MONOTONICITY FOR FAIRNESS: `d1 > d2` implies `f1 <= f2`.
pub fn check_monotonicity_fairness(s1: (usize, f64), s2: (usize, f64)) -> Result<Check> {
    if s1.1.partial_cmp(&s2.1) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidParameters("need d1 > d2".into()));
    }
    let (f1, e1) = fairness_of(&[s1])?;
    let (f2, e2) = fairness_of(&[s2])?;
    Ok(Check::at_least(f2, f1, e1.max(e2)))
}

/// OBVIOUS FAIRNESS METRIC. Error 0 is checked on a converged gadget. Error 2
/// cannot occur at a fixed point (the rater's own rating pulls the rated
/// node's goodness off ±1), so it is checked with a single fairness pass
/// against pinned goodness values of ±1.
pub fn check_obvious_fairness(rated: usize) -> Result<(Check, Check)> {
    let (exact, cf) = fairness_of(&[(rated, 0.0)])?;
    let zero_error = Check::identity(exact, 1.0, cf);

    let mut g = Wsn::with_nodes(rated + 1);
    let mut pinned = vec![1.0; rated + 1];
    for (i, p) in pinned.iter_mut().enumerate().skip(1) {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        g.add_edge(NodeId(0), NodeId::from(i), sign)?;
        *p = -sign;
    }
    let mut fairness = vec![0.0; rated + 1];
    fairness_pass(&g, &pinned, &mut fairness);
    let max_error = Check::identity(fairness[0], 0.0, 0.0);
    Ok((zero_error, max_error))
}

/// GROUPS FOR FAIRNESS: the mixed rater's fairness equals the size-weighted
/// mean of its fairness when rating each group alone.
pub fn check_groups_fairness(groups: &[(usize, f64)]) -> Result<Check> {
    if groups.is_empty() || groups.iter().any(|g| g.0 == 0) {
        return Err(Error::InvalidParameters("groups must be non-empty".into()));
    }
    let (mixed, mut cf) = fairness_of(groups)?;
    let mut weighted = 0.0;
    let mut total = 0usize;
    for &group in groups {
        let (fi, e) = fairness_of(&[group])?;
        cf = cf.max(e);
        weighted += group.0 as f64 * fi;
        total += group.0;
    }
    Ok(Check::identity(mixed, weighted / total as f64, cf))
}

/// MAXIMAL TRUST: `raters` raters of fairness 1 all rating +1, each also
/// rating `exact_sinks[i]` extra nodes without error.
pub fn check_maximal_trust(exact_sinks: &[usize]) -> Result<Check> {
    let mut g = Wsn::new();
    let target = g.add_labelled_node("target-");
    for &sinks in exact_sinks {
        let r = g.add_labelled_node("rater-");
        g.add_edge(r, target, 1.0)?;
        for _ in 0..sinks {
            attach_error_sink(&mut g, r, 1.0, 0.0)?;
        }
    }
    let s = converge(&g);
    let cf = g
        .predecessors(target)
        .iter()
        .map(|&(r, _)| (s.fairness(r) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Check::identity(s.goodness(target), 1.0, cf))
}

/// BASELINE FOR GOODNESS and BASELINE FOR FAIRNESS on an arbitrary graph:
/// the largest deviation from 1 over unrated nodes' goodness and over
/// non-rating nodes' fairness.
pub fn check_baselines(g: &Wsn) -> (Check, Check) {
    let s = compute_fga(g, &FgaConfig::default());
    let goodness_dev = g
        .nodes()
        .filter(|&v| g.indeg(v) == 0)
        .map(|v| (s.goodness(v) - 1.0).abs())
        .fold(0.0, f64::max);
    let fairness_dev = g
        .nodes()
        .filter(|&v| g.outdeg(v) == 0)
        .map(|v| (s.fairness(v) - 1.0).abs())
        .fold(0.0, f64::max);
    (
        Check::identity(1.0 - goodness_dev, 1.0, 0.0),
        Check::identity(1.0 - fairness_dev, 1.0, 0.0),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    SmoothGoodness,
    IncreaseWeight,
    MonotonicityForGoodness,
    MaximalTrust,
    GroupsForGoodness,
    BaselineForGoodness,
    SmoothFairness,
    MonotonicityForFairness,
    ObviousFairnessMetric,
    GroupsForFairness,
    BaselineForFairness,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::SmoothGoodness,
        Axiom::IncreaseWeight,
        Axiom::MonotonicityForGoodness,
        Axiom::MaximalTrust,
        Axiom::GroupsForGoodness,
        Axiom::BaselineForGoodness,
        Axiom::SmoothFairness,
        Axiom::MonotonicityForFairness,
        Axiom::ObviousFairnessMetric,
        Axiom::GroupsForFairness,
        Axiom::BaselineForFairness,
    ];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&a| a == self).expect("listed") + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::SmoothGoodness => "SMOOTH GOODNESS",
            Axiom::IncreaseWeight => "INCREASE WEIGHT",
            Axiom::MonotonicityForGoodness => "MONOTONICITY FOR GOODNESS",
            Axiom::MaximalTrust => "MAXIMAL TRUST",
            Axiom::GroupsForGoodness => "GROUPS FOR GOODNESS",
            Axiom::BaselineForGoodness => "BASELINE FOR GOODNESS",
            Axiom::SmoothFairness => "SMOOTH FAIRNESS",
            Axiom::MonotonicityForFairness => "MONOTONICITY FOR FAIRNESS",
            Axiom::ObviousFairnessMetric => "OBVIOUS FAIRNESS METRIC",
            Axiom::GroupsForFairness => "GROUPS FOR FAIRNESS",
            Axiom::BaselineForFairness => "BASELINE FOR FAIRNESS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub number: usize,
    pub name: String,
    pub draws: usize,
    pub passed: usize,
    pub max_error: f64,
    pub max_closed_form_error: f64,
    /// Up to five failure descriptions.
    pub failures: Vec<String>,
    pub pass: bool,
}

impl AxiomVerdict {
    fn from_results(axiom: Axiom, results: Vec<std::result::Result<Check, String>>) -> Self {
        let draws = results.len();
        let mut passed = 0;
        let mut max_error: f64 = 0.0;
        let mut max_cf: f64 = 0.0;
        let mut failures = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(c) => {
                    max_error = max_error.max(c.error);
                    max_cf = max_cf.max(c.closed_form_error);
                    if c.pass {
                        passed += 1;
                    } else if failures.len() < 5 {
                        failures.push(format!("draw {i}: {c:?}"));
                    }
                }
                Err(e) if failures.len() < 5 => failures.push(format!("draw {i}: {e}")),
                Err(_) => {}
            }
        }
        Self {
            axiom,
            number: axiom.number(),
            name: axiom.name().to_owned(),
            draws,
            passed,
            max_error,
            max_closed_form_error: max_cf,
            failures,
            pass: draws > 0 && passed == draws,
        }
    }
}

fn draw_rng(seed: u64, axiom: Axiom, draw: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((axiom.number() as u64) << 32) | draw as u64);
    rng
}

/// Lower end of the fairness values drawn for goodness gadgets; smaller
/// fairness needs very large gadgets.
const MIN_DRAWN_FAIRNESS: f64 = 0.05;
/// Upper end of drawn rating errors for converged fairness gadgets.
const MAX_DRAWN_ERROR: f64 = 1.95;

fn one_draw(axiom: Axiom, rng: &mut ChaCha8Rng) -> Result<Check> {
    let raters = |rng: &mut ChaCha8Rng| rng.gen_range(1..=4usize);
    let fairness = |rng: &mut ChaCha8Rng| rng.gen_range(MIN_DRAWN_FAIRNESS..=1.0);
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(-1.0..=1.0);
    let error = |rng: &mut ChaCha8Rng| rng.gen_range(0.0..=MAX_DRAWN_ERROR);
    match axiom {
        Axiom::SmoothGoodness => {
            let f0 = rng.gen_range(MIN_DRAWN_FAIRNESS..=1.0 - MIN_DRAWN_FAIRNESS);
            let delta = rng.gen_range(MIN_DRAWN_FAIRNESS..=1.0 - f0);
            let n = raters(rng);
            check_smooth_goodness(n, f0, delta, weight(rng))
        }
        Axiom::IncreaseWeight => {
            let omega0 = weight(rng);
            let delta = rng.gen_range((-1.0 - omega0).max(-1.0)..=(1.0 - omega0).min(1.0));
            let n = raters(rng);
            check_increase_weight(n, fairness(rng), omega0, delta)
        }
        Axiom::MonotonicityForGoodness => {
            let (n1, n2) = (raters(rng), raters(rng));
            if rng.gen_bool(0.5) {
                let f = fairness(rng);
                let (a, b) = (weight(rng), weight(rng));
                let (w1, w2) = if a > b { (a, b) } else { (b, a) };
                if w1 == w2 {
                    return check_monotonicity_pair((n1, f, 1.0), (n2, f, -1.0));
                }
                check_monotonicity_pair((n1, f, w1), (n2, f, w2))
            } else {
                let w = weight(rng);
                let (a, b) = (fairness(rng), fairness(rng));
                let (f1, f2) = if a > b { (a, b) } else { (b, a) };
                if f1 == f2 {
                    return check_monotonicity_pair((n1, 1.0, w), (n2, 0.5, w));
                }
                check_monotonicity_pair((n1, f1, w), (n2, f2, w))
            }
        }
        Axiom::MaximalTrust => {
            let sinks: Vec<usize> = (0..rng.gen_range(1..=6))
                .map(|_| rng.gen_range(0..=3))
                .collect();
            check_maximal_trust(&sinks)
        }
        Axiom::GroupsForGoodness => {
            let groups: Vec<_> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    (
                        raters(rng),
                        rng.gen_range(MIN_DRAWN_FAIRNESS..=0.95),
                        weight(rng),
                    )
                })
                .collect();
            check_groups_goodness(&groups)
        }
        Axiom::BaselineForGoodness | Axiom::BaselineForFairness => {
            let n = rng.gen_range(2..=30usize);
            let m = rng.gen_range(0..=(n * (n - 1)).min(3 * n));
            let g = random_erdos(n, m, rng.gen_range(0.0..=1.0), rng.gen())?;
            let (good, fair) = check_baselines(&g);
            Ok(if axiom == Axiom::BaselineForGoodness {
                good
            } else {
                fair
            })
        }
        Axiom::SmoothFairness => {
            let n = raters(rng);
            check_smooth_fairness(n, error(rng), error(rng))
        }
        Axiom::MonotonicityForFairness => {
            let (a, b) = (error(rng), error(rng));
            let (d1, d2) = if a > b { (a, b) } else { (b, a) };
            let (n1, n2) = (raters(rng), raters(rng));
            if d1 == d2 {
                return check_monotonicity_fairness((n1, 1.0), (n2, 0.5));
            }
            check_monotonicity_fairness((n1, d1), (n2, d2))
        }
        Axiom::ObviousFairnessMetric => {
            let (zero, max) = check_obvious_fairness(raters(rng))?;
            Ok(if zero.error >= max.error { zero } else { max }).map(|mut c| {
                c.pass = zero.pass && max.pass;
                c
            })
        }
        Axiom::GroupsForFairness => {
            let groups: Vec<_> = (0..rng.gen_range(1..=4))
                .map(|_| (raters(rng), error(rng)))
                .collect();
            check_groups_fairness(&groups)
        }
    }
}

/// Runs `draws` seeded random instances of one axiom.
pub fn check_axiom(axiom: Axiom, draws: usize, seed: u64) -> AxiomVerdict {
    let results: Vec<_> = (0..draws)
        .into_par_iter()
        .map(|i| one_draw(axiom, &mut draw_rng(seed, axiom, i)).map_err(|e| e.to_string()))
        .collect();
    AxiomVerdict::from_results(axiom, results)
}

/// All eleven axioms, `draws` instances each.
pub fn run_axiom_suite(draws: usize, seed: u64) -> Vec<AxiomVerdict> {
    Axiom::ALL
        .iter()
        .map(|&a| check_axiom(a, draws, seed))
        .collect()
}
