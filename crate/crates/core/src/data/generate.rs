//! Seeded synthetic networks.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{FairnessGadget, GoodnessGadget};
use crate::error::{Error, Result};
use crate::wsn::{NodeId, Wsn};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// k-in/k-out regular digraph with uniform weights in [-1, 1].
    MinKNeighbour { n: usize, k: usize },
    /// Node 0 rated +1 by `k` influencers and `l` stabilisers.
    StabilisedStar { k: usize, l: usize },
    /// Every ordered pair rated +1.
    CompletePositive { n: usize },
    /// `m` distinct random edges; each positive with probability
    /// `positive_fraction`, magnitude uniform in (0, 1].
    RandomErdos {
        n: usize,
        m: usize,
        positive_fraction: f64,
    },
    /// Axiom gadget: `raters` nodes of fairness `fairness` all rating node 0
    /// with `rating`.
    GoodnessGadget {
        raters: usize,
        fairness: f64,
        rating: f64,
    },
    /// Axiom gadget: node 0 rates `rated` nodes, each with rating error `error`.
    FairnessGadget { rated: usize, error: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn generate(&self) -> Result<Wsn> {
        generate(&self.kind, self.seed)
    }
}

pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<Wsn> {
    match *kind {
        GeneratorKind::MinKNeighbour { n, k } => generate_min_k_neighbour(n, k, seed),
        GeneratorKind::RandomErdos {
            n,
            m,
            positive_fraction,
        } => random_erdos(n, m, positive_fraction, seed),
        _ => generate_gadget(kind),
    }
}

/// Deterministic gadget constructions (the seed is not used).
pub fn generate_gadget(kind: &GeneratorKind) -> Result<Wsn> {
    match *kind {
        GeneratorKind::StabilisedStar { k, l } => stabilised_star(k, l),
        GeneratorKind::CompletePositive { n } => complete_positive(n),
        GeneratorKind::GoodnessGadget {
            raters,
            fairness,
            rating,
        } => Ok(GoodnessGadget::build(&[(raters, fairness, rating)])?.graph),
        GeneratorKind::FairnessGadget { rated, error } => {
            Ok(FairnessGadget::build(&[(rated, error)])?.graph)
        }
        GeneratorKind::MinKNeighbour { .. } | GeneratorKind::RandomErdos { .. } => Err(
            Error::InvalidParameters("random generators are not gadgets".into()),
        ),
    }
}

/// Random digraph where every node has exactly `k` in- and out-neighbours and
/// weights are i.i.d. uniform on [-1, 1], so incoming weight mass is at most `k`.
///
/// Built from a circulant digraph with random distinct offsets, then mixed
/// with degree-preserving double-edge swaps.
pub fn generate_min_k_neighbour(n: usize, k: usize, seed: u64) -> Result<Wsn> {
    if k == 0 || n <= k {
        return Err(Error::InvalidParameters(format!(
            "minimum-{k}-neighbour network needs n > k >= 1, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offsets: Vec<usize> = (1..n).collect();
    offsets.shuffle(&mut rng);
    offsets.truncate(k);

    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| offsets.iter().map(move |&s| (u, (u + s) % n)))
        .collect();
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();

    for _ in 0..10 * edges.len() {
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        let ((a, b), (c, d)) = (edges[i], edges[j]);
        if i == j || a == d || c == b || present.contains(&(a, d)) || present.contains(&(c, b)) {
            continue;
        }
        present.remove(&(a, b));
        present.remove(&(c, d));
        present.insert((a, d));
        present.insert((c, b));
        edges[i] = (a, d);
        edges[j] = (c, b);
    }
    edges.sort_unstable();

    let mut g = Wsn::with_nodes(n);
    for (u, v) in edges {
        let w = rng.gen_range(-1.0..=1.0);
        g.add_edge(NodeId::from(u), NodeId::from(v), w)?;
    }
    Ok(g)
}

/// `m` distinct directed edges chosen uniformly among the `n(n-1)` pairs.
pub fn random_erdos(n: usize, m: usize, positive_fraction: f64, seed: u64) -> Result<Wsn> {
    let pairs = n.saturating_mul(n.saturating_sub(1));
    if m > pairs {
        return Err(Error::InvalidParameters(format!(
            "{m} edges requested but only {pairs} ordered pairs exist"
        )));
    }
    if !(0.0..=1.0).contains(&positive_fraction) {
        return Err(Error::InvalidParameters(format!(
            "positive_fraction must lie in [0, 1], got {positive_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Wsn::with_nodes(n);
    while g.edge_count() < m {
        let u = NodeId::from(rng.gen_range(0..n));
        let v = NodeId::from(rng.gen_range(0..n));
        if u == v || g.has_edge(u, v) {
            continue;
        }
        let magnitude: f64 = 1.0 - rng.gen::<f64>();
        let w = if rng.gen_bool(positive_fraction) {
            magnitude
        } else {
            -magnitude
        };
        g.add_edge(u, v, w)?;
    }
    Ok(g)
}

/// Node 0 is the rated node, nodes `1..=k` the influencers and the rest the
/// stabilisers. All ratings are +1.
pub fn stabilised_star(k: usize, l: usize) -> Result<Wsn> {
    if k + l == 0 {
        return Err(Error::InvalidParameters(
            "stabilised star needs at least one rater".into(),
        ));
    }
    let mut g = Wsn::with_nodes(1 + k + l);
    for r in 1..=k + l {
        g.add_edge(NodeId::from(r), NodeId(0), 1.0)?;
    }
    Ok(g)
}

pub fn complete_positive(n: usize) -> Result<Wsn> {
    if n == 0 {
        return Err(Error::InvalidParameters(
            "complete network needs n >= 1".into(),
        ));
    }
    let mut g = Wsn::with_nodes(n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                g.add_edge(NodeId::from(u), NodeId::from(v), 1.0)?;
            }
        }
    }
    Ok(g)
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::MinKNeighbour { n, k } => write!(f, "min-k:n={n},k={k}"),
            GeneratorKind::StabilisedStar { k, l } => write!(f, "star:k={k},l={l}"),
            GeneratorKind::CompletePositive { n } => write!(f, "complete:n={n}"),
            GeneratorKind::RandomErdos {
                n,
                m,
                positive_fraction,
            } => write!(f, "erdos:n={n},m={m},pos={positive_fraction}"),
            GeneratorKind::GoodnessGadget {
                raters,
                fairness,
                rating,
            } => write!(f, "goodness-gadget:raters={raters},f={fairness},w={rating}"),
            GeneratorKind::FairnessGadget { rated, error } => {
                write!(f, "fairness-gadget:rated={rated},d={error}")
            }
        }
    }
}

/// Parses `kind:key=value,...`, e.g. `min-k:n=30,k=3` or `erdos:n=200,m=1000,pos=0.9`.
impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameters(format!("generator {s:?}: {msg}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::HashMap::new();
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {kv:?}")))?;
            params.insert(k.trim(), v.trim());
        }
        let get = |key: &str| -> Result<f64> {
            params
                .get(key)
                .ok_or_else(|| bad(format!("missing {key}")))?
                .parse::<f64>()
                .map_err(|_| bad(format!("{key} is not a number")))
        };
        let count = |key: &str| -> Result<usize> {
            let x = get(key)?;
            if x < 0.0 || x.fract() != 0.0 {
                return Err(bad(format!("{key} must be a non-negative integer")));
            }
            Ok(x as usize)
        };
        match kind {
            "min-k" => Ok(GeneratorKind::MinKNeighbour {
                n: count("n")?,
                k: count("k")?,
            }),
            "star" => Ok(GeneratorKind::StabilisedStar {
                k: count("k")?,
                l: count("l")?,
            }),
            "complete" => Ok(GeneratorKind::CompletePositive { n: count("n")? }),
            "erdos" => Ok(GeneratorKind::RandomErdos {
                n: count("n")?,
                m: count("m")?,
                positive_fraction: if params.contains_key("pos") {
                    get("pos")?
                } else {
                    0.5
                },
            }),
            "goodness-gadget" => Ok(GeneratorKind::GoodnessGadget {
                raters: count("raters")?,
                fairness: get("f")?,
                rating: get("w")?,
            }),
            "fairness-gadget" => Ok(GeneratorKind::FairnessGadget {
                rated: count("rated")?,
                error: get("d")?,
            }),
            other => Err(bad(format!("unknown generator kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::{compute_fga, FgaConfig};

    #[test]
    fn min_k_degrees_are_exact() {
        let g = generate_min_k_neighbour(10, 3, 7).unwrap();
        for v in g.nodes() {
            assert_eq!(g.indeg(v), 3);
            assert_eq!(g.outdeg(v), 3);
        }
        assert!(matches!(
            generate_min_k_neighbour(3, 3, 1),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn min_k_is_seed_deterministic() {
        let a = generate_min_k_neighbour(30, 5, 42).unwrap();
        let b = generate_min_k_neighbour(30, 5, 42).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        let c = generate_min_k_neighbour(30, 5, 43).unwrap();
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    }

    #[test]
    fn star_and_complete() {
        let g = stabilised_star(2, 5).unwrap();
        assert_eq!(g.indeg(NodeId(0)), 7);
        assert!(g.predecessors(NodeId(0)).iter().all(|&(_, w)| w == 1.0));

        let g = complete_positive(4).unwrap();
        assert_eq!(g.edge_count(), 12);
        let s = compute_fga(&g, &FgaConfig::default());
        assert!(s.fairness.iter().chain(&s.goodness).all(|&x| x == 1.0));
    }

    #[test]
    fn erdos_counts() {
        let g = random_erdos(20, 60, 0.8, 3).unwrap();
        assert_eq!(g.edge_count(), 60);
        assert!(random_erdos(3, 7, 0.5, 0).is_err());
    }

    #[test]
    fn gadget_rejects_unrealizable_fairness() {
        let kind = GeneratorKind::GoodnessGadget {
            raters: 3,
            fairness: 0.0,
            rating: 1.0,
        };
        assert!(matches!(
            generate_gadget(&kind),
            Err(Error::Unrealizable(_))
        ));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            "min-k:n=30,k=3".parse::<GeneratorKind>().unwrap(),
            GeneratorKind::MinKNeighbour { n: 30, k: 3 }
        );
        let k: GeneratorKind = "erdos:n=10,m=20,pos=0.9".parse().unwrap();
        assert_eq!(k.to_string().parse::<GeneratorKind>().unwrap(), k);
        assert!("bogus:n=1".parse::<GeneratorKind>().is_err());
        assert!("star:k=1".parse::<GeneratorKind>().is_err());
    }
}
