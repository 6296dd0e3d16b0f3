use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fga::FgaScores;
use crate::wsn::{NodeId, Wsn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackerClass {
    /// Many outgoing ratings and high fairness.
    Established,
    /// Rated by a few nodes, rates nobody yet.
    Fresh,
}

impl std::str::FromStr for AttackerClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "established" => Ok(AttackerClass::Established),
            "fresh" | "not-established" => Ok(AttackerClass::Fresh),
            _ => Err(Error::InvalidParameters(format!(
                "unknown attacker class {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionCriteria {
    /// Targets need `0 < indeg <= target_max_indeg`.
    pub target_max_indeg: usize,
    pub target_min_goodness: f64,
    /// Established attackers need `outdeg > established_min_outdeg`.
    pub established_min_outdeg: usize,
    /// Established attackers need `f > established_min_fairness`.
    pub established_min_fairness: f64,
    /// Fresh attackers need `0 < indeg <= fresh_max_indeg` and `outdeg = 0`.
    pub fresh_max_indeg: usize,
    pub seed: u64,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        Self {
            target_max_indeg: 9,
            target_min_goodness: 0.5,
            established_min_outdeg: 5,
            established_min_fairness: 0.7,
            fresh_max_indeg: 9,
            seed: 0,
        }
    }
}

impl SelectionCriteria {
    pub fn is_target(&self, g: &Wsn, s: &FgaScores, v: NodeId) -> bool {
        let d = g.indeg(v);
        d > 0 && d <= self.target_max_indeg && s.goodness(v) >= self.target_min_goodness
    }

    pub fn is_attacker(&self, g: &Wsn, s: &FgaScores, v: NodeId, class: AttackerClass) -> bool {
        match class {
            AttackerClass::Established => {
                g.outdeg(v) > self.established_min_outdeg
                    && s.fairness(v) > self.established_min_fairness
            }
            AttackerClass::Fresh => {
                let d = g.indeg(v);
                d > 0 && d <= self.fresh_max_indeg && g.outdeg(v) == 0
            }
        }
    }
}

fn sample_from<R: Rng>(pool: Vec<NodeId>, n: usize, rng: &mut R) -> Result<Vec<NodeId>> {
    if pool.len() < n {
        return Err(Error::InsufficientCandidates {
            requested: n,
            available: pool.len(),
        });
    }
    let mut picked: Vec<NodeId> = sample(rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort();
    Ok(picked)
}

/// `n` distinct qualifying targets, sampled uniformly, in id order.
pub fn select_targets<R: Rng>(
    g: &Wsn,
    s: &FgaScores,
    c: &SelectionCriteria,
    n: usize,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    let pool = g.nodes().filter(|&v| c.is_target(g, s, v)).collect();
    sample_from(pool, n, rng)
}

/// `n` distinct qualifying attackers outside `exclude`, sampled uniformly, in
/// id order.
pub fn select_attackers<R: Rng>(
    g: &Wsn,
    s: &FgaScores,
    c: &SelectionCriteria,
    class: AttackerClass,
    n: usize,
    exclude: &[NodeId],
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    let pool = g
        .nodes()
        .filter(|v| !exclude.contains(v) && c.is_attacker(g, s, *v, class))
        .collect();
    sample_from(pool, n, rng)
}

impl SelectionCriteria {
    /// A generator seeded from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
