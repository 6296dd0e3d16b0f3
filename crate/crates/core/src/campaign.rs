//! Repeated seeded attack experiments over a grid of attacker-set sizes, with
//! per-cell summaries and CSV/JSON reports.
//!
//! Every sample draws from its own generator, seeded from the campaign seed
//! with stream `cell * samples + sample`, so results do not depend on how
//! samples are scheduled.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{
    direct_attack, indirect_attack_greedy, indirect_attack_scaled, mixed_attack, select_attackers,
    select_targets, AttackOptions, AttackerClass, SelectionCriteria, DEFAULT_MAX_EDGES,
    DEFAULT_SCALE,
};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fga::{compute_fga, FgaConfig, FgaScores};
use crate::wsn::Wsn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackMode {
    Direct,
    Indirect,
    IndirectScaled,
    Mixed,
}

impl std::str::FromStr for AttackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(AttackMode::Direct),
            "indirect" => Ok(AttackMode::Indirect),
            "indirect-scaled" | "scaled" => Ok(AttackMode::IndirectScaled),
            "mixed" => Ok(AttackMode::Mixed),
            _ => Err(Error::InvalidParameters(format!(
                "unknown attack mode {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Free-form description of the graph, copied into reports.
    pub source: String,
    pub mode: AttackMode,
    /// Attacker-set sizes; for mixed campaigns, the direct sizes `k1`.
    pub ks: Vec<usize>,
    /// Indirect sizes `k2` for mixed campaigns.
    pub k2s: Vec<usize>,
    pub attacker_class: AttackerClass,
    pub samples: usize,
    pub selection: SelectionCriteria,
    pub scale: usize,
    pub max_edges: usize,
    pub seed: u64,
    pub cold: bool,
    pub fga: FgaConfig,
}

impl ExperimentConfig {
    pub fn new(source: impl Into<String>, mode: AttackMode, seed: u64) -> Self {
        let (ks, k2s) = match mode {
            AttackMode::Mixed => ((1..=6).collect(), (1..=6).collect()),
            AttackMode::IndirectScaled => (vec![20], Vec::new()),
            _ => ((1..=7).collect(), Vec::new()),
        };
        Self {
            source: source.into(),
            mode,
            ks,
            k2s,
            attacker_class: AttackerClass::Established,
            samples: 20,
            selection: SelectionCriteria {
                seed,
                ..Default::default()
            },
            scale: DEFAULT_SCALE,
            max_edges: DEFAULT_MAX_EDGES,
            seed,
            cold: false,
            fga: FgaConfig::default(),
        }
    }

    /// Defaults for a public dataset: target search parameters and sample
    /// counts per dataset for the scaled attack, per-dataset minimum sample
    /// counts otherwise.
    pub fn preset(dataset: Dataset, mode: AttackMode, seed: u64) -> Self {
        let p = dataset.profile();
        let mut cfg = Self::new(format!("{dataset:?}"), mode, seed);
        match mode {
            AttackMode::IndirectScaled => {
                cfg.ks = vec![p.scaled_attackers];
                cfg.samples = p.scaled_samples;
                cfg.selection.target_max_indeg = p.target_max_indeg;
                cfg.selection.target_min_goodness = p.target_min_goodness;
            }
            AttackMode::Mixed => cfg.samples = p.mixed_samples,
            _ => cfg.samples = p.campaign_samples,
        }
        cfg
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        match self.mode {
            AttackMode::Mixed => self
                .ks
                .iter()
                .flat_map(|&k1| self.k2s.iter().map(move |&k2| (k1, k2)))
                .collect(),
            _ => self.ks.iter().map(|&k| (k, 0)).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mode == AttackMode::Mixed && self.k2s.is_empty() {
            return Err(Error::InvalidParameters(
                "mixed campaigns need k2 values".into(),
            ));
        }
        if self.scale == 0 || self.max_edges == 0 {
            return Err(Error::InvalidParameters(
                "scale and max edges must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One attack run. Deltas are signed goodness changes of the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub cell: usize,
    pub k1: usize,
    pub k2: usize,
    pub sample: usize,
    pub target: String,
    pub attackers: Vec<String>,
    pub moves: usize,
    pub exhausted: bool,
    pub delta: f64,
    pub delta_direct: f64,
    pub delta_indirect: f64,
}

/// Statistics of `|Δ|` over a cell's samples. `sd` and `ci_half_width` are
/// undefined for a single sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub q75: f64,
    /// `1.96 sd / √n`
    pub ci_half_width: Option<f64>,
}

/// Linear-interpolation quantile of sorted values.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (n > 1)
        .then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
    Some(Summary {
        n,
        mean,
        sd,
        min: sorted[0],
        max: sorted[n - 1],
        median: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        ci_half_width: sd.map(|s| 1.96 * s / (n as f64).sqrt()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub k1: usize,
    pub k2: usize,
    /// Over `|Δ|` (the total change for mixed cells).
    pub summary: Option<Summary>,
    pub mean_abs_delta_direct: Option<f64>,
    pub mean_abs_delta_indirect: Option<f64>,
    /// Why the cell has no samples, e.g. too few qualifying nodes.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub cells: Vec<CellSummary>,
    pub records: Vec<SampleRecord>,
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_sample(
    g: &Wsn,
    scores: &FgaScores,
    cfg: &ExperimentConfig,
    cell: usize,
    (k1, k2): (usize, usize),
    sample: usize,
) -> Result<SampleRecord> {
    let mut rng = sample_rng(cfg.seed, (cell * cfg.samples + sample) as u64);
    let opts = AttackOptions {
        fga: cfg.fga,
        cold: cfg.cold,
    };
    let t = select_targets(g, scores, &cfg.selection, 1, &mut rng)?[0];
    let mut attackers = select_attackers(
        g,
        scores,
        &cfg.selection,
        cfg.attacker_class,
        k1 + k2,
        &[t],
        &mut rng,
    )?;
    attackers.shuffle(&mut rng);

    let (out, delta_direct, delta_indirect) = match cfg.mode {
        AttackMode::Direct => {
            let o = direct_attack(g, &attackers, t, &opts)?;
            let d = o.delta();
            (o, d, 0.0)
        }
        AttackMode::Indirect => {
            let o = indirect_attack_greedy(g, &attackers, t, &opts)?;
            let d = o.delta();
            (o, 0.0, d)
        }
        AttackMode::IndirectScaled => {
            let o = indirect_attack_scaled(g, &attackers, t, cfg.scale, cfg.max_edges, &opts)?;
            let d = o.delta();
            (o, 0.0, d)
        }
        AttackMode::Mixed => {
            let m = mixed_attack(g, &attackers[..k1], &attackers[k1..], t, &opts)?;
            (m.outcome, m.delta_direct, m.delta_indirect)
        }
    };
    Ok(SampleRecord {
        cell,
        k1,
        k2,
        sample,
        target: g.label(t).to_owned(),
        attackers: attackers.iter().map(|&a| g.label(a).to_owned()).collect(),
        moves: out.moves.len(),
        exhausted: out.exhausted,
        delta: out.delta(),
        delta_direct,
        delta_indirect,
    })
}

fn mean_abs(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x.abs(), n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn summarize_cells(
    cfg: &ExperimentConfig,
    records: &[SampleRecord],
    errors: &[Option<String>],
) -> Vec<CellSummary> {
    cfg.cells()
        .into_iter()
        .enumerate()
        .map(|(cell, (k1, k2))| {
            let rs: Vec<&SampleRecord> = records.iter().filter(|r| r.cell == cell).collect();
            let abs: Vec<f64> = rs.iter().map(|r| r.delta.abs()).collect();
            let mixed = cfg.mode == AttackMode::Mixed;
            CellSummary {
                cell,
                k1,
                k2,
                summary: summarize(&abs),
                mean_abs_delta_direct: if mixed {
                    mean_abs(rs.iter().map(|r| r.delta_direct))
                } else {
                    None
                },
                mean_abs_delta_indirect: if mixed {
                    mean_abs(rs.iter().map(|r| r.delta_indirect))
                } else {
                    None
                },
                error: errors[cell].clone(),
            }
        })
        .collect()
}

/// Runs every (cell, sample) pair, in parallel when `parallel` is set.
/// Samples failing for lack of qualifying nodes are dropped and the first
/// such error is kept on the cell; any other error aborts the campaign.
pub fn run_campaign_with(
    g: &Wsn,
    cfg: &ExperimentConfig,
    parallel: bool,
) -> Result<CampaignResult> {
    cfg.validate()?;
    let scores = compute_fga(g, &cfg.fga);
    let jobs: Vec<(usize, (usize, usize), usize)> = cfg
        .cells()
        .into_iter()
        .enumerate()
        .flat_map(|(c, ks)| (0..cfg.samples).map(move |s| (c, ks, s)))
        .collect();
    let run = |&(c, ks, s): &(usize, (usize, usize), usize)| run_sample(g, &scores, cfg, c, ks, s);
    let results: Vec<Result<SampleRecord>> = if parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };

    let mut errors: Vec<Option<String>> = vec![None; cfg.cells().len()];
    let mut records = Vec::new();
    for (job, r) in jobs.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e @ Error::InsufficientCandidates { .. }) => {
                errors[job.0].get_or_insert_with(|| e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    let cells = summarize_cells(cfg, &records, &errors);
    Ok(CampaignResult {
        seed: cfg.seed,
        config: cfg.clone(),
        cells,
        records,
    })
}

pub fn run_campaign(g: &Wsn, cfg: &ExperimentConfig) -> Result<CampaignResult> {
    run_campaign_with(g, cfg, true)
}

const NA: &str = "NA";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_owned(), |v| v.to_string())
}

pub fn to_json(result: &CampaignResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(result)?)
}

/// One row per cell; undefined statistics are written as `NA`.
pub fn write_summary_csv<W: Write>(result: &CampaignResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "seed",
        "mode",
        "cell",
        "k1",
        "k2",
        "n",
        "mean",
        "sd",
        "min",
        "max",
        "median",
        "q75",
        "ci_half_width",
        "mean_abs_delta_direct",
        "mean_abs_delta_indirect",
        "error",
    ])?;
    let mode = serde_json::to_value(result.config.mode)?;
    let mode = mode.as_str().unwrap_or_default().to_owned();
    for c in &result.cells {
        let s = c.summary.as_ref();
        w.write_record([
            result.seed.to_string(),
            mode.clone(),
            c.cell.to_string(),
            c.k1.to_string(),
            c.k2.to_string(),
            s.map_or(0, |s| s.n).to_string(),
            opt(s.map(|s| s.mean)),
            opt(s.and_then(|s| s.sd)),
            opt(s.map(|s| s.min)),
            opt(s.map(|s| s.max)),
            opt(s.map(|s| s.median)),
            opt(s.map(|s| s.q75)),
            opt(s.and_then(|s| s.ci_half_width)),
            opt(c.mean_abs_delta_direct),
            opt(c.mean_abs_delta_indirect),
            c.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per sample; attacker labels are joined with `;`.
pub fn write_records_csv<W: Write>(result: &CampaignResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "seed",
        "cell",
        "k1",
        "k2",
        "sample",
        "target",
        "attackers",
        "moves",
        "exhausted",
        "delta",
        "delta_direct",
        "delta_indirect",
    ])?;
    for r in &result.records {
        w.write_record([
            result.seed.to_string(),
            r.cell.to_string(),
            r.k1.to_string(),
            r.k2.to_string(),
            r.sample.to_string(),
            r.target.clone(),
            r.attackers.join(";"),
            r.moves.to_string(),
            r.exhausted.to_string(),
            r.delta.to_string(),
            r.delta_direct.to_string(),
            r.delta_indirect.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::random_erdos;

    #[test]
    fn summary_statistics() {
        let s = summarize(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.n, 4);
        assert_eq!(s.mean, 2.5);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q75, 3.25);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((s.sd.unwrap() - sd).abs() < 1e-15);
        assert!((s.ci_half_width.unwrap() - 1.96 * sd / 2.0).abs() < 1e-15);

        let one = summarize(&[0.3]).unwrap();
        assert_eq!(one.sd, None);
        assert_eq!(one.ci_half_width, None);
        assert_eq!(one.median, 0.3);
        assert!(summarize(&[]).is_none());
    }

    fn graph() -> Wsn {
        random_erdos(60, 400, 0.85, 9).unwrap()
    }

    fn small(mode: AttackMode) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new("erdos", mode, 3);
        cfg.samples = 3;
        cfg.attacker_class = AttackerClass::Fresh;
        cfg.selection.fresh_max_indeg = 60;
        cfg.selection.target_max_indeg = 60;
        cfg.ks = vec![0, 1, 2];
        cfg.k2s = vec![0, 1];
        cfg.selection.target_min_goodness = -1.0;
        cfg
    }

    #[test]
    fn zero_attackers_change_nothing() {
        let mut g = graph();
        for _ in 0..5 {
            let v = g.add_node();
            g.add_edge(crate::wsn::NodeId(0), v, 1.0).unwrap();
        }
        let r = run_campaign(&g, &small(AttackMode::Direct)).unwrap();
        assert!(r
            .records
            .iter()
            .filter(|r| r.k1 == 0)
            .all(|r| r.delta == 0.0 && r.moves == 0));
        assert_eq!(r.cells.len(), 3);
    }

    #[test]
    fn insufficient_candidates_are_reported_per_cell() {
        let g = graph();
        let mut cfg = small(AttackMode::Direct);
        cfg.ks = vec![1, 1000];
        let r = run_campaign(&g, &cfg).unwrap();
        assert!(r.cells[1].error.is_some());
        assert!(r.cells[1].summary.is_none());
    }

    #[test]
    fn mixed_records_decompose() {
        let mut g = graph();
        for i in 0..10 {
            let v = g.add_node();
            g.add_edge(crate::wsn::NodeId(i), v, 1.0).unwrap();
        }
        let r = run_campaign(&g, &small(AttackMode::Mixed)).unwrap();
        assert_eq!(r.cells.len(), 6);
        for rec in &r.records {
            assert_eq!(rec.delta_direct + rec.delta_indirect, rec.delta);
        }
    }

    #[test]
    fn empty_campaign_writes_headers() {
        let g = graph();
        let mut cfg = small(AttackMode::Direct);
        cfg.ks.clear();
        let r = run_campaign(&g, &cfg).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
        assert!(to_json(&r).unwrap().contains("\"records\": []"));
    }
}
