use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fga_core::attacks::{
    direct_attack, greedy_candidates, indirect_attack_greedy, indirect_attack_scaled, mixed_attack,
    select_attackers, select_targets, solve_exhaustive, AttackOptions, AttackOutcome,
    AttackProblem, AttackerClass, Direction, SelectionCriteria, Targets,
};
use fga_core::axioms::run_axiom_suite;
use fga_core::bounds::{
    verify_bound_empirically, verify_flip, verify_stabiliser, BoundReport, Scenario,
};
use fga_core::campaign::{
    run_campaign_with, to_json, write_records_csv, write_summary_csv, AttackMode, ExperimentConfig,
};
use fga_core::data::{
    compute_stats, generate, load_rating_csv, write_scores_csv, Dataset, GeneratorKind,
    StatsThresholds, DATA_DIR_ENV,
};
use fga_core::{compute_fga, predict_weight, Error, FgaConfig, NodeId, RatingScale, Wsn};

const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_INSUFFICIENT_DATA: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

/// A check that ran and found its property violated.
#[derive(Debug)]
struct InvariantViolation(String);

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvariantViolation {}

/// Input data that is missing or too thin for the request.
#[derive(Debug)]
struct InsufficientData(String);

impl std::fmt::Display for InsufficientData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InsufficientData {}

#[derive(Parser, Debug)]
#[command(
    name = "fga",
    version,
    about = "Fairness and goodness on weighted signed networks"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory holding the public dataset files.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,

    /// Write outputs under this directory instead of stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    /// Rating CSV (`source,target,rating[,time]`).
    #[arg(long, conflicts_with_all = ["dataset", "generate"])]
    input: Option<PathBuf>,

    /// Largest absolute raw rating in `--input`.
    #[arg(long, default_value_t = 1.0)]
    r_max: f64,

    /// otc, alpha or rfa, looked up in the data directory.
    #[arg(long, conflicts_with = "generate")]
    dataset: Option<String>,

    /// Generator spec, e.g. `min-k:n=30,k=3` or `erdos:n=50,m=200,pos=0.8`.
    #[arg(long)]
    generate: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,

    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
}

impl SolverArgs {
    fn config(&self) -> anyhow::Result<FgaConfig> {
        Ok(FgaConfig::new(self.max_iterations, self.tolerance)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Indirect,
    IndirectScaled,
    Mixed,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Established,
    Fresh,
}

impl From<ClassArg> for AttackerClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Established => AttackerClass::Established,
            ClassArg::Fresh => AttackerClass::Fresh,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    DirectSybil,
    IndirectSybil,
    Stabiliser,
    Flip,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fairness and goodness of every node.
    Compute {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted rating `f(u)·g(v)` of one pair.
    Predict {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Network and score statistics as JSON.
    Stats {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks every axiom on seeded random gadgets.
    Axioms {
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs one attack on one target.
    Attack {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Target label; drawn from qualifying nodes when omitted.
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated attacker labels; drawn by class when omitted.
        #[arg(long, value_delimiter = ',')]
        attackers: Vec<String>,
        /// Attacker count (and move budget for exhaustive search).
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        k1: Option<usize>,
        #[arg(long)]
        k2: Option<usize>,
        #[arg(long, default_value_t = fga_core::attacks::DEFAULT_SCALE)]
        scale: usize,
        #[arg(long, default_value_t = fga_core::attacks::DEFAULT_MAX_EDGES)]
        max_edges: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Established)]
        attacker_class: ClassArg,
        /// Goal for exhaustive search: target goodness below this value.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        threshold: f64,
        #[arg(long)]
        cold: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks attack-strength bounds on seeded trials (CSV rows).
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        /// Neighbour bound for indirect trials; influencer count for the stabiliser gadget.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Stabiliser count.
        #[arg(long, default_value_t = 5)]
        l: usize,
        /// Influencer fairness drop.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated seeded attacks over a grid of attacker counts.
    Campaign {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Attacker counts (direct sizes for mixed); defaults depend on the mode.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Indirect sizes for mixed campaigns.
        #[arg(long, value_delimiter = ',')]
        k2: Vec<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value_t = ClassArg::Established)]
        attacker_class: ClassArg,
        #[arg(long, default_value_t = fga_core::attacks::DEFAULT_SCALE)]
        scale: usize,
        #[arg(long, default_value_t = fga_core::attacks::DEFAULT_MAX_EDGES)]
        max_edges: usize,
        /// Recompute scores from scratch after every move.
        #[arg(long)]
        cold: bool,
        /// Run samples one at a time.
        #[arg(long)]
        serial: bool,
    },
}

fn load_graph(args: &GraphArgs, cli: &Cli) -> anyhow::Result<(Wsn, String, Option<Dataset>)> {
    if let Some(path) = &args.input {
        let scale = RatingScale::new(args.r_max)?;
        let g = load_rating_csv(path, scale)?;
        return Ok((g, path.display().to_string(), None));
    }
    if let Some(name) = &args.dataset {
        let ds = Dataset::parse(name)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown dataset {name:?}")))?;
        let dir = cli.data_dir.clone().ok_or_else(|| {
            InsufficientData(format!(
                "no data directory; set --data-dir or {DATA_DIR_ENV}"
            ))
        })?;
        if ds.locate(&dir).is_none() {
            return Err(InsufficientData(format!(
                "{} not found in {}",
                ds.file_name(),
                dir.display()
            ))
            .into());
        }
        return Ok((ds.load(&dir)?, name.clone(), Some(ds)));
    }
    if let Some(spec) = &args.generate {
        let kind: GeneratorKind = spec.parse()?;
        return Ok((generate(&kind, cli.seed)?, spec.clone(), None));
    }
    Err(Error::InvalidParameters("give one of --input, --dataset or --generate".into()).into())
}

/// Writes to `out`, else to `default_name` under `--out-dir`, else stdout.
fn emit(cli: &Cli, out: Option<&Path>, default_name: &str, body: &[u8]) -> anyhow::Result<()> {
    let path = match (out, &cli.out_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Some(dir.join(default_name))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(body)?,
    }
    Ok(())
}

fn json_bytes(v: &Value) -> anyhow::Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn move_json(g: &Wsn, out: &AttackOutcome) -> Value {
    out.moves
        .iter()
        .map(|m| {
            json!({
                "kind": m.kind,
                "attacker": g.label(m.attacker),
                "rated": g.label(m.rated),
                "weight": m.weight,
            })
        })
        .collect()
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Compute { graph, solver, out } => {
            let (g, _, _) = load_graph(graph, cli)?;
            let s = compute_fga(&g, &solver.config()?);
            let body = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_scores_csv(&g, &s, &mut buf)?;
                    buf
                }
                Format::Json => json_bytes(&json!({
                    "iterations": s.iterations_run,
                    "max_residual": s.max_residual,
                    "nodes": g.nodes().map(|v| json!({
                        "node": g.label(v),
                        "fairness": s.fairness(v),
                        "goodness": s.goodness(v),
                    })).collect::<Vec<_>>(),
                }))?,
            };
            emit(cli, out.as_deref(), "scores.csv", &body)
        }
        Command::Predict {
            graph,
            solver,
            from,
            to,
        } => {
            let (g, _, _) = load_graph(graph, cli)?;
            let (u, v) = (g.id_of(from)?, g.id_of(to)?);
            let s = compute_fga(&g, &solver.config()?);
            let p = predict_weight(&s, u, v)?;
            let body = json_bytes(&json!({ "from": from, "to": to, "prediction": p }))?;
            emit(cli, None, "prediction.json", &body)
        }
        Command::Stats { graph, solver, out } => {
            let (g, _, _) = load_graph(graph, cli)?;
            let s = compute_fga(&g, &solver.config()?);
            let stats = compute_stats(&g, &s, &StatsThresholds::default());
            emit(
                cli,
                out.as_deref(),
                "stats.json",
                &json_bytes(&serde_json::to_value(stats)?)?,
            )
        }
        Command::Axioms { draws, out } => {
            let verdicts = run_axiom_suite(*draws, cli.seed);
            let failed: Vec<String> = verdicts
                .iter()
                .filter(|v| !v.pass)
                .map(|v| v.name.clone())
                .collect();
            let body =
                json_bytes(&json!({ "seed": cli.seed, "draws": draws, "axioms": verdicts }))?;
            emit(cli, out.as_deref(), "axioms.json", &body)?;
            if !failed.is_empty() {
                return Err(
                    InvariantViolation(format!("axioms failed: {}", failed.join(", "))).into(),
                );
            }
            Ok(())
        }
        Command::Attack {
            graph,
            mode,
            target,
            attackers,
            k,
            k1,
            k2,
            scale,
            max_edges,
            attacker_class,
            threshold,
            cold,
            out,
        } => {
            let (g, source, _) = load_graph(graph, cli)?;
            let opts = AttackOptions {
                fga: FgaConfig::default(),
                cold: *cold,
            };
            let scores = compute_fga(&g, &opts.fga);
            let criteria = SelectionCriteria {
                seed: cli.seed,
                ..Default::default()
            };
            let mut rng = criteria.rng();
            let t = match target {
                Some(label) => g.id_of(label)?,
                None => select_targets(&g, &scores, &criteria, 1, &mut rng)?[0],
            };
            let (k1, k2) = match mode {
                Mode::Mixed => (
                    k1.ok_or_else(|| Error::InvalidParameters("mixed attacks need --k1".into()))?,
                    k2.ok_or_else(|| Error::InvalidParameters("mixed attacks need --k2".into()))?,
                ),
                _ => (*k, 0),
            };
            let a: Vec<NodeId> = if attackers.is_empty() {
                select_attackers(
                    &g,
                    &scores,
                    &criteria,
                    (*attacker_class).into(),
                    k1 + k2,
                    &[t],
                    &mut rng,
                )?
            } else {
                attackers
                    .iter()
                    .map(|l| g.id_of(l))
                    .collect::<Result<_, _>>()?
            };
            if *mode == Mode::Mixed && a.len() != k1 + k2 {
                bail!(Error::InvalidParameters(format!(
                    "{} attackers given for k1 + k2 = {}",
                    a.len(),
                    k1 + k2
                )));
            }

            let mut extra = json!({});
            let outcome = match mode {
                Mode::Direct => direct_attack(&g, &a, t, &opts)?,
                Mode::Indirect => indirect_attack_greedy(&g, &a, t, &opts)?,
                Mode::IndirectScaled => {
                    indirect_attack_scaled(&g, &a, t, *scale, *max_edges, &opts)?
                }
                Mode::Mixed => {
                    let m = mixed_attack(&g, &a[..k1], &a[k1..], t, &opts)?;
                    extra = json!({
                        "delta_direct": m.delta_direct,
                        "delta_indirect": m.delta_indirect,
                        "delta_total": m.delta_total,
                    });
                    m.outcome
                }
                Mode::Exhaustive => {
                    let mut inter: BTreeSet<NodeId> = a
                        .iter()
                        .flat_map(|&x| greedy_candidates(&g, t, x))
                        .collect();
                    inter.insert(t);
                    let p = AttackProblem {
                        graph: g.clone(),
                        attackers: a.clone(),
                        targets: Targets::Nodes(vec![t]),
                        intermediaries: inter.into_iter().collect(),
                        budget: *k,
                        threshold: *threshold,
                        direction: Direction::Decrease,
                    };
                    let r = solve_exhaustive(&p, &[-1.0, 1.0], &opts)?;
                    extra = json!({
                        "feasible": r.feasible,
                        "objective": r.objective,
                        "threshold": threshold,
                        "move_sets_evaluated": r.move_sets_evaluated,
                    });
                    r.best
                }
            };
            let after = &outcome.graph_after;
            let mut body = json!({
                "source": source,
                "seed": cli.seed,
                "mode": format!("{mode:?}").to_lowercase(),
                "target": g.label(t),
                "attackers": a.iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
                "moves": move_json(after, &outcome),
                "goodness_before": outcome.scores_before.goodness(t),
                "goodness_after": outcome.scores_after.goodness(t),
                "delta": outcome.delta(),
                "exhausted": outcome.exhausted,
            });
            if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
                b.extend(e);
            }
            emit(cli, out.as_deref(), "attack.json", &json_bytes(&body)?)
        }
        Command::Bounds {
            graph,
            scenario,
            k,
            l,
            delta,
            trials,
            out,
        } => {
            let (rows, failed) = match scenario {
                ScenarioArg::Flip => {
                    let (g, _, _) = load_graph(graph, cli)?;
                    let reports = verify_flip(&g, *trials, cli.seed)?;
                    (
                        csv_rows(&reports)?,
                        reports.iter().filter(|r| !r.flipped).count(),
                    )
                }
                _ => {
                    let reports: Vec<BoundReport> = match scenario {
                        ScenarioArg::Stabiliser => vec![verify_stabiliser(*k, *l, *delta)?],
                        ScenarioArg::DirectSybil => {
                            let (g, _, _) = load_graph(graph, cli)?;
                            verify_bound_empirically(
                                &g,
                                Scenario::DirectSybil,
                                *k,
                                *trials,
                                cli.seed,
                            )?
                        }
                        _ => {
                            let (g, _, _) = load_graph(graph, cli)?;
                            verify_bound_empirically(
                                &g,
                                Scenario::IndirectSybil,
                                *k,
                                *trials,
                                cli.seed,
                            )?
                        }
                    };
                    (
                        csv_rows(&reports)?,
                        reports.iter().filter(|r| !r.satisfied).count(),
                    )
                }
            };
            emit(cli, out.as_deref(), "bounds.csv", &rows)?;
            if failed > 0 {
                return Err(
                    InvariantViolation(format!("{failed} trials violated the bound")).into(),
                );
            }
            Ok(())
        }
        Command::Campaign {
            graph,
            mode,
            k,
            k2,
            samples,
            attacker_class,
            scale,
            max_edges,
            cold,
            serial,
        } => {
            let (g, source, dataset) = load_graph(graph, cli)?;
            let mode = match mode {
                Mode::Direct => AttackMode::Direct,
                Mode::Indirect => AttackMode::Indirect,
                Mode::IndirectScaled => AttackMode::IndirectScaled,
                Mode::Mixed => AttackMode::Mixed,
                Mode::Exhaustive => bail!(Error::InvalidParameters(
                    "campaigns do not run exhaustive search".into()
                )),
            };
            let mut cfg = match dataset {
                Some(ds) => ExperimentConfig::preset(ds, mode, cli.seed),
                None => ExperimentConfig::new(source, mode, cli.seed),
            };
            if !k.is_empty() {
                cfg.ks = k.clone();
            }
            if !k2.is_empty() {
                cfg.k2s = k2.clone();
            }
            if let Some(n) = samples {
                cfg.samples = *n;
            }
            cfg.attacker_class = (*attacker_class).into();
            cfg.scale = *scale;
            cfg.max_edges = *max_edges;
            cfg.cold = *cold;
            let result = run_campaign_with(&g, &cfg, !serial)?;
            match format {
                Format::Json => {
                    let mut s = to_json(&result)?;
                    s.push('\n');
                    emit(cli, None, "campaign.json", s.as_bytes())?;
                }
                Format::Csv => {
                    let mut summary = Vec::new();
                    write_summary_csv(&result, &mut summary)?;
                    let mut records = Vec::new();
                    write_records_csv(&result, &mut records)?;
                    match &cli.out_dir {
                        Some(_) => {
                            emit(cli, None, "campaign_summary.csv", &summary)?;
                            emit(cli, None, "campaign_records.csv", &records)?;
                        }
                        None => emit(cli, None, "", &summary)?,
                    }
                }
            }
            if result.records.is_empty() && !result.cells.is_empty() {
                let why = result
                    .cells
                    .iter()
                    .find_map(|c| c.error.clone())
                    .unwrap_or_default();
                return Err(InsufficientData(format!("no samples could be drawn: {why}")).into());
            }
            Ok(())
        }
    }
}

fn csv_rows<T: serde::Serialize>(rows: &[T]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<InvariantViolation>().is_some() {
        return EXIT_INVARIANT;
    }
    if e.downcast_ref::<InsufficientData>().is_some() {
        return EXIT_INSUFFICIENT_DATA;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::InsufficientCandidates { .. }
            | Error::Io(_)
            | Error::Parse { .. }
            | Error::Csv(_)
            | Error::RatingOutOfScale { .. }
            | Error::SelfLoop(_),
        ) => EXIT_INSUFFICIENT_DATA,
        Some(_) => EXIT_INVALID_CONFIG,
        None if e.downcast_ref::<io::Error>().is_some() => EXIT_INSUFFICIENT_DATA,
        None => EXIT_INVALID_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
