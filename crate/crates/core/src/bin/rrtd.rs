//! Corpus pipeline CLI: enumerate graphs, compute per-state subgoal
//! predictions across models, compare models by correlation, emit spectral
//! summaries, generate experiment stimuli, and run the grid cost
//! demonstration and the two-stage recovery fit.
//!
//! Every command is a pure function of (inputs, config, seed) at the byte
//! level of its file outputs; wall-clock timestamps appear only in the
//! metadata sidecar. Exit codes: 0 success, 2 usage error, 3 data error,
//! 4 numeric error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use rrtd::analysis::{
    correlation_matrix, fit_two_stage, simulate_trials, standardize, CorrKind, PredictionVector,
};
use rrtd::cache::table_or_compute;
use rrtd::error::Error;
use rrtd::graph::{enumerate_connected, parse_graph6, write_graph6, Graph, Task};
use rrtd::io as rio;
use rrtd::models::{predict, Model, PredictConfig};
use rrtd::rrtd::{rrtd_predictions_from_table, TaskDistribution};
use rrtd::search::{
    derive_rng, expected_alg_reward, run_bfs_counted, run_dfs_counted, run_iddfs_counted,
    run_random_walk_counted, Alg,
};
use rrtd::stimuli::{
    eligible_for_experiment, probe_tasks, simulate_session, FillerPolicy, OptimalNavigator,
};

#[derive(Parser)]
#[command(name = "rrtd", version, about = "Subgoal-valuation corpus pipeline")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all connected n-state graphs to a graph6 file.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Output graph6 file (one canonical graph per line).
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-state predictions for each (graph, model) pair.
    Predict {
        #[command(flatten)]
        job: JobArgs,
        /// Also write one DOT rendering per (graph, model); intended for
        /// small corpora.
        #[arg(long)]
        dot: bool,
    },
    /// Mean per-graph correlation matrix between models.
    Compare {
        #[command(flatten)]
        job: JobArgs,
        /// Uniform random subsample of the corpus (without replacement).
        #[arg(long)]
        subsample: Option<usize>,
        /// Rank correlation instead of Pearson.
        #[arg(long)]
        spearman: bool,
    },
    /// Spectral summary (lambda2, gap, degeneracy) per corpus graph.
    Spectral {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eligible-graph list, probe-task draws, and simulated sessions.
    Stimuli {
        #[arg(long)]
        corpus: String,
        /// Sample this many eligible graphs for probes and sessions.
        #[arg(long)]
        subsample: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid cost demonstration: direct vs via-midpoint costs plus expansion
    /// heat data.
    GridDemo {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        /// Comma-separated algorithms. DFS is accepted but omitted from the
        /// default: on grids beyond a few nodes per side a self-avoiding
        /// prefix can wall off the goal, forcing DFS to exhaust an
        /// exponentially large subtree before it backtracks out.
        #[arg(long, default_value = "RW,BFS,IDDFS")]
        algs: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthetic two-stage generation and fit per (graph, model).
    TwoStage {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = 2.0)]
        beta1: f64,
        #[arg(long, default_value_t = 3.0)]
        beta2: f64,
        /// Synthetic trials per (graph, model).
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

/// Flags shared by the corpus-scale commands. Values omitted on the command
/// line fall back to the --config file, then to defaults.
#[derive(Args, Clone)]
struct JobArgs {
    /// graph6 file path, or builtin:N for the full connected n-state corpus.
    #[arg(long)]
    corpus: Option<String>,
    /// Comma-separated model tags, or "all".
    #[arg(long)]
    models: Option<String>,
    /// Task distribution: all | distinct | nonadjacent.
    #[arg(long)]
    dist: Option<String>,
    /// Monte Carlo samples per cost-table cell.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Cost-table cache directory; omit to always recompute.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file supplying defaults for any omitted flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// A JobArgs-shaped config file; every field optional.
#[derive(Default, serde::Deserialize)]
struct FileConfig {
    corpus: Option<String>,
    models: Option<String>,
    dist: Option<String>,
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    cache_dir: Option<PathBuf>,
    out: Option<PathBuf>,
}

/// Fully resolved job configuration; serialized into the metadata sidecar.
#[derive(Clone, serde::Serialize)]
struct RunConfig {
    corpus: String,
    models: Vec<Model>,
    dist: TaskDistribution,
    samples: u64,
    seed: u64,
    workers: usize,
    cache_dir: Option<PathBuf>,
    out: PathBuf,
}

/// CLI failure: an exit code plus message.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Unsupported(_) => 2,
            Error::Numeric(_) => 4,
            _ => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 3, msg: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(cli) {
        eprintln!("error: {}", f.msg);
        std::process::exit(f.code);
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Enumerate { n, out } => cmd_enumerate(n, &out),
        Cmd::Predict { job, dot } => cmd_predict(resolve(job)?, dot),
        Cmd::Compare { job, subsample, spearman } => cmd_compare(resolve(job)?, subsample, spearman),
        Cmd::Spectral { corpus, out } => cmd_spectral(&corpus, &out),
        Cmd::Stimuli { corpus, subsample, seed, out } => cmd_stimuli(&corpus, subsample, seed, &out),
        Cmd::GridDemo { width, height, algs, samples, seed, out } => {
            cmd_grid_demo(width, height, &algs, samples, seed, &out)
        }
        Cmd::TwoStage { job, beta1, beta2, trials } => {
            cmd_two_stage(resolve(job)?, beta1, beta2, trials)
        }
    }
}

fn resolve(job: JobArgs) -> CliResult<RunConfig> {
    let file: FileConfig = match &job.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure { code: 3, msg: format!("{}: {e}", path.display()) })?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let corpus = job
        .corpus
        .or(file.corpus)
        .ok_or_else(|| Failure::usage("--corpus is required (path or builtin:N)"))?;
    let models = parse_models(&job.models.or(file.models).unwrap_or_else(|| "all".into()))?;
    let dist: TaskDistribution = job
        .dist
        .or(file.dist)
        .unwrap_or_else(|| "distinct".into())
        .parse()
        .map_err(|e: Error| Failure::usage(e.to_string()))?;
    let seed = job
        .seed
        .or(file.seed)
        .ok_or_else(|| Failure::usage("--seed is required (outputs embed it)"))?;
    Ok(RunConfig {
        corpus,
        models,
        dist,
        samples: job.samples.or(file.samples).unwrap_or(1000),
        seed,
        workers: job.workers.or(file.workers).unwrap_or(0),
        cache_dir: job.cache_dir.or(file.cache_dir),
        out: job.out.or(file.out).ok_or_else(|| Failure::usage("--out is required"))?,
    })
}

fn parse_models(spec: &str) -> CliResult<Vec<Model>> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(Model::ALL.to_vec());
    }
    spec.split(',')
        .map(|tag| tag.trim().parse().map_err(|e: Error| Failure::usage(e.to_string())))
        .collect()
}

fn parse_algs(spec: &str) -> CliResult<Vec<Alg>> {
    spec.split(',')
        .map(|tag| tag.trim().parse().map_err(|e: Error| Failure::usage(e.to_string())))
        .collect()
}

/// Loads (graph_id, graph) pairs from a graph6 file or builtin:N.
fn load_corpus(src: &str) -> CliResult<Vec<(String, Graph)>> {
    if let Some(n) = src.strip_prefix("builtin:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::usage(format!("bad builtin corpus size {n:?}")))?;
        let graphs = enumerate_connected(n)?;
        return Ok(graphs
            .into_iter()
            .map(|g| {
                let id = write_graph6(&g).expect("enumerated graphs fit graph6");
                (id, g)
            })
            .collect());
    }
    let text = std::fs::read_to_string(src)
        .map_err(|e| Failure { code: 3, msg: format!("{src}: {e}") })?;
    let mut corpus = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line)
            .map_err(|e| Failure { code: 3, msg: format!("{src}:{}: {e}", lineno + 1) })?;
        corpus.push((line.to_string(), g));
    }
    if corpus.is_empty() {
        return Err(Failure { code: 3, msg: format!("{src}: empty corpus") });
    }
    Ok(corpus)
}

fn thread_pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure { code: 3, msg: e.to_string() })
}

fn write_out(dir: &Path, name: &str, content: &str) -> CliResult {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| Failure { code: 3, msg: format!("{}: {e}", path.display()) })?;
    Ok(())
}

/// Provenance sidecar; the only output that may contain a timestamp.
fn write_metadata(dir: &Path, command: &str, config: serde_json::Value) -> CliResult {
    let created = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "command": command,
        "config": config,
        "created_unix": created,
    });
    write_out(dir, "metadata.json", &serde_json::to_string_pretty(&meta).unwrap())
}

/// One model's prediction for one graph, routing the subgoal-valuation
/// models through the cost-table cache.
fn predict_cached(
    cfg: &RunConfig,
    g: &Graph,
    graph_id: &str,
    model: Model,
) -> Result<PredictionVector, Error> {
    if let Some(alg) = model.rrtd_alg() {
        let table = table_or_compute(
            cfg.cache_dir.as_deref(),
            g,
            graph_id,
            alg,
            cfg.samples,
            cfg.seed,
        )?;
        return rrtd_predictions_from_table(g, graph_id, &table, cfg.dist);
    }
    let pc = PredictConfig {
        dist: cfg.dist,
        samples: cfg.samples,
        seed: cfg.seed,
        ..PredictConfig::default()
    };
    predict(g, graph_id, model, &pc)
}

/// Predictions for every (graph, model), order-preserving and parallel over
/// graphs.
fn predict_corpus(
    cfg: &RunConfig,
    corpus: &[(String, Graph)],
) -> CliResult<Vec<Vec<PredictionVector>>> {
    let pool = thread_pool(cfg.workers)?;
    let rows: Result<Vec<Vec<PredictionVector>>, Error> = pool.install(|| {
        corpus
            .par_iter()
            .map(|(id, g)| {
                cfg.models.iter().map(|&m| predict_cached(cfg, g, id, m)).collect()
            })
            .collect()
    });
    Ok(rows?)
}

fn cmd_enumerate(n: usize, out: &Path) -> CliResult {
    let graphs = enumerate_connected(n)?;
    let mut text = String::new();
    for g in &graphs {
        text.push_str(&write_graph6(g)?);
        text.push('\n');
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(out, text)
        .map_err(|e| Failure { code: 3, msg: format!("{}: {e}", out.display()) })?;
    println!("{} graphs -> {}", graphs.len(), out.display());
    Ok(())
}

fn cmd_predict(cfg: RunConfig, dot: bool) -> CliResult {
    let corpus = load_corpus(&cfg.corpus)?;
    let rows = predict_corpus(&cfg, &corpus)?;
    let flat: Vec<PredictionVector> = rows.into_iter().flatten().collect();
    write_out(&cfg.out, "predictions.csv", &rio::predictions_csv(&flat))?;
    write_out(&cfg.out, "predictions.json", &rio::predictions_json(&flat))?;
    if dot {
        for p in &flat {
            let g = &corpus.iter().find(|(id, _)| *id == p.graph_id).unwrap().1;
            let name = format!(
                "{}_{}.dot",
                sanitize(&p.graph_id),
                p.model.tag().to_ascii_lowercase().replace('-', "_")
            );
            write_out(&cfg.out, &name, &rio::predictions_dot(g, p))?;
        }
    }
    write_metadata(&cfg.out, "predict", serde_json::to_value(&cfg).unwrap())?;
    println!(
        "{} graphs x {} models -> {}",
        corpus.len(),
        cfg.models.len(),
        cfg.out.display()
    );
    Ok(())
}

/// graph6 bytes are printable ASCII but include path-hostile characters.
fn sanitize(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

fn cmd_compare(cfg: RunConfig, subsample: Option<usize>, spearman: bool) -> CliResult {
    let mut corpus = load_corpus(&cfg.corpus)?;
    if let Some(k) = subsample {
        corpus = subsample_corpus(corpus, k, cfg.seed)?;
    }
    let rows = predict_corpus(&cfg, &corpus)?;
    let kind = if spearman { CorrKind::Spearman } else { CorrKind::Pearson };
    let matrix = correlation_matrix(&cfg.models, &rows, kind)?;
    write_out(&cfg.out, "correlations.csv", &rio::correlation_csv(&matrix))?;
    write_out(&cfg.out, "correlations.json", &rio::correlation_json(&matrix))?;
    let mut meta = serde_json::to_value(&cfg).unwrap();
    meta["subsample"] = serde_json::json!(subsample);
    meta["kind"] = serde_json::json!(if spearman { "spearman" } else { "pearson" });
    write_metadata(&cfg.out, "compare", meta)?;
    println!("{} graphs compared -> {}", corpus.len(), cfg.out.display());
    Ok(())
}

/// Uniform subsample without replacement, preserving corpus order.
fn subsample_corpus(
    corpus: Vec<(String, Graph)>,
    k: usize,
    seed: u64,
) -> CliResult<Vec<(String, Graph)>> {
    use rand::seq::SliceRandom;
    if k >= corpus.len() {
        return Ok(corpus);
    }
    let mut rng = derive_rng(seed, &[b"subsample"]);
    let mut idx: Vec<usize> = (0..corpus.len()).collect();
    idx.shuffle(&mut rng);
    let mut keep: Vec<usize> = idx.into_iter().take(k).collect();
    keep.sort_unstable();
    let mut keep_iter = keep.into_iter().peekable();
    Ok(corpus
        .into_iter()
        .enumerate()
        .filter(|(i, _)| {
            if keep_iter.peek() == Some(i) {
                keep_iter.next();
                true
            } else {
                false
            }
        })
        .map(|(_, pair)| pair)
        .collect())
}

fn cmd_spectral(corpus: &str, out: &Path) -> CliResult {
    let corpus = load_corpus(corpus)?;
    write_out(out, "spectral.csv", &rio::spectral_csv(&corpus)?)?;
    write_metadata(out, "spectral", serde_json::json!({ "graphs": corpus.len() }))?;
    println!("{} graphs -> {}", corpus.len(), out.display());
    Ok(())
}

fn cmd_stimuli(corpus: &str, subsample: Option<usize>, seed: u64, out: &Path) -> CliResult {
    let corpus = load_corpus(corpus)?;
    let eligible: Vec<&(String, Graph)> =
        corpus.iter().filter(|(_, g)| eligible_for_experiment(g)).collect();
    let mut text = String::new();
    for (id, _) in &eligible {
        text.push_str(id);
        text.push('\n');
    }
    write_out(out, "eligible.g6", &text)?;

    let sampled: Vec<&(String, Graph)> = match subsample {
        None => Vec::new(),
        Some(k) => {
            if k > eligible.len() {
                return Err(Failure {
                    code: 3,
                    msg: format!("requested {k} graphs but only {} are eligible", eligible.len()),
                });
            }
            use rand::seq::SliceRandom;
            let mut rng = derive_rng(seed, &[b"stimuli-sample"]);
            let mut idx: Vec<usize> = (0..eligible.len()).collect();
            idx.shuffle(&mut rng);
            let mut keep: Vec<usize> = idx.into_iter().take(k).collect();
            keep.sort_unstable();
            keep.into_iter().map(|i| eligible[i]).collect()
        }
    };

    if !sampled.is_empty() {
        use rand::seq::SliceRandom;
        let mut probes = String::from("graph_id,probe,start,goal\n");
        let mut schedules = String::from("graph_id,trial,kind,start,goal\n");
        let mut visits = Vec::new();
        for (id, g) in &sampled {
            let tasks = probe_tasks(g);
            if tasks.len() < 10 {
                return Err(Failure {
                    code: 3,
                    msg: format!("{id}: only {} probe tasks; 10 required", tasks.len()),
                });
            }
            let mut rng = derive_rng(seed, &[b"stimuli-probes", id.as_bytes()]);
            let mut chosen = tasks.clone();
            chosen.shuffle(&mut rng);
            chosen.truncate(10);
            for (i, t) in chosen.iter().enumerate() {
                probes.push_str(&format!("{id},{i},{},{}\n", t.start, t.goal));
            }
            let mut rng = derive_rng(seed, &[b"stimuli-session", id.as_bytes()]);
            let (counts, schedule) =
                simulate_session(g, &OptimalNavigator, FillerPolicy::Adaptive, &mut rng)?;
            for (i, (kind, task)) in schedule.trials.iter().enumerate() {
                let kind = match kind {
                    rrtd::stimuli::TrialKind::Long => "long",
                    rrtd::stimuli::TrialKind::Filler => "filler",
                };
                schedules.push_str(&format!("{id},{i},{kind},{},{}\n", task.start, task.goal));
            }
            visits.push(serde_json::json!({ "graph_id": id, "counts": counts.counts() }));
        }
        write_out(out, "probes.csv", &probes)?;
        write_out(out, "schedules.csv", &schedules)?;
        write_out(out, "visits.json", &serde_json::to_string_pretty(&visits).unwrap())?;
    }
    write_metadata(
        out,
        "stimuli",
        serde_json::json!({
            "corpus_graphs": corpus.len(),
            "eligible": eligible.len(),
            "sampled": sampled.len(),
            "seed": seed,
        }),
    )?;
    println!("{} eligible of {} -> {}", eligible.len(), corpus.len(), out.display());
    Ok(())
}

fn cmd_grid_demo(
    width: usize,
    height: usize,
    algs: &str,
    samples: u64,
    seed: u64,
    out: &Path,
) -> CliResult {
    if width * height < 2 {
        return Err(Failure::usage("grid demo needs at least two cells"));
    }
    let algs = parse_algs(algs)?;
    let g = Graph::grid(width, height)?;
    // Grids can exceed the graph6 size limit; the id only seeds the
    // per-cell reward sampling.
    let graph_id = format!("grid-{width}x{height}");
    let n = g.n();
    let (start, goal) = (0, n - 1);
    // Midpoint of the corner-to-corner route; on odd x odd grids this is the
    // exact center; otherwise the cell nearest the route midpoint, rounding
    // toward the goal (so a 1x2 grid's subgoal is its goal).
    let subgoal = (height / 2) * width + (width / 2);
    let runs = samples.max(1);

    let mut report = String::from("alg,direct_cost,via_cost,subgoal\n");
    let mut heat = String::from("alg,variant,state,mean_expansions\n");
    let degenerate = subgoal == start || subgoal == goal;
    for alg in algs {
        // One counted pass per (leg, variant) supplies both the per-state
        // heat data and, for the tree searches, the Monte Carlo mean cost.
        let sample_leg =
            |s: usize, z: usize, counts: &mut [u64], label: &[u8]| -> Result<f64, Error> {
                let mut rng = derive_rng(seed, &[b"grid-demo", alg.tag().as_bytes(), label]);
                let mut total = 0.0;
                for _ in 0..runs {
                    let outcome = match alg {
                        Alg::Rw => run_random_walk_counted(&g, s, z, &mut rng, counts)?,
                        Alg::Bfs => run_bfs_counted(&g, s, z, &mut rng, counts)?,
                        Alg::Dfs => run_dfs_counted(&g, s, z, &mut rng, counts)?,
                        Alg::Iddfs => run_iddfs_counted(&g, s, z, &mut rng, counts)?,
                    };
                    total += outcome.reward();
                }
                Ok(-(total / runs as f64))
            };
        let mut direct_counts = vec![0u64; n];
        let direct_mc = sample_leg(start, goal, &mut direct_counts, b"direct")?;
        // A subgoal sitting on an endpoint degenerates to the direct task,
        // so the two columns agree there by construction.
        let (via_mc, via_counts) = if degenerate {
            (direct_mc, direct_counts.clone())
        } else {
            let mut vc = vec![0u64; n];
            let a = sample_leg(start, subgoal, &mut vc, b"via0")?;
            let b = sample_leg(subgoal, goal, &mut vc, b"via1")?;
            (a + b, vc)
        };
        // The random walk's cost column is exact (hitting times); sampling
        // still supplies its heat map.
        let (direct_cost, via_cost) = if alg.is_exact() {
            let d = -expected_alg_reward(&g, &graph_id, alg, start, goal, samples, seed)?;
            let v = if degenerate {
                d
            } else {
                -expected_alg_reward(&g, &graph_id, alg, start, subgoal, samples, seed)?
                    - expected_alg_reward(&g, &graph_id, alg, subgoal, goal, samples, seed)?
            };
            (d, v)
        } else {
            (direct_mc, via_mc)
        };
        report.push_str(&format!("{},{direct_cost},{via_cost},{subgoal}\n", alg.tag()));
        for state in 0..n {
            heat.push_str(&format!(
                "{},direct,{state},{}\n",
                alg.tag(),
                direct_counts[state] as f64 / runs as f64
            ));
            heat.push_str(&format!(
                "{},via,{state},{}\n",
                alg.tag(),
                via_counts[state] as f64 / runs as f64
            ));
        }
    }
    write_out(out, "grid_costs.csv", &report)?;
    write_out(out, "grid_heat.csv", &heat)?;
    write_metadata(
        out,
        "grid-demo",
        serde_json::json!({
            "width": width, "height": height, "samples": samples, "seed": seed,
            "start": start, "goal": goal, "subgoal": subgoal,
        }),
    )?;
    println!("grid {width}x{height} demo -> {}", out.display());
    Ok(())
}

fn cmd_two_stage(cfg: RunConfig, beta1: f64, beta2: f64, trials: usize) -> CliResult {
    let corpus = load_corpus(&cfg.corpus)?;
    let rows = predict_corpus(&cfg, &corpus)?;
    let pool = thread_pool(cfg.workers)?;
    let fits: Result<Vec<(String, String, rrtd::analysis::TwoStageFit, usize)>, Error> =
        pool.install(|| {
            corpus
                .par_iter()
                .zip(rows.par_iter())
                .map(|((id, g), preds)| {
                    let mut out = Vec::new();
                    // Tasks solvable in one action say nothing about subgoal
                    // use; graphs offering none are skipped, not fatal.
                    let mut tasks = Vec::new();
                    for s in 0..g.n() {
                        let dist = g.distances_from(s);
                        for (t, d) in dist.iter().enumerate() {
                            if matches!(d, Some(d) if *d >= 2) {
                                tasks.push(Task { start: s, goal: t });
                            }
                        }
                    }
                    if tasks.is_empty() {
                        return Ok(out);
                    }
                    for p in preds {
                        let z = standardize(&p.values);
                        let mut rng = derive_rng(
                            cfg.seed,
                            &[b"two-stage", id.as_bytes(), p.model.tag().as_bytes()],
                        );
                        let mut data = Vec::with_capacity(trials);
                        let per = trials / tasks.len();
                        let extra = trials % tasks.len();
                        for (ti, task) in tasks.iter().enumerate() {
                            let count = per + usize::from(ti < extra);
                            if count > 0 {
                                data.extend(simulate_trials(
                                    g, &z, *task, beta1, beta2, count, &mut rng,
                                )?);
                            }
                        }
                        let fit = fit_two_stage(&z, &data)?;
                        out.push((id.clone(), p.model.tag().to_string(), fit, data.len()));
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>, Error>>()
                .map(|vv| vv.into_iter().flatten().collect())
        });
    let fits = fits?;
    write_out(&cfg.out, "two_stage.json", &rio::two_stage_json(&fits))?;
    let mut meta = serde_json::to_value(&cfg).unwrap();
    meta["beta1"] = serde_json::json!(beta1);
    meta["beta2"] = serde_json::json!(beta2);
    meta["trials"] = serde_json::json!(trials);
    write_metadata(&cfg.out, "two-stage", meta)?;
    println!("{} fits -> {}", fits.len(), cfg.out.display());
    Ok(())
}
