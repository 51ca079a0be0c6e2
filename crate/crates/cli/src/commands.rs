use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use ucluster_core::baselines::gmm;
use ucluster_core::clustering::{acp, mcp, RunStats};
use ucluster_core::metrics::{evaluate_predictions, GroundTruth, QualityReport};
use ucluster_core::oracle::effective_depth;
use ucluster_core::oracle::{mc_estimate, mc_estimate_d};
use ucluster_core::{load_graph, Clustering, ExactOracle, MonteCarloOracle, UncertainGraph, WorldSamplePool};

use crate::args::{Algorithm, Cli, ClusterArgs, Command, EvalArgs, MetricsArgs, PairArgs, SweepArgs};
use crate::document::{
    csv_row, to_canonical_json, ClusteringDocument, EvalDocument, MetricsDocument, Outcome, PairDocument,
    CSV_HEADER,
};
use crate::settings::{FileConfig, Settings, DEFAULT_EVAL_SAMPLES, DEFAULT_PAIR_SAMPLES};

/// How a run ended, short of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// No full clustering exists above the probability floor.
    NoClustering,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Self::Success => 0,
            Self::NoClustering => 1,
        }
    }
}

/// Executes one parsed command line.
///
/// The report is written even when no clustering is found, so the failure is
/// on record next to its parameters.
pub fn run(cli: &Cli) -> Result<Status> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers.or(file.workers) {
        anyhow::ensure!(w > 0, "--workers must be positive");
        pool = pool.num_threads(w);
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| dispatch(cli, &file))
}

fn dispatch(cli: &Cli, file: &FileConfig) -> Result<Status> {
    let mut timer = Timer::new(cli.timings);
    match &cli.command {
        Command::Mcp(args) => cluster_command(cli, file, Algorithm::Mcp, args, &mut timer),
        Command::Acp(args) => cluster_command(cli, file, Algorithm::Acp, args, &mut timer),
        Command::Gmm(args) => cluster_command(cli, file, Algorithm::Gmm, args, &mut timer),
        Command::Metrics(args) => metrics_command(cli, file, args, &mut timer),
        Command::Oracle(args) => pair_command(cli, file, args, true),
        Command::Estimate(args) => pair_command(cli, file, args, false),
        Command::Eval(args) => eval_command(cli, args),
        Command::Sweep(args) => sweep_command(cli, file, args),
    }
}

/// Wall-clock phase durations, collected only when asked for.
struct Timer {
    enabled: bool,
    last: Instant,
    start: Instant,
    phases: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        let now = Instant::now();
        Self {
            enabled,
            last: now,
            start: now,
            phases: BTreeMap::new(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases.insert(phase.to_string(), (now - self.last).as_secs_f64());
        self.last = now;
    }

    fn finish(mut self) -> Option<BTreeMap<String, f64>> {
        if !self.enabled {
            return None;
        }
        self.phases.insert("total".into(), self.start.elapsed().as_secs_f64());
        Some(self.phases)
    }
}

fn read_graph(path: &Path) -> Result<UncertainGraph> {
    let f = File::open(path).with_context(|| format!("opening graph {}", path.display()))?;
    load_graph(BufReader::new(f)).with_context(|| format!("reading graph {}", path.display()))
}

fn read_document(path: &Path) -> Result<ClusteringDocument> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing clustering report {}", path.display()))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Appends rows to a CSV file, writing the header first if the file is new or empty.
fn append_csv(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let fresh = f.metadata()?.len() == 0;
    let mut w = csv::Writer::from_writer(f);
    if fresh {
        w.write_record(CSV_HEADER)?;
    }
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_text(rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Where the reported scores come from.
enum Scoring {
    Exact,
    Pool { seed: u64, r: usize },
}

impl Scoring {
    /// Exact when the estimator is; otherwise a fresh pool if one was asked for,
    /// else the clustering's own pool, else a default-sized pool.
    fn choose(settings: &Settings, pool_seed: Option<u64>, pool_r: Option<usize>) -> Self {
        if settings.is_exact() {
            return Self::Exact;
        }
        let fresh_seed = settings.eval_seed.unwrap_or(settings.seed);
        match (settings.eval_samples, pool_seed, pool_r) {
            (Some(r), _, _) => Self::Pool { seed: fresh_seed, r },
            (None, Some(seed), Some(r)) => Self::Pool { seed, r },
            _ => Self::Pool {
                seed: fresh_seed,
                r: DEFAULT_EVAL_SAMPLES,
            },
        }
    }

    fn score(&self, graph: &UncertainGraph, settings: &Settings, clustering: &Clustering) -> Result<QualityReport> {
        Ok(match *self {
            Self::Exact => {
                let oracle = ExactOracle::with_limit(graph, settings.exact_limit)?;
                QualityReport::compute(clustering, &oracle, None)
            }
            Self::Pool { seed, r } => {
                anyhow::ensure!(r > 0, "evaluation pool must hold at least one world");
                let oracle = MonteCarloOracle::new(WorldSamplePool::with_size(graph, seed, r));
                QualityReport::compute(clustering, &oracle, Some(oracle.pool()))
            }
        })
    }
}

/// Runs one algorithm at `k` and scores the result.
fn cluster_once(
    graph: &UncertainGraph,
    algorithm: Algorithm,
    settings: Settings,
    timer: &mut Timer,
) -> Result<ClusteringDocument> {
    let k = settings.require_k()?;
    let (clustering, stats): (Option<Clustering>, Option<RunStats>) = match algorithm {
        Algorithm::Mcp => {
            let out = mcp(graph, &settings.driver(k))?;
            let stats = *out.stats();
            (out.into_clustering(), Some(stats))
        }
        Algorithm::Acp => {
            let out = acp(graph, &settings.driver(k))?;
            let stats = *out.stats();
            (out.into_clustering(), Some(stats))
        }
        Algorithm::Gmm => {
            let mut c = gmm(graph, k)?;
            c.params.depth = effective_depth(graph.n(), settings.depth);
            (Some(c), None)
        }
    };
    timer.lap("cluster");
    let mut doc = ClusteringDocument::new(algorithm, settings, graph, clustering.as_ref(), stats);
    if let Some(c) = &clustering {
        let scoring = Scoring::choose(&settings, c.params.seed, c.params.samples);
        let metrics = scoring.score(graph, &settings, c)?;
        // Runs without a pool of their own report the evaluation pool instead.
        if doc.seed.is_none() {
            doc.seed = metrics.seed;
            doc.r = metrics.samples;
        }
        doc.metrics = Some(metrics);
        timer.lap("metrics");
    }
    Ok(doc)
}

/// A clustering without estimates; scoring recomputes them from its own oracle.
fn bare_clustering(
    graph: &UncertainGraph,
    centers: Vec<usize>,
    assignment: Vec<usize>,
    depth: Option<usize>,
) -> Clustering {
    let mut c = Clustering {
        estimates: vec![0.0; graph.n()],
        assignment: assignment.into_iter().map(Some).collect(),
        centers,
        params: Default::default(),
    };
    c.params.depth = depth;
    c
}

fn status_of(doc: &ClusteringDocument) -> Status {
    match doc.outcome {
        Outcome::Found => Status::Success,
        Outcome::NoClustering => Status::NoClustering,
    }
}

fn cluster_command(
    cli: &Cli,
    file: &FileConfig,
    algorithm: Algorithm,
    args: &ClusterArgs,
    timer: &mut Timer,
) -> Result<Status> {
    let settings = Settings::resolve(&args.options, file);
    settings.require_k()?;
    let graph = read_graph(&args.graph)?;
    timer.lap("load");
    let mut doc = cluster_once(&graph, algorithm, settings, timer)?;
    doc.durations = std::mem::replace(timer, Timer::new(false)).finish();
    emit(cli, &to_canonical_json(&doc)?)?;
    if let Some(path) = &cli.csv {
        append_csv(path, &[csv_row(&doc)])?;
    }
    Ok(status_of(&doc))
}

fn metrics_command(cli: &Cli, file: &FileConfig, args: &MetricsArgs, timer: &mut Timer) -> Result<Status> {
    let graph = read_graph(&args.graph)?;
    let doc = read_document(&args.clustering)?;
    timer.lap("load");
    let settings = Settings::resolve_over(&args.options, file, &doc.params);
    let (centers, assignment) = doc.assignment(&graph)?;
    let depth = effective_depth(graph.n(), settings.depth);
    let scoring = Scoring::choose(&settings, doc.seed, doc.r);
    let clustering = bare_clustering(&graph, centers, assignment, depth);
    let metrics = scoring.score(&graph, &settings, &clustering)?;
    timer.lap("metrics");
    let out = MetricsDocument {
        params: settings,
        seed: metrics.seed,
        r: metrics.samples,
        metrics,
        durations: std::mem::replace(timer, Timer::new(false)).finish(),
    };
    emit(cli, &to_canonical_json(&out)?)?;
    Ok(Status::Success)
}

fn pair_command(cli: &Cli, file: &FileConfig, args: &PairArgs, exact: bool) -> Result<Status> {
    let settings = Settings::resolve(&args.options, file);
    let graph = read_graph(&args.graph)?;
    let u = graph.require_node(&args.u)?;
    let v = graph.require_node(&args.v)?;
    let doc = if exact {
        let oracle = ExactOracle::with_limit(&graph, settings.exact_limit)?;
        let est = oracle.estimate(u, v, settings.depth)?;
        PairDocument {
            u: args.u.clone(),
            v: args.v.clone(),
            depth: settings.depth,
            value: est.value,
            exact: true,
            seed: None,
            r: None,
        }
    } else {
        let r = args.samples.or(file.samples).unwrap_or(DEFAULT_PAIR_SAMPLES);
        anyhow::ensure!(r > 0, "--samples must be positive");
        let pool = WorldSamplePool::with_size(&graph, settings.seed, r);
        let est = match settings.depth {
            Some(d) => mc_estimate_d(&pool, u, v, d),
            None => mc_estimate(&pool, u, v),
        };
        PairDocument {
            u: args.u.clone(),
            v: args.v.clone(),
            depth: settings.depth,
            value: est.value,
            exact: false,
            seed: Some(settings.seed),
            r: Some(r),
        }
    };
    emit(cli, &to_canonical_json(&doc)?)?;
    Ok(Status::Success)
}

fn eval_command(cli: &Cli, args: &EvalArgs) -> Result<Status> {
    let graph = read_graph(&args.graph)?;
    let doc = read_document(&args.clustering)?;
    let truth_file =
        File::open(&args.truth).with_context(|| format!("opening reference complexes {}", args.truth.display()))?;
    let truth = GroundTruth::parse(BufReader::new(truth_file))
        .with_context(|| format!("reading reference complexes {}", args.truth.display()))?;
    let (centers, assignment) = doc.assignment(&graph)?;
    let clustering = bare_clustering(&graph, centers, assignment, None);
    let confusion = evaluate_predictions(&clustering, &graph, &truth)?;
    let out = EvalDocument {
        clustering: args.clustering.display().to_string(),
        truth: args.truth.display().to_string(),
        confusion,
    };
    emit(cli, &to_canonical_json(&out)?)?;
    Ok(Status::Success)
}

/// One CSV row per k; a missing clustering is recorded in the `outcome` column
/// rather than failing the sweep.
fn sweep_command(cli: &Cli, file: &FileConfig, args: &SweepArgs) -> Result<Status> {
    let base = Settings::resolve(&args.options, file);
    let graph = read_graph(&args.graph)?;
    let mut rows = Vec::with_capacity(args.ks.len());
    for &k in &args.ks {
        let settings = Settings { k: Some(k), ..base };
        let doc = cluster_once(&graph, args.algorithm, settings, &mut Timer::new(false))?;
        rows.push(csv_row(&doc));
    }
    emit(cli, &csv_text(&rows)?)?;
    if let Some(path) = &cli.csv {
        append_csv(path, &rows)?;
    }
    Ok(Status::Success)
}
