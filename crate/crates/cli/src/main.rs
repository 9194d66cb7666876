use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nnro::bench::{self, BenchConfig, NamedOrdering};
use nnro::graph::{degree_stats, Direction};
use nnro::hnsw::{build_flat, BuildParams};
use nnro::io::{self, VectorDataset};
use nnro::reorder::{compute_ordering, Algorithm, ReorderSpec};
use nnro::search::{Init, QueryParams, Searcher};
use serde_json::json;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "nnro", version, about = "Graph ANN index with memory-layout reordering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a clustered synthetic dataset (and optionally queries).
    Synth(SynthArgs),
    /// Build an index from an fvecs/bvecs dataset.
    Build(BuildArgs),
    /// Reorder an index and write the relabeled index and the ordering.
    Reorder(ReorderArgs),
    /// Compute exact nearest neighbors as ivecs.
    Groundtruth(GroundtruthArgs),
    /// Run k-NN queries against an index.
    Query(QueryArgs),
    /// Sweep beam widths across orderings and write a CSV/JSON report.
    Bench(BenchArgs),
    /// Write the base-layer degree histogram as CSV.
    Stats(StatsArgs),
    /// Write the (query, slot) access trace of a query set as CSV.
    Trace(TraceArgs),
}

#[derive(clap::Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 50)]
    clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    spread: f32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Number of queries drawn from the same clusters.
    #[arg(long, default_value_t = 0)]
    queries: usize,
    #[arg(long)]
    queries_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long)]
    data: PathBuf,
    /// Max links per node (k_c).
    #[arg(long, default_value_t = 16)]
    max_degree: usize,
    /// Construction beam width (M_c).
    #[arg(long, default_value_t = 100)]
    beam_width: usize,
    /// Level scale m_L (default 1/ln k_c).
    #[arg(long)]
    level_scale: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    In,
    Out,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::In => Direction::In,
            DirArg::Out => Direction::Out,
        }
    }
}

#[derive(clap::Args, Clone)]
struct SpecArgs {
    /// Gorder window.
    #[arg(long, default_value_t = 5)]
    window: usize,
    /// DBG group count.
    #[arg(long, default_value_t = 8)]
    groups: usize,
    /// Degree direction for degree-sort and dbg.
    #[arg(long, value_enum, default_value_t = DirArg::In)]
    direction: DirArg,
}

impl SpecArgs {
    fn spec(&self, algorithm: Algorithm) -> ReorderSpec {
        ReorderSpec::new(algorithm).with_window(self.window).with_groups(self.groups).with_direction(self.direction.into())
    }
}

#[derive(clap::Args)]
struct ReorderArgs {
    #[arg(long)]
    index: PathBuf,
    /// gorder, rcm, degree-sort, hub-sort, hub-cluster or dbg.
    #[arg(long)]
    algorithm: String,
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    ordering_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GroundtruthArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Clone)]
struct SearchArgs {
    /// Beam width (M_q).
    #[arg(long, default_value_t = 100)]
    beam_width: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Seed the beam from this many random samples instead of the hierarchy.
    #[arg(long)]
    random_init: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn init(&self) -> Init {
        match self.random_init {
            Some(samples) => Init::RandomSample { samples, seed: self.seed },
            None => Init::Hierarchical,
        }
    }

    fn params(&self) -> Result<QueryParams> {
        Ok(QueryParams::new(self.k, self.beam_width)?.with_init(self.init()))
    }
}

#[derive(clap::Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Write result ids as ivecs instead of JSON lines on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ground truth for a recall summary.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Comma-separated algorithms; the original ordering is always included.
    #[arg(long, value_delimiter = ',', default_value = "gorder,rcm,degree-sort,hub-sort,hub-cluster,dbg")]
    algorithms: Vec<String>,
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_delimiter = ',', default_value = "100,200,500,1000,2000,5000")]
    sweep: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    query_count: usize,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    /// Skip the warm-start pass over the index.
    #[arg(long)]
    cold: bool,
    /// Build wall time in seconds, copied into the report.
    #[arg(long, default_value_t = 0.0)]
    build_seconds: f64,
    #[arg(long)]
    random_init: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StatsArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, value_enum, default_value_t = DirArg::Out)]
    direction: DirArg,
    /// Histogram CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TraceArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Trace CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn load_index(path: &Path) -> Result<nnro::graph::FlatIndex> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(io::load_index_from(BufReader::new(f))?)
}

fn load_vectors(path: &Path) -> Result<VectorDataset> {
    io::load_vectors(path).with_context(|| format!("reading {}", path.display()))
}

fn print_json(value: serde_json::Value) {
    println!("{value}");
}

fn synth(a: SynthArgs) -> Result<()> {
    let s = io::synth_clusters(a.n, a.dim, a.clusters, a.spread, a.seed)?;
    let mut w = create(&a.out)?;
    io::write_fvecs(&s.dataset, &mut w)?;
    w.flush()?;
    if a.queries > 0 {
        let Some(path) = &a.queries_out else { bail!("--queries needs --queries-out") };
        let (q, _) = s.sample_queries(a.queries, a.seed.wrapping_add(1));
        let mut w = create(path)?;
        io::write_fvecs(&q, &mut w)?;
        w.flush()?;
    }
    print_json(json!({"points": a.n, "dim": a.dim, "clusters": a.clusters, "queries": a.queries}));
    Ok(())
}

fn build(a: BuildArgs) -> Result<()> {
    let data = load_vectors(&a.data)?;
    let mut params = BuildParams::new(a.max_degree, a.beam_width).with_seed(a.seed);
    if let Some(m_l) = a.level_scale {
        params = params.with_level_scale(m_l);
    }
    let started = Instant::now();
    let index = build_flat(&data, &params)?;
    let build_s = started.elapsed().as_secs_f64();
    let mut w = create(&a.out)?;
    io::save_index(&index, &mut w)?;
    w.flush()?;
    print_json(json!({
        "nodes": index.num_nodes(),
        "dim": index.dim(),
        "levels": index.num_levels(),
        "block_bytes": index.block_bytes(),
        "build_s": build_s,
    }));
    Ok(())
}

fn reorder(a: ReorderArgs) -> Result<()> {
    let index = load_index(&a.index)?;
    let spec = a.spec.spec(a.algorithm.parse()?);
    let started = Instant::now();
    let ordering = compute_ordering(&index.base_adjacency(), &spec)?;
    let reorder_s = started.elapsed().as_secs_f64();
    let relabeled = index.apply_ordering(&ordering)?;
    let mut w = create(&a.out)?;
    io::save_index(&relabeled, &mut w)?;
    w.flush()?;
    if let Some(path) = &a.ordering_out {
        let mut w = create(path)?;
        io::save_ordering(&ordering, &mut w)?;
        w.flush()?;
    }
    print_json(json!({"algorithm": spec.label(), "nodes": ordering.len(), "reorder_s": reorder_s}));
    Ok(())
}

fn groundtruth(a: GroundtruthArgs) -> Result<()> {
    let data = load_vectors(&a.data)?;
    let queries = load_vectors(&a.queries)?;
    let truth = bench::ground_truth(&data, &queries, a.k)?;
    let mut w = create(&a.out)?;
    io::write_ivecs(&truth.to_ivecs()?, &mut w)?;
    w.flush()?;
    print_json(json!({"queries": truth.len(), "k": a.k}));
    Ok(())
}

fn query(a: QueryArgs) -> Result<()> {
    let index = load_index(&a.index)?;
    let queries = load_vectors(&a.queries)?;
    let truth = a.truth.as_deref().map(io::load_ground_truth).transpose()?;
    if let Some(t) = &truth {
        if t.len() != queries.len() {
            return Err(nnro::Error::QueryTruthMismatch { queries: queries.len(), truth: t.len() }.into());
        }
    }
    let params = a.search.params()?;
    let mut searcher = Searcher::new(&index);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let (mut visited, mut dists, mut recall) = (0u64, 0u64, 0.0);
    let mut all_ids = Vec::with_capacity(queries.len());
    for (i, q) in queries.rows().enumerate() {
        let res = searcher.search(q, &params)?;
        visited += res.visited;
        dists += res.distance_computations;
        if let Some(t) = &truth {
            recall += bench::recall_at(&res.ids(), t.row(i), params.k).value;
        }
        if a.out.is_some() {
            all_ids.push(res.ids().into_iter().map(|id| id as i32).collect::<Vec<_>>());
        } else {
            let line = json!({
                "query": i,
                "ids": res.ids(),
                "distances": res.neighbors.iter().map(|n| n.distance).collect::<Vec<_>>(),
                "visited": res.visited,
                "distance_computations": res.distance_computations,
            });
            writeln!(out, "{line}")?;
        }
    }
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        io::write_ivecs(&all_ids, &mut w)?;
        w.flush()?;
    }
    let n = queries.len().max(1) as f64;
    let mut summary = json!({
        "queries": queries.len(),
        "mean_visited": visited as f64 / n,
        "mean_distance_computations": dists as f64 / n,
    });
    if truth.is_some() {
        summary["recall"] = json!(recall / n);
    }
    if a.out.is_some() || truth.is_some() {
        writeln!(out, "{summary}")?;
    }
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let index = load_index(&a.index)?;
    let queries = load_vectors(&a.queries)?;
    let truth = io::load_ground_truth(&a.truth)?;
    let base = index.base_adjacency();
    let mut orderings = vec![NamedOrdering::identity(index.num_nodes())];
    for name in &a.algorithms {
        let spec = a.spec.spec(name.parse()?);
        let started = Instant::now();
        let ordering = compute_ordering(&base, &spec)?;
        orderings.push(NamedOrdering::new(spec.label(), ordering, started.elapsed().as_secs_f64()));
    }
    let config = BenchConfig {
        query_count: a.query_count,
        repetitions: a.repetitions,
        sweep: a.sweep,
        k: a.k,
        warm_start: !a.cold,
        init: match a.random_init {
            Some(samples) => Init::RandomSample { samples, seed: a.seed },
            None => Init::Hierarchical,
        },
        build_seconds: a.build_seconds,
        keep_results: false,
    };
    let report = bench::run_benchmark(&index, &orderings, &queries, &truth, &config)?;
    match &a.csv {
        Some(path) => {
            let mut w = create(path)?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        None => report.write_csv(std::io::stdout().lock())?,
    }
    if let Some(path) = &a.json {
        let mut w = create(path)?;
        report.write_json(&mut w)?;
        w.flush()?;
    }
    if !report.recall_invariant() {
        bail!("recall differs across orderings at a fixed beam width");
    }
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    let index = load_index(&a.index)?;
    let s = degree_stats(&index.base_adjacency(), a.direction.into());
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            s.write_csv(&mut w)?;
            w.flush()?;
            print_json(json!({
                "nodes": s.num_nodes(),
                "mean": s.mean,
                "std": s.std,
                "min": s.min,
                "max": s.max,
                "max_degree": index.max_degree(),
            }));
        }
        None => s.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn trace(a: TraceArgs) -> Result<()> {
    let index = load_index(&a.index)?;
    let queries = load_vectors(&a.queries)?;
    let t = bench::export_access_trace(&index, &queries, &a.search.params()?)?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            t.write_csv(&mut w)?;
            w.flush()?;
            print_json(json!({"queries": queries.len(), "accesses": t.accesses.len()}));
        }
        None => t.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => synth(a),
        Command::Build(a) => build(a),
        Command::Reorder(a) => reorder(a),
        Command::Groundtruth(a) => groundtruth(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => run_bench(a),
        Command::Stats(a) => stats(a),
        Command::Trace(a) => trace(a),
    }
}

fn error_line(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({"error": kind, "message": message}));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return error_line("usage", e.to_string().trim().to_string()),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match (e.downcast_ref::<nnro::Error>(), e.downcast_ref::<std::io::Error>()) {
                (Some(e), _) => e.kind(),
                (None, Some(_)) => "io",
                (None, None) => "cli",
            };
            error_line(kind, format!("{e:#}"))
        }
    }
}
