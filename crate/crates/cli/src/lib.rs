//! Command-line front end: argument model, dispatch and JSON reports.
//!
//! Every run produces a [`Report`] echoing the parsed configuration, even
//! when the command fails. Exit codes: 0 success / true / clean, 1 false /
//! violation / counterexample, 2 unknown or budget exhausted, 3 bad input.

use clap::{Args, Parser, Subcommand};
use ramsey_fit::arrow::{self, ArrowStatus, SearchBudget};
use ramsey_fit::coloring::{self, AvoidanceSpec, BlueForbidden, EdgeColoring};
use ramsey_fit::fit::{self, BuildOptions, CertifyOptions, OverallStatus, ToleranceProfile};
use ramsey_fit::graph::{self, io};
use ramsey_fit::regularity::{self, Partition, RegularityMode, RegularityVerdict};
use ramsey_fit::witness::{self, BlueRoute, BuilderOptions, EndgameConfig, SideThresholds};
use ramsey_fit::{Error, Graph, VertexSet};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub const TOOL: &str = "ramsey-fit";

/// Parsed command line; echoed verbatim into every report.
#[derive(Parser, Serialize, Clone, Debug, PartialEq)]
#[command(name = "ramsey-fit", version, about = "Fit graphs, cycle colourings and arrowing checks")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Worker threads for parallel sections; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Build or certify n-fit graphs.
    #[command(subcommand)]
    Fit(FitCommand),
    /// Produce or check red/blue colourings.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Build monochromatic cycle families.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Densities, regular pairs, reduced graphs and matchings.
    #[command(subcommand)]
    Reg(RegCommand),
    /// Cycle-length queries.
    #[command(subcommand)]
    Cycles(CyclesCommand),
    /// Arrowing search and CNF export.
    #[command(subcommand)]
    Arrows(ArrowsCommand),
    /// Closed-form values of r(C_n, C_k) and r*(C_n, C_3).
    Formulas(FormulasArgs),
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum FitCommand {
    Build(FitBuildArgs),
    Certify(FitCertifyArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct FitBuildArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub retries: u32,
    #[arg(long, default_value_t = 1.0)]
    pub tol_multiplier: f64,
    /// Random set pairs for the discrepancy check.
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    /// Reject samples failing the pseudo-randomness checks.
    #[arg(long)]
    pub strict_sampling: bool,
    /// graph6 output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Certificate JSON output.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Repair log JSON output.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct FitCertifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub tol_multiplier: f64,
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub no_spectral: bool,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ColorCommand {
    /// Colouring of a graph with a vertex of degree at most n.
    Extremal(ExtremalArgs),
    /// Two red cliques joined in blue on 2n − 2 vertices.
    Blocking(BlockingArgs),
    /// Check a colouring for a red C_n and forbidden blue cycles.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct ExtremalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct BlockingArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Colouring output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Host graph output (graph6).
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub coloring: PathBuf,
    /// Forbidden red cycle length.
    #[arg(long)]
    pub n: usize,
    /// Forbidden blue cycle length; every odd length when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = u64::MAX)]
    pub budget_nodes: u64,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum WitnessCommand {
    BlueSpectrum(BlueSpectrumArgs),
    RedPancyclic(RedPancyclicArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct SidesArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub coloring: PathBuf,
    /// First side, e.g. `0..59` or `0,2,4..9`.
    #[arg(long)]
    pub v1: String,
    #[arg(long)]
    pub v2: String,
    /// Scale parameter for thresholds; defaults to ⌈vertices / 2⌉.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub threshold_multiplier: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct BlueSpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sides: SidesArgs,
    #[arg(long, conflicts_with = "endgame", required_unless_present = "endgame")]
    pub hub: Option<usize>,
    /// `s,w,v1,v2,v3`.
    #[arg(long)]
    pub endgame: Option<String>,
    /// Longest cycle wanted; defaults to n.
    #[arg(long)]
    pub max_len: Option<usize>,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct RedPancyclicArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sides: SidesArgs,
    /// Which side's W to make pancyclic.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub side: u8,
    /// Vertex outside W with two red neighbours in it.
    #[arg(long)]
    pub external: Option<usize>,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum RegCommand {
    Density(PairArgs),
    Pair(RegPairArgs),
    Reduce(ReduceArgs),
    Mt(MtArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct PairArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct RegPairArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long)]
    pub eps: f64,
    /// Random sub-pairs instead of exhaustive enumeration.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct ReduceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct MtArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub t: f64,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum CyclesCommand {
    Spectrum(SpectrumArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct SpectrumArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub max_len: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget_nodes: u64,
}

#[derive(Subcommand, Serialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ArrowsCommand {
    Check(ArrowsCheckArgs),
    Cnf(ArrowsCnfArgs),
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct ArrowsCheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 50_000_000)]
    pub budget_nodes: u64,
    #[arg(long)]
    pub budget_seconds: Option<u64>,
    /// Report the least counterexample whatever the thread count.
    #[arg(long)]
    pub deterministic: bool,
    /// Where to write a counterexample colouring.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct ArrowsCnfArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize, Clone, Debug, PartialEq)]
pub struct FormulasArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Timings {
    pub wall_ms: f64,
}

/// Everything a run produced. Keys appear in declaration order.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub status: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

struct Outcome {
    status: &'static str,
    code: i32,
    result: Value,
}

impl Outcome {
    fn new(status: &'static str, code: i32, result: impl Serialize) -> Self {
        Outcome {
            status,
            code,
            result: serde_json::to_value(result).expect("results serialize"),
        }
    }
}

fn exit_code_for(e: &Error) -> (&'static str, i32) {
    match e {
        Error::BudgetExhausted(_) => ("unknown", 2),
        Error::Precondition(_) | Error::RepairFailed(_) | Error::Construction(_) => ("failed", 1),
        _ => ("input_error", 3),
    }
}

/// Validates `config`, runs the command on a pool of `config.threads`
/// workers and assembles the report. Never panics on bad input.
pub fn run_experiment(config: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let outcome = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
        .and_then(|pool| pool.install(|| dispatch(config)));
    let timings = config.timings.then(|| Timings {
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    });
    let (status, exit_code, error, result) = match outcome {
        Ok(o) => (o.status.to_string(), o.code, None, o.result),
        Err(e) => {
            let (s, c) = exit_code_for(&e);
            (s.to_string(), c, Some(e.to_string()), Value::Null)
        }
    };
    Report {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        status,
        exit_code,
        error,
        result,
        timings,
    }
}

type Res<T> = Result<T, Error>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

/// Reads graph6 or an edge list (`n m` header), told apart by whether the
/// first line contains whitespace.
pub fn load_graph(path: &Path) -> Res<Graph> {
    let text = read(path)?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.trim().contains(char::is_whitespace) {
        io::from_edge_list(&text)
    } else {
        io::from_graph6(first.trim())
    }
}

fn load_coloring(g: &Graph, path: &Path) -> Res<EdgeColoring> {
    EdgeColoring::from_text(g, &read(path)?)
}

/// Comma-separated vertices and half-open ranges `a..b`.
pub fn parse_vertex_list(text: &str, universe: usize) -> Res<VertexSet> {
    let bad = |msg: String| Error::Format { what: "vertex list", msg };
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: usize = a.trim().parse().map_err(|e| bad(format!("{item}: {e}")))?;
            let b: usize = b.trim().parse().map_err(|e| bad(format!("{item}: {e}")))?;
            out.extend(a..b);
        } else {
            out.push(item.parse().map_err(|e| bad(format!("{item}: {e}")))?);
        }
    }
    VertexSet::from_vertices(universe, out)
}

fn dispatch(config: &ExperimentConfig) -> Res<Outcome> {
    match &config.command {
        Command::Fit(FitCommand::Build(a)) => fit_build(a),
        Command::Fit(FitCommand::Certify(a)) => fit_certify(a),
        Command::Color(ColorCommand::Extremal(a)) => color_extremal(a),
        Command::Color(ColorCommand::Blocking(a)) => color_blocking(a),
        Command::Color(ColorCommand::Verify(a)) => color_verify(a),
        Command::Witness(WitnessCommand::BlueSpectrum(a)) => blue_spectrum(a),
        Command::Witness(WitnessCommand::RedPancyclic(a)) => red_pancyclic(a),
        Command::Reg(RegCommand::Density(a)) => reg_density(a),
        Command::Reg(RegCommand::Pair(a)) => reg_pair(a),
        Command::Reg(RegCommand::Reduce(a)) => reg_reduce(a),
        Command::Reg(RegCommand::Mt(a)) => reg_mt(a),
        Command::Cycles(CyclesCommand::Spectrum(a)) => cycles_spectrum(a),
        Command::Arrows(ArrowsCommand::Check(a)) => arrows_check(a, config.threads),
        Command::Arrows(ArrowsCommand::Cnf(a)) => arrows_cnf(a),
        Command::Formulas(a) => formulas(a),
    }
}

fn tolerance(multiplier: f64) -> Res<ToleranceProfile> {
    let t = ToleranceProfile::with_multiplier(multiplier);
    t.validate()?;
    Ok(t)
}

fn fit_status(o: OverallStatus) -> (&'static str, i32) {
    match o {
        OverallStatus::AllProven => ("all_proven", 0),
        OverallStatus::SampledOnly => ("sampled_only", 2),
        OverallStatus::Failed => ("failed", 1),
    }
}

fn fit_build(a: &FitBuildArgs) -> Res<Outcome> {
    let tol = tolerance(a.tol_multiplier)?;
    if a.n < 3 {
        return Err(Error::InvalidInput(format!("n = {} must be at least 3", a.n)));
    }
    let opts = BuildOptions {
        strict_sampling: a.strict_sampling,
        certify: CertifyOptions {
            discrepancy_pairs: a.pairs,
            sample_seed: a.seed,
            spectral: true,
        },
        ..BuildOptions::default()
    };
    let (build, note) = match fit::build_fit_graph_with(a.n, a.seed, &tol, a.retries, &opts) {
        Ok(b) => (b, None),
        Err(e) => match e.last {
            Some(last) => (*last, Some(format!("no attempt passed: {}", e.reason))),
            None => return Err(Error::RepairFailed(e.to_string())),
        },
    };
    let g6 = io::to_graph6(&build.graph);
    if let Some(p) = &a.out {
        write(p, &format!("{g6}\n"))?;
    }
    if let Some(p) = &a.cert {
        write(p, &(serde_json::to_string_pretty(&build.certificate).expect("serializes") + "\n"))?;
    }
    if let Some(p) = &a.log {
        write(p, &(serde_json::to_string_pretty(&build.log).expect("serializes") + "\n"))?;
    }
    let (status, code) = fit_status(build.certificate.overall());
    Ok(Outcome::new(
        status,
        code,
        json!({
            "seed_used": build.seed,
            "graph6": g6,
            "note": note,
            "certificate": build.certificate,
        }),
    ))
}

fn fit_certify(a: &FitCertifyArgs) -> Res<Outcome> {
    let tol = tolerance(a.tol_multiplier)?;
    let g = load_graph(&a.input)?;
    let opts = CertifyOptions {
        discrepancy_pairs: a.pairs,
        sample_seed: a.seed,
        spectral: !a.no_spectral,
    };
    let cert = fit::certify_fit_with(&g, a.n, &tol, &opts);
    let (status, code) = fit_status(cert.overall());
    Ok(Outcome::new(status, code, json!({ "certificate": cert })))
}

fn avoidance_spec(n: usize, k: Option<usize>) -> Res<AvoidanceSpec> {
    AvoidanceSpec::new(n, k.map_or(BlueForbidden::AllOdd, BlueForbidden::Length))
}

fn color_extremal(a: &ExtremalArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    match coloring::color_extremal_lower_bound(&g, a.n)? {
        None => Ok(Outcome::new("inapplicable", 1, json!({ "reason": "every degree exceeds n" }))),
        Some(ex) => {
            let verdict = coloring::verify_avoidance(&g, &ex.coloring, &avoidance_spec(a.n, None)?)?;
            if let Some(p) = &a.out {
                write(p, &ex.coloring.to_text())?;
            }
            let (status, code) = if verdict.clean { ("clean", 0) } else { ("violation", 1) };
            Ok(Outcome::new(
                status,
                code,
                json!({
                    "vertex": ex.vertex,
                    "part": ex.part,
                    "red_edges": ex.coloring.red().edge_count(),
                    "blue_edges": ex.coloring.blue().edge_count(),
                    "verdict": verdict,
                }),
            ))
        }
    }
}

fn color_blocking(a: &BlockingArgs) -> Res<Outcome> {
    let (g, c) = coloring::color_bipartite_blocking(a.n, a.k)?;
    let verdict = coloring::verify_avoidance(&g, &c, &avoidance_spec(a.n, Some(a.k))?)?;
    if let Some(p) = &a.out {
        write(p, &c.to_text())?;
    }
    if let Some(p) = &a.graph_out {
        write(p, &format!("{}\n", io::to_graph6(&g)))?;
    }
    let (status, code) = if verdict.clean { ("clean", 0) } else { ("violation", 1) };
    Ok(Outcome::new(
        status,
        code,
        json!({
            "vertex_count": g.vertex_count(),
            "red_edges": c.red().edge_count(),
            "blue_edges": c.blue().edge_count(),
            "verdict": verdict,
        }),
    ))
}

fn color_verify(a: &VerifyArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    let c = load_coloring(&g, &a.coloring)?;
    let verdict = coloring::verify_avoidance_with_budget(&g, &c, &avoidance_spec(a.n, a.k)?, a.budget_nodes)?;
    let (status, code) = if verdict.clean { ("clean", 0) } else { ("violation", 1) };
    Ok(Outcome::new(status, code, json!({ "verdict": verdict })))
}

struct Sides {
    g: Graph,
    c: EdgeColoring,
    v1: VertexSet,
    v2: VertexSet,
    n: usize,
    thr: SideThresholds,
    opts: BuilderOptions,
}

fn load_sides(a: &SidesArgs) -> Res<Sides> {
    let g = load_graph(&a.input)?;
    let c = load_coloring(&g, &a.coloring)?;
    let v1 = parse_vertex_list(&a.v1, g.vertex_count())?;
    let v2 = parse_vertex_list(&a.v2, g.vertex_count())?;
    let n = a.n.unwrap_or(g.vertex_count().div_ceil(2));
    let thr = SideThresholds::scaled(n, a.threshold_multiplier)?;
    if !(a.epsilon > 0.0 && a.epsilon < 0.5) {
        return Err(Error::InvalidInput(format!("epsilon {} must lie in (0, 0.5)", a.epsilon)));
    }
    let opts = BuilderOptions {
        epsilon: a.epsilon,
        seed: a.seed,
        ..BuilderOptions::default()
    };
    Ok(Sides { g, c, v1, v2, n, thr, opts })
}

fn family_outcome(fam: &witness::CycleFamily, extra: Value) -> Outcome {
    let (status, code) = if fam.is_complete() { ("complete", 0) } else { ("gaps", 1) };
    let cycles: serde_json::Map<String, Value> = fam
        .cycles
        .iter()
        .map(|(l, c)| (l.to_string(), json!(c.vertices())))
        .collect();
    Outcome::new(
        status,
        code,
        json!({
            "details": extra,
            "lengths": fam.lengths(),
            "gaps": fam.gaps,
            "cycles": cycles,
        }),
    )
}

fn blue_spectrum(a: &BlueSpectrumArgs) -> Res<Outcome> {
    let s = load_sides(&a.sides)?;
    let route = match (&a.hub, &a.endgame) {
        (Some(h), _) => BlueRoute::Hub { hub: *h },
        (None, Some(text)) => {
            let v: Vec<usize> = text
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("endgame: {e}")))?;
            let [s0, w, v1, v2, v3] = v[..] else {
                return Err(Error::InvalidInput("endgame needs five vertices s,w,v1,v2,v3".into()));
            };
            BlueRoute::Endgame(EndgameConfig { s: s0, w, v1, v2, v3 })
        }
        (None, None) => return Err(Error::InvalidInput("give --hub or --endgame".into())),
    };
    let max_len = a.max_len.unwrap_or(s.n);
    let fam = witness::build_blue_spectrum(&s.g, &s.c, &s.v1, &s.v2, route, max_len, &s.thr, &s.opts)?;
    Ok(family_outcome(&fam, json!({ "route": route, "thresholds": s.thr })))
}

fn red_pancyclic(a: &RedPancyclicArgs) -> Res<Outcome> {
    let s = load_sides(&a.sides)?;
    let cl = witness::classify_vertices(&s.g, &s.c, &s.v1, &s.v2, &s.thr)?;
    let (w, v) = if a.side == 1 { (&cl.w1, &s.v1) } else { (&cl.w2, &s.v2) };
    let r = witness::build_red_pancyclic(&s.g, &s.c, w, v, a.external, &s.thr, &s.opts)?;
    Ok(family_outcome(
        &r.family,
        json!({
            "classification": cl,
            "centre": r.centre,
            "split_sizes": r.split_sizes,
            "greedy_split": r.greedy_split,
            "extended": r.extended,
            "thresholds": s.thr,
        }),
    ))
}

fn load_pair(a: &PairArgs) -> Res<(Graph, VertexSet, VertexSet)> {
    let g = load_graph(&a.input)?;
    let x = parse_vertex_list(&a.a, g.vertex_count())?;
    let y = parse_vertex_list(&a.b, g.vertex_count())?;
    Ok((g, x, y))
}

fn mode(samples: Option<usize>, seed: u64) -> RegularityMode {
    match samples {
        Some(samples) => RegularityMode::Sampled { samples, seed },
        None => RegularityMode::Exhaustive,
    }
}

fn reg_density(a: &PairArgs) -> Res<Outcome> {
    let (g, x, y) = load_pair(a)?;
    let d = regularity::pair_density(&g, &x, &y)?;
    Ok(Outcome::new("ok", 0, json!({ "density": regularity::Fraction::from(d) })))
}

fn reg_pair(a: &RegPairArgs) -> Res<Outcome> {
    let (g, x, y) = load_pair(&a.pair)?;
    let v = regularity::check_regular_pair(&g, &x, &y, a.eps, mode(a.samples, a.seed))?;
    let (status, code) = match v {
        RegularityVerdict::Regular { .. } => ("regular", 0),
        RegularityVerdict::Irregular(_) => ("irregular", 1),
        RegularityVerdict::HeuristicRegular { .. } => ("heuristic_regular", 2),
    };
    Ok(Outcome::new(status, code, json!({ "verdict": v })))
}

fn reg_reduce(a: &ReduceArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    let c = load_coloring(&g, &a.coloring)?;
    let p = Partition::from_text(g.vertex_count(), &read(&a.partition)?)?;
    let r = regularity::reduced_graph(&g, &c, &p, a.eps, mode(a.samples, a.seed))?;
    Ok(Outcome::new("ok", 0, json!({ "reduced_graph": r })))
}

fn reg_mt(a: &MtArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    match regularity::property_mt(&g, a.t)? {
        Some(cert) => Ok(Outcome::new("holds", 0, json!({ "certificate": cert }))),
        None => Ok(Outcome::new("fails", 1, json!({ "certificate": null }))),
    }
}

fn cycles_spectrum(a: &SpectrumArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    let sp = graph::cycle_spectrum(&g, a.max_len, a.budget_nodes)?;
    let witnesses: serde_json::Map<String, Value> = sp
        .statuses
        .iter()
        .filter_map(|(l, s)| match s {
            graph::CycleStatus::Present(w) => Some((l.to_string(), json!(w.vertices()))),
            _ => None,
        })
        .collect();
    let (status, code) = if sp.unknown().is_empty() { ("complete", 0) } else { ("unknown", 2) };
    Ok(Outcome::new(
        status,
        code,
        json!({
            "present": sp.present(),
            "absent": sp.absent(),
            "unknown": sp.unknown(),
            "witnesses": witnesses,
        }),
    ))
}

fn arrows_check(a: &ArrowsCheckArgs, threads: usize) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    let budget = SearchBudget {
        max_nodes: a.budget_nodes,
        max_time: a.budget_seconds.map(Duration::from_secs),
        threads: if threads == 0 { rayon::current_num_threads() } else { threads },
        deterministic: a.deterministic || threads == 1,
    };
    budget.validate()?;
    let v = arrow::arrows(&g, a.n, a.k, &budget)?;
    let (status, code, counterexample) = match &v.status {
        ArrowStatus::Arrows => ("arrows", 0, None),
        ArrowStatus::NotArrows(c) => {
            if let Some(p) = &a.witness_out {
                write(p, &c.to_text())?;
            }
            let edges: Vec<(usize, usize, char)> = c.colored_edges().map(|(u, v, col)| (u, v, col.letter())).collect();
            ("not_arrows", 1, Some(edges))
        }
        ArrowStatus::Unknown => ("unknown", 2, None),
    };
    Ok(Outcome::new(
        status,
        code,
        json!({
            "nodes_explored": v.nodes_explored,
            "counterexample": counterexample,
        }),
    ))
}

fn arrows_cnf(a: &ArrowsCnfArgs) -> Res<Outcome> {
    let g = load_graph(&a.input)?;
    let cnf = arrow::export_cnf(&g, a.n, a.k)?;
    write(&a.out, &cnf.to_dimacs())?;
    Ok(Outcome::new(
        "ok",
        0,
        json!({ "variables": cnf.vars, "clauses": cnf.clauses.len() }),
    ))
}

fn formulas(a: &FormulasArgs) -> Res<Outcome> {
    let rstar = arrow::rstar_formula(a.n)?;
    let ramsey = match a.k {
        Some(k) => Some(arrow::ramsey_cycle_number(a.n, k)?),
        None => None,
    };
    Ok(Outcome::new(
        "ok",
        0,
        json!({
            "n": a.n,
            "k": a.k,
            "rstar_cn_c3": rstar,
            "ramsey_cn_ck": ramsey,
        }),
    ))
}
