//! Construction of `n`-fit graphs.
//!
//! A graph on `2n − 1` vertices is `n`-fit when it has exactly
//! `⌈(n+1)(2n−1)/2⌉` edges, minimum degree `n + 1` (all degrees `n + 1`,
//! except one vertex of degree `n + 2` when `n` is even), every codegree is
//! within `n^0.7` of `n/2`, and every pair of vertex sets has
//! `|e(S,T) − |S||T|/2| ≤ n^1.7`.
//!
//! The builder samples a binomial random graph with edge probability 1/2,
//! trims edges at over-full vertices, repairs the remaining degree deficit by
//! edge switchings and finally certifies the four conditions. Every edit is
//! logged so the output can be replayed from the seed.

mod certify;
mod repair;

pub use certify::{
    certify_fit, certify_fit_with, CertifyOptions, ConditionEntry, ConditionStatus, FitCertificate,
    OverallStatus, Witness,
};
pub use repair::{switch_repair, trim_surplus_edges, RepairLog, RepairOp, RepairSummary};

use crate::error::{invalid, Result};
use crate::graph::{edge_count_between, Graph, GraphBuilder, VertexSet};
use crate::rng::{self, Stream};
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Exponents and scale of the pseudo-randomness thresholds.
///
/// Degrees and codegrees of the raw sample are held to
/// `multiplier·n^deg_exponent`, set-pair discrepancy of the sample to
/// `multiplier·n^(deg_exponent + 1)`; the finished graph is held to
/// `multiplier·n^codeg_exponent` (codegrees) and `multiplier·n^disc_exponent`
/// (discrepancy).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToleranceProfile {
    pub deg_exponent: f64,
    pub codeg_exponent: f64,
    pub disc_exponent: f64,
    pub multiplier: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            deg_exponent: 0.6,
            codeg_exponent: 0.7,
            disc_exponent: 1.7,
            multiplier: 1.0,
        }
    }
}

impl ToleranceProfile {
    pub fn with_multiplier(multiplier: f64) -> Self {
        ToleranceProfile {
            multiplier,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, e) in [
            ("deg_exponent", self.deg_exponent),
            ("codeg_exponent", self.codeg_exponent),
            ("disc_exponent", self.disc_exponent),
        ] {
            if !(e > 0.0 && e < 2.0) {
                return invalid(format!("{name} = {e} must lie in (0, 2)"));
            }
        }
        if !(self.multiplier > 0.0 && self.multiplier.is_finite()) {
            return invalid(format!("multiplier {} must be positive", self.multiplier));
        }
        Ok(())
    }

    fn scaled(&self, n: usize, exponent: f64) -> f64 {
        self.multiplier * (n as f64).powf(exponent)
    }

    pub fn degree_tolerance(&self, n: usize) -> f64 {
        self.scaled(n, self.deg_exponent)
    }

    pub fn sample_discrepancy_tolerance(&self, n: usize) -> f64 {
        self.scaled(n, self.deg_exponent + 1.0)
    }

    pub fn codegree_tolerance(&self, n: usize) -> f64 {
        self.scaled(n, self.codeg_exponent)
    }

    pub fn discrepancy_tolerance(&self, n: usize) -> f64 {
        self.scaled(n, self.disc_exponent)
    }
}

/// Required degree of every vertex of an `n`-fit graph: `n + 1`, with vertex
/// 0 raised to `n + 2` when `n` is even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetDegreeProfile {
    n: usize,
    targets: Vec<usize>,
}

impl TargetDegreeProfile {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return invalid(format!("n = {n} must be at least 2"));
        }
        let mut targets = vec![n + 1; 2 * n - 1];
        if n % 2 == 0 {
            targets[0] = n + 2;
        }
        let p = TargetDegreeProfile { n, targets };
        debug_assert_eq!(p.total(), 2 * ((n + 1) * (2 * n - 1)).div_ceil(2));
        Ok(p)
    }

    /// Arbitrary targets on any number of vertices. At most one vertex may
    /// differ from `n + 1`.
    pub fn with_targets(n: usize, targets: Vec<usize>) -> Result<Self> {
        let odd = targets.iter().filter(|&&t| t != n + 1).count();
        if odd > 1 {
            return invalid(format!("{odd} vertices have a target other than n + 1 = {}", n + 1));
        }
        Ok(TargetDegreeProfile { n, targets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn target(&self, v: usize) -> usize {
        self.targets[v]
    }

    pub fn total(&self) -> usize {
        self.targets.iter().sum()
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.vertex_count() != self.targets.len() {
            return invalid(format!(
                "graph has {} vertices, degree profile expects {}",
                g.vertex_count(),
                self.targets.len()
            ));
        }
        Ok(())
    }
}

/// Binomial random graph on `2n − 1` vertices.
///
/// Pairs `(i, j)`, `i < j`, are visited in lexicographic order; the pair
/// becomes an edge iff the next 64-bit output of the seeded generator is
/// below `2^63`.
pub fn sample_uniform_graph(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("n = {n} must be at least 2"));
    }
    let order = 2 * n - 1;
    let mut rng = rng::substream(seed, Stream::Sample);
    let mut b = GraphBuilder::new(order);
    for i in 0..order {
        for j in i + 1..order {
            if rng.next_u64() < 1 << 63 {
                b.add_edge(i, j);
            }
        }
    }
    Ok(b.build())
}

/// Where a check found its largest deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub threshold: f64,
    pub worst_deviation: f64,
    pub witness: Witness,
}

/// Degree, codegree and sampled set-pair discrepancy of a raw sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingReport {
    pub degree: PropertyCheck,
    pub codegree: PropertyCheck,
    pub discrepancy: PropertyCheck,
    pub discrepancy_pairs: usize,
}

impl SamplingReport {
    pub fn all_passed(&self) -> bool {
        self.degree.passed && self.codegree.passed && self.discrepancy.passed
    }
}

/// Checks a sampled graph against `|deg − n| ≤ t`, `|codeg − n/2| ≤ t` with
/// `t = multiplier·n^deg_exponent`, and the set-pair discrepancy against
/// `multiplier·n^(deg_exponent+1)` on `pairs` sampled pairs.
pub fn check_pseudorandom_properties(
    g: &Graph,
    n: usize,
    tol: &ToleranceProfile,
    pairs: usize,
    seed: u64,
) -> Result<SamplingReport> {
    tol.validate()?;
    if n < 2 || g.vertex_count() != 2 * n - 1 {
        return invalid(format!("expected {} vertices for n = {n}, got {}", 2 * n - 1, g.vertex_count()));
    }
    let t = tol.degree_tolerance(n);
    let (dv, ddev) = (0..g.vertex_count())
        .map(|v| (v, (g.degree(v) as f64 - n as f64).abs()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let degree = PropertyCheck {
        passed: ddev <= t,
        threshold: t,
        worst_deviation: ddev,
        witness: Witness::Vertex { vertex: dv },
    };
    let (pair, cdev) = worst_codegree(g, n as f64 / 2.0);
    let codegree = PropertyCheck {
        passed: cdev <= t,
        threshold: t,
        worst_deviation: cdev,
        witness: Witness::Pair { v: pair.0, w: pair.1 },
    };
    let dt = tol.sample_discrepancy_tolerance(n);
    let sample = sample_discrepancy(g, pairs, seed);
    let discrepancy = PropertyCheck {
        passed: sample.worst_deviation <= dt,
        threshold: dt,
        worst_deviation: sample.worst_deviation,
        witness: sample.witness,
    };
    Ok(SamplingReport {
        degree,
        codegree,
        discrepancy,
        discrepancy_pairs: sample.evaluated,
    })
}

/// Largest `|codeg(v, w) − centre|` over all pairs, with the first pair
/// attaining it.
pub(crate) fn worst_codegree(g: &Graph, centre: f64) -> ((usize, usize), f64) {
    let n = g.vertex_count();
    (0..n)
        .into_par_iter()
        .map(|v| {
            let mut best = ((v, v), -1.0f64);
            for w in v + 1..n {
                let c = crate::graph::popcount_and(g.row(v), g.row(w)) as f64;
                let d = (c - centre).abs();
                if d > best.1 {
                    best = ((v, w), d);
                }
            }
            best
        })
        .reduce(|| ((0, 0), -1.0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })
}

pub(crate) struct DiscrepancySample {
    pub worst_deviation: f64,
    pub witness: Witness,
    pub evaluated: usize,
}

/// Evaluates `|e(S,T) − |S||T|/2|` on structured pairs (`V×V`, each
/// neighbourhood against itself and against its complement) followed by
/// `random_pairs` pairs whose members are drawn with per-pair random
/// inclusion probabilities.
pub(crate) fn sample_discrepancy(g: &Graph, random_pairs: usize, seed: u64) -> DiscrepancySample {
    let n = g.vertex_count();
    let all = g.all_vertices();
    let mut cands: Vec<(VertexSet, VertexSet)> = vec![(all.clone(), all.clone())];
    for v in 0..n {
        let nb = g.neighborhood(v);
        let rest = all.difference(&nb);
        cands.push((nb.clone(), nb.clone()));
        cands.push((nb, rest));
    }
    let mut rng = rng::substream(seed, Stream::Discrepancy);
    for _ in 0..random_pairs {
        let p: f64 = rng.gen();
        let q: f64 = rng.gen();
        let mut s = VertexSet::new(n);
        let mut t = VertexSet::new(n);
        for v in 0..n {
            if rng.gen_bool(p) {
                s.insert(v);
            }
            if rng.gen_bool(q) {
                t.insert(v);
            }
        }
        cands.push((s, t));
    }
    let evaluated = cands.len();
    let (idx, dev) = cands
        .par_iter()
        .enumerate()
        .map(|(i, (s, t))| {
            let e = edge_count_between(g, s, t).expect("sets share the graph's universe") as f64;
            (i, (e - (s.len() * t.len()) as f64 / 2.0).abs())
        })
        .reduce(|| (usize::MAX, -1.0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    let (s, t) = &cands[idx];
    DiscrepancySample {
        worst_deviation: dev,
        witness: Witness::Sets {
            s: s.iter().collect(),
            t: t.iter().collect(),
        },
        evaluated,
    }
}

/// Knobs for [`build_fit_graph_with`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildOptions {
    /// Reject samples failing the degree/codegree/discrepancy checks instead
    /// of only recording them.
    pub strict_sampling: bool,
    pub sampling_pairs: usize,
    pub certify: CertifyOptions,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            strict_sampling: false,
            sampling_pairs: 1_000,
            certify: CertifyOptions::default(),
        }
    }
}

/// A finished build: the graph, its certificate and the edit log that
/// turns `sample_uniform_graph(n, seed)` into it.
#[derive(Clone, Debug)]
pub struct FitBuild {
    pub graph: Graph,
    pub certificate: FitCertificate,
    pub log: RepairLog,
    pub seed: u64,
}

impl FitBuild {
    /// Re-samples from the recorded seed and replays the log.
    pub fn replay(&self) -> Result<Graph> {
        let base = sample_uniform_graph(self.certificate.n, self.seed)?;
        self.log.replay(&base)
    }
}

/// Every attempt failed; carries the last attempt that reached
/// certification, if any.
#[derive(Debug)]
pub struct FitBuildError {
    pub attempts: u32,
    pub reason: String,
    pub last: Option<Box<FitBuild>>,
}

impl fmt::Display for FitBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no n-fit graph after {} attempts: {}", self.attempts, self.reason)
    }
}

impl std::error::Error for FitBuildError {}

/// [`build_fit_graph_with`] using default options.
pub fn build_fit_graph(
    n: usize,
    seed: u64,
    tol: &ToleranceProfile,
    max_retries: u32,
) -> Result<FitBuild, FitBuildError> {
    build_fit_graph_with(n, seed, tol, max_retries, &BuildOptions::default())
}

/// sample → check → trim → switch repair → certify, retrying with
/// `seed + 1, seed + 2, …` on failure, at most `max_retries` times.
pub fn build_fit_graph_with(
    n: usize,
    seed: u64,
    tol: &ToleranceProfile,
    max_retries: u32,
    opts: &BuildOptions,
) -> Result<FitBuild, FitBuildError> {
    let early = |reason: String| FitBuildError {
        attempts: 0,
        reason,
        last: None,
    };
    if n < 3 {
        return Err(early(format!("n = {n} must be at least 3")));
    }
    tol.validate().map_err(|e| early(e.to_string()))?;

    let mut last = None;
    let mut reason = String::new();
    for retry in 0..=max_retries {
        let attempt_seed = seed.wrapping_add(retry as u64);
        match build_once(n, attempt_seed, retry, tol, opts) {
            Ok(build) => {
                if build.certificate.overall() != OverallStatus::Failed {
                    return Ok(build);
                }
                reason = format!("seed {attempt_seed}: certificate has a failed condition");
                last = Some(Box::new(build));
            }
            Err(e) => reason = format!("seed {attempt_seed}: {e}"),
        }
    }
    Err(FitBuildError {
        attempts: max_retries + 1,
        reason,
        last,
    })
}

fn build_once(n: usize, seed: u64, retry: u32, tol: &ToleranceProfile, opts: &BuildOptions) -> Result<FitBuild> {
    let sample = sample_uniform_graph(n, seed)?;
    let sampling = check_pseudorandom_properties(&sample, n, tol, opts.sampling_pairs, seed)?;
    if opts.strict_sampling && !sampling.all_passed() {
        return Err(crate::Error::Precondition("sample fails the pseudo-randomness checks".into()));
    }
    let profile = TargetDegreeProfile::new(n)?;
    let mut log = RepairLog::new(sample.vertex_count());
    let trimmed = repair::trim_into(&sample, &profile, &mut log)?;
    let mut rng = rng::substream(seed, Stream::Repair);
    let graph = repair::switch_into(&trimmed, &profile, &mut rng, &mut log)?;

    let replayed = log.replay(&sample)?;
    assert_eq!(replayed, graph, "repair log does not replay to the output graph");

    let mut certificate = certify_fit_with(&graph, n, tol, &opts.certify);
    certificate.seed = Some(seed);
    certificate.retries_used = retry;
    certificate.sampling = Some(sampling);
    certificate.repair = Some(log.summary(n, tol));
    Ok(FitBuild {
        graph,
        certificate,
        log,
        seed,
    })
}
