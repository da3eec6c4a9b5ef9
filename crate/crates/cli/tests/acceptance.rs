//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed. Built with `harness = false`.

use clap::Parser;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use ramsey_fit::arrow::{self, ArrowStatus, SearchBudget};
use ramsey_fit::coloring::{self, AvoidanceSpec, BlueForbidden, Color, EdgeColoring};
use ramsey_fit::fit::{self, ConditionStatus, FitBuild, ToleranceProfile};
use ramsey_fit::graph::{self, io};
use ramsey_fit::regularity::{self, Partition, RegularityMode, RegularityVerdict};
use ramsey_fit::witness::{self, BlueRoute, BuilderOptions, SideThresholds};
use ramsey_fit::{Graph, VertexSet};
use ramsey_fit_cli::{run_experiment, ExperimentConfig};
use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("formula suite", formulas),
        ("fit pipeline", fit_pipeline),
        ("repair-log replay", replay),
        ("extremal lower-bound colouring", extremal),
        ("blocking colouring", blocking),
        ("arrowing oracle equivalence", arrowing_oracle),
        ("CNF cross-check", cnf_cross_check),
        ("witness builders", witness_builders),
        ("cycle spectrum", cycle_spectrum),
        ("regularity tools", regularity_tools),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- oracles

/// Every cycle of length `len`, as a mask over the edge indices of `edges`.
/// Walks all rooted, oriented copies and deduplicates by edge set.
fn cycle_masks(vertices: usize, edges: &[(usize, usize)], len: usize) -> Vec<u64> {
    let index = |u: usize, v: usize| edges.iter().position(|&e| e == (u.min(v), u.max(v)));
    let mut seen = HashSet::new();
    fn walk(
        path: &mut Vec<usize>,
        len: usize,
        vertices: usize,
        index: &dyn Fn(usize, usize) -> Option<usize>,
        mask: u64,
        seen: &mut HashSet<u64>,
    ) {
        let last = *path.last().unwrap();
        if path.len() == len {
            if let Some(i) = index(last, path[0]) {
                seen.insert(mask | 1 << i);
            }
            return;
        }
        for y in 0..vertices {
            if path.contains(&y) {
                continue;
            }
            if let Some(i) = index(last, y) {
                path.push(y);
                walk(path, len, vertices, index, mask | 1 << i, seen);
                path.pop();
            }
        }
    }
    if len <= vertices {
        for s in 0..vertices {
            walk(&mut vec![s], len, vertices, &index, 0, &mut seen);
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// `red` mask `r` avoids every cycle in `reds` and its complement every
/// cycle in `blues`.
fn avoids(r: u64, full: u64, reds: &[u64], blues: &[u64]) -> bool {
    reds.iter().all(|&c| c & r != c) && blues.iter().all(|&c| c & (full & !r) != c)
}

/// Full 2^m enumeration.
fn brute_arrows(vertices: usize, edges: &[(usize, usize)], n: usize, k: usize) -> bool {
    let reds = cycle_masks(vertices, edges, n);
    let blues = cycle_masks(vertices, edges, k);
    let full = (1u64 << edges.len()) - 1;
    !(0..=full).any(|r| avoids(r, full, &reds, &blues))
}

fn random_graph(rng: &mut Pcg64, vertices: usize, edges: usize) -> Graph {
    let mut all: Vec<(usize, usize)> = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(edges);
    Graph::from_edges(vertices, all).unwrap()
}

/// The small-graph corpus shared by criteria 6, 7 and 11.
fn corpus() -> Vec<Graph> {
    let mut rng = Pcg64::seed_from_u64(0xa11ce);
    (0..200)
        .map(|i| {
            let v = rng.gen_range(3..=8);
            let cap = (v * (v - 1) / 2).min(16);
            // Every other graph is near the edge cap, where arrowing happens.
            let m = if i % 2 == 0 { cap - rng.gen_range(0..=cap.min(2)) } else { rng.gen_range(0..=cap) };
            random_graph(&mut rng, v, m)
        })
        .collect()
}

fn binomial_cycles(vertices: u64, len: u64) -> u64 {
    // v! / ((v − l)! · 2l)
    let falling: u64 = (vertices - len + 1..=vertices).product();
    falling / (2 * len)
}

// ---------------------------------------------------------------- criteria

fn formulas() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for n in 4..1000usize {
        let want = ((n as u64 + 1) * (2 * n as u64 - 1)).div_ceil(2);
        let got = arrow::rstar_formula(n).map_err(|e| e.to_string())?;
        ensure!(got == want, "rstar({n}) = {got}, expected {want}");
        for k in (3..=n).step_by(2) {
            let got = arrow::ramsey_cycle_number(n, k).map_err(|e| e.to_string())?;
            ensure!(got == 2 * n as u64 - 1, "r(C_{n}, C_{k}) = {got}");
            checked += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.2}s");
    Ok(format!("{checked} (n, k) pairs exact in {:.0} ms", secs * 1e3))
}

fn builds() -> Vec<(usize, u64, Result<FitBuild, String>, Duration)> {
    let mut out = Vec::new();
    for n in [50usize, 100, 300] {
        for seed in 0..5u64 {
            let t = Instant::now();
            let r = fit::build_fit_graph(n, seed, &ToleranceProfile::default(), 3).map_err(|e| e.to_string());
            out.push((n, seed, r, t.elapsed()));
        }
    }
    out
}

fn fit_pipeline() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (n, seed, r, took) in builds() {
        let b = r.map_err(|e| format!("n={n} seed={seed}: {e}"))?;
        slowest = slowest.max(took);
        ensure!(took.as_secs_f64() <= 60.0, "n={n} seed={seed} took {took:?}");
        let c = &b.certificate;
        ensure!(c.retries_used <= 3, "n={n} seed={seed}: {} retries", c.retries_used);
        let nf = n as f64;
        for (name, e) in [("size", &c.size), ("degree", &c.degree)] {
            ensure!(
                e.status == ConditionStatus::Proven && e.method == "exact",
                "n={n} seed={seed}: {name} is {:?} via {}",
                e.status,
                e.method
            );
        }
        // Independent recount of (A) and (B).
        let order = 2 * n - 1;
        ensure!(b.graph.vertex_count() == order, "vertex count");
        ensure!(b.graph.edge_count() == ((n + 1) * order).div_ceil(2), "edge count");
        let high = b.graph.degrees().iter().filter(|&&d| d == n + 2).count();
        ensure!(
            b.graph.degrees().iter().all(|&d| d == n + 1 || d == n + 2) && high == usize::from(n % 2 == 0),
            "n={n} seed={seed}: degrees off"
        );
        ensure!(c.codegree.status == ConditionStatus::Proven, "n={n} seed={seed}: codegree {:?}", c.codegree.status);
        let worst_codeg = (0..order)
            .flat_map(|v| (v + 1..order).map(move |w| (v, w)))
            .map(|(v, w)| {
                let cd = graph::codegree(&b.graph, v, w).unwrap() as f64;
                (cd - nf / 2.0).abs()
            })
            .fold(0.0f64, f64::max);
        ensure!(worst_codeg <= nf.powf(0.7), "n={n} seed={seed}: codegree deviation {worst_codeg}");
        let d = &c.discrepancy;
        if n == 300 {
            let s = c.spectral.as_ref().ok_or("n=300 has no spectral report")?;
            let norm_threshold = (nf.powf(1.7) - order as f64 / 2.0) / order as f64;
            ensure!(
                d.status == ConditionStatus::Proven && d.method == "spectral" && s.certified_bound <= norm_threshold,
                "n=300 seed={seed}: discrepancy {:?} via {}, bound {} vs {norm_threshold}",
                d.status,
                d.method,
                s.certified_bound
            );
        } else {
            ensure!(
                d.status == ConditionStatus::Proven
                    || (d.status == ConditionStatus::SampledConsistent && d.method == "sampled"),
                "n={n} seed={seed}: discrepancy {:?}",
                d.status
            );
        }
    }
    Ok(format!("15 builds, slowest {:.1}s", slowest.as_secs_f64()))
}

fn replay() -> Outcome {
    let all = builds();
    for (n, seed, r, _) in &all {
        let b = r.as_ref().map_err(|e| format!("n={n} seed={seed}: {e}"))?;
        let replayed = b.replay().map_err(|e| e.to_string())?;
        ensure!(replayed == b.graph, "n={n} seed={seed}: replay differs");
        let again = fit::build_fit_graph(*n, *seed, &ToleranceProfile::default(), 3).map_err(|e| e.to_string())?;
        ensure!(again.graph == b.graph && again.log == b.log, "n={n} seed={seed}: rebuild differs");
    }
    Ok(format!("{} of {} builds replay exactly", all.len(), all.len()))
}

fn extremal() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(4);
    let mut total = 0;
    for n in 4..=10usize {
        let order = 2 * n - 1;
        let cap = ((n + 1) * order).div_ceil(2);
        for i in 0..100 {
            // Half the graphs sit just below the edge count, half anywhere.
            let m = if i % 2 == 0 {
                rng.gen_range(cap - order..cap)
            } else {
                rng.gen_range(0..cap)
            };
            let g = random_graph(&mut rng, order, m);
            let ex = coloring::color_extremal_lower_bound(&g, n)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("n={n} graph {i}: not applicable with {m} edges"))?;
            let spec = AvoidanceSpec::new(n, BlueForbidden::AllOdd).unwrap();
            let v = coloring::verify_avoidance(&g, &ex.coloring, &spec).map_err(|e| e.to_string())?;
            ensure!(v.clean, "n={n} graph {i}: {:?}", v.violation);
            total += 1;
        }
    }
    Ok(format!("{total} colourings clean"))
}

fn blocking() -> Outcome {
    let mut cases = 0;
    for n in 4..=7usize {
        for k in (3..=n).step_by(2) {
            let (g, c) = coloring::color_bipartite_blocking(n, k).map_err(|e| e.to_string())?;
            ensure!(g == Graph::complete(2 * n - 2), "host for n={n} is not K_{}", 2 * n - 2);
            let spec = AvoidanceSpec::new(n, BlueForbidden::Length(k)).unwrap();
            let v = coloring::verify_avoidance(&g, &c, &spec).map_err(|e| e.to_string())?;
            ensure!(v.clean, "n={n} k={k}: blocking colouring {:?}", v.violation);
            let verdict = arrow::arrows(&g, n, k, &SearchBudget::default()).map_err(|e| e.to_string())?;
            let ArrowStatus::NotArrows(w) = verdict.status else {
                return Err(format!("n={n} k={k}: arrows says {}", verdict.status.name()));
            };
            let v = coloring::verify_avoidance(&g, &w, &spec).map_err(|e| e.to_string())?;
            ensure!(v.clean, "n={n} k={k}: search witness {:?}", v.violation);
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, k) cases"))
}

fn arrows_status(g: &Graph, n: usize, k: usize, threads: usize) -> Result<ArrowStatus, String> {
    let budget = SearchBudget {
        threads,
        ..SearchBudget::default()
    };
    Ok(arrow::arrows(g, n, k, &budget).map_err(|e| e.to_string())?.status)
}

fn arrowing_oracle() -> Outcome {
    let t = Instant::now();
    let mut arrowing = 0;
    for (i, g) in corpus().iter().enumerate() {
        let edges: Vec<_> = g.edges().collect();
        for (n, k) in [(3, 3), (4, 3)] {
            let want = brute_arrows(g.vertex_count(), &edges, n, k);
            let got = arrows_status(g, n, k, 1)?;
            match (&got, want) {
                (ArrowStatus::Arrows, true) => arrowing += 1,
                (ArrowStatus::NotArrows(c), false) => {
                    let spec = AvoidanceSpec::new(n, BlueForbidden::Length(k)).unwrap();
                    ensure!(coloring::verify_avoidance(g, c, &spec).unwrap().clean, "graph {i}: bad witness");
                }
                _ => return Err(format!("graph {i} ({n},{k}): search {} vs enumeration {want}", got.name())),
            }
        }
    }
    ensure!(matches!(arrows_status(&Graph::complete(6), 3, 3, 1)?, ArrowStatus::Arrows), "K6 does not arrow (C3, C3)");
    ensure!(
        matches!(arrows_status(&Graph::complete(5), 3, 3, 1)?, ArrowStatus::NotArrows(_)),
        "K5 arrows (C3, C3)"
    );
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs <= 300.0, "took {secs:.0}s");
    Ok(format!("400 verdicts agree ({arrowing} arrowing), K6 yes, K5 no"))
}

fn satisfiable(cnf: &arrow::Cnf) -> bool {
    let bit = |a: u64, l: i64| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0);
    (0u64..1 << cnf.vars).any(|a| cnf.clauses.iter().all(|c| c.iter().any(|&l| bit(a, l))))
}

fn cnf_cross_check() -> Outcome {
    for (i, g) in corpus().iter().enumerate() {
        for (n, k) in [(3, 3), (4, 3)] {
            let cnf = arrow::export_cnf(g, n, k).map_err(|e| e.to_string())?;
            let arrows = matches!(arrows_status(g, n, k, 1)?, ArrowStatus::Arrows);
            ensure!(satisfiable(&cnf) == !arrows, "graph {i} ({n},{k}): sat = {}, arrows = {arrows}", !arrows);
        }
    }
    let mut counted = 0;
    for v in [5usize, 6] {
        for (n, k) in [(3, 3), (4, 3), (5, 3), (5, 5), (6, 3), (6, 5)] {
            if n > v {
                continue;
            }
            let cnf = arrow::export_cnf(&Graph::complete(v), n, k).map_err(|e| e.to_string())?;
            let want = binomial_cycles(v as u64, n as u64) + binomial_cycles(v as u64, k as u64);
            ensure!(cnf.clauses.len() as u64 == want, "K{v} ({n},{k}): {} clauses, expected {want}", cnf.clauses.len());
            ensure!(cnf.vars == v * (v - 1) / 2, "K{v}: {} variables", cnf.vars);
            counted += 1;
        }
    }
    Ok(format!("400 satisfiability checks, {counted} clause counts exact"))
}

const WN: usize = 60;

/// Fit host on 119 vertices, halves red inside and blue across, vertex 118
/// blue to everything.
fn witness_instance(seed: u64) -> (Graph, EdgeColoring, VertexSet, VertexSet) {
    let g = match fit::build_fit_graph(WN, seed, &ToleranceProfile::default(), 3) {
        Ok(b) => b.graph,
        Err(e) => e.last.expect("repair completes").graph,
    };
    let half = WN - 1;
    let c = EdgeColoring::from_fn(&g, |u, v| {
        if v == 2 * half || (u < half) != (v < half) {
            Color::Blue
        } else {
            Color::Red
        }
    });
    let v1 = VertexSet::from_range(g.vertex_count(), 0..half);
    let v2 = VertexSet::from_range(g.vertex_count(), half..2 * half);
    (g, c, v1, v2)
}

fn check_family(fam: &witness::CycleFamily, class: &Graph, want: &[usize], inside: Option<&VertexSet>) -> Outcome {
    ensure!(fam.is_complete(), "gaps {:?}", fam.gaps);
    ensure!(fam.lengths() == want, "lengths {:?}", fam.lengths());
    for (l, cyc) in &fam.cycles {
        ensure!(cyc.len() == *l, "cycle keyed {l} has length {}", cyc.len());
        let vs = cyc.vertices();
        let distinct: BTreeSet<_> = vs.iter().collect();
        ensure!(distinct.len() == vs.len(), "C_{l} repeats a vertex");
        for i in 0..vs.len() {
            ensure!(class.has_edge(vs[i], vs[(i + 1) % vs.len()]), "C_{l} uses a non-edge");
        }
        if let Some(w) = inside {
            ensure!(vs.iter().all(|&x| w.contains(x)), "C_{l} leaves its side");
        }
    }
    Ok(String::new())
}

fn witness_builders() -> Outcome {
    let t = Instant::now();
    let (g, c, v1, v2) = witness_instance(1);
    let thr = SideThresholds::scaled(WN, 0.5).unwrap();
    let opts = BuilderOptions::default();
    let fam = witness::build_blue_spectrum(&g, &c, &v1, &v2, BlueRoute::Hub { hub: 118 }, WN, &thr, &opts)
        .map_err(|e| e.to_string())?;
    check_family(&fam, c.blue(), &(3..=WN).collect::<Vec<_>>(), None).map_err(|e| format!("blue: {e}"))?;
    let cl = witness::classify_vertices(&g, &c, &v1, &v2, &thr).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for (w, v) in [(&cl.w1, &v1), (&cl.w2, &v2)] {
        let r = witness::build_red_pancyclic(&g, &c, w, v, None, &thr, &opts).map_err(|e| e.to_string())?;
        check_family(&r.family, c.red(), &(3..=w.len()).collect::<Vec<_>>(), Some(w))
            .map_err(|e| format!("red |W|={}: {e}", w.len()))?;
        sizes.push(w.len());
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs <= 60.0, "took {secs:.1}s");
    Ok(format!("blue 3..={WN}, red 3..={:?}, all verified", sizes))
}

fn simple_cycle_lengths(g: &Graph) -> BTreeSet<usize> {
    fn go(g: &Graph, start: usize, path: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        let last = *path.last().unwrap();
        for y in g.neighbors(last) {
            if y == start && path.len() >= 3 {
                out.insert(path.len());
            } else if y > start && !path.contains(&y) {
                path.push(y);
                go(g, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.vertex_count() {
        go(g, s, &mut vec![s], &mut out);
    }
    out
}

fn cycle_spectrum() -> Outcome {
    let p = Graph::petersen();
    let sp = graph::cycle_spectrum(&p, 10, u64::MAX).map_err(|e| e.to_string())?;
    let oracle: Vec<usize> = simple_cycle_lengths(&p).into_iter().collect();
    ensure!(sp.present() == [5, 6, 8, 9], "present {:?}", sp.present());
    ensure!(sp.present() == oracle, "oracle {:?}", oracle);
    ensure!(sp.unknown().is_empty(), "unknown {:?}", sp.unknown());
    for (l, s) in &sp.statuses {
        if let graph::CycleStatus::Present(w) = s {
            w.verify(&p).map_err(|e| format!("C_{l}: {e}"))?;
        }
    }
    Ok("present {5, 6, 8, 9}".into())
}

/// Largest |d(W1,W2) − d| over sub-pairs with |Wi| ≥ ε|Vi|, as a fraction.
fn brute_worst(g: &Graph, eps: f64) -> (i64, i64) {
    let e = |m1: u32, m2: u32| -> i64 {
        (0..8)
            .filter(|&x| m1 >> x & 1 == 1)
            .map(|x| (0..8).filter(|&y| m2 >> y & 1 == 1 && g.has_edge(x, 8 + y)).count() as i64)
            .sum()
    };
    let total = e(0xff, 0xff);
    let (mut num, mut den) = (0i64, 1i64);
    for m1 in 1u32..256 {
        if (m1.count_ones() as f64) < eps * 8.0 {
            continue;
        }
        for m2 in 1u32..256 {
            if (m2.count_ones() as f64) < eps * 8.0 {
                continue;
            }
            let s = (m1.count_ones() * m2.count_ones()) as i64;
            // |e/s − total/64| = |64e − s·total| / 64s
            let (n2, d2) = ((64 * e(m1, m2) - s * total).abs(), 64 * s);
            if n2 * den > num * d2 {
                (num, den) = (n2, d2);
            }
        }
    }
    (num, den)
}

fn matching_oracle(g: &Graph, comp: &[usize]) -> usize {
    fn go(g: &Graph, free: u32) -> usize {
        if free == 0 {
            return 0;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = go(g, rest);
        for u in 0..g.vertex_count() {
            if rest >> u & 1 == 1 && g.has_edge(u, v) {
                best = best.max(1 + go(g, rest & !(1 << u)));
            }
        }
        best
    }
    go(g, comp.iter().fold(0u32, |m, &v| m | 1 << v))
}

/// Components as (vertices, bipartite), found by 2-colouring BFS.
fn components(g: &Graph) -> Vec<(Vec<usize>, bool)> {
    let n = g.vertex_count();
    let mut side = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let (mut queue, mut bip) = (vec![s], true);
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for y in 0..n {
                if g.has_edge(x, y) {
                    if side[y] == usize::MAX {
                        side[y] = 1 - side[x];
                        queue.push(y);
                    } else if side[y] == side[x] {
                        bip = false;
                    }
                }
            }
        }
        out.push((queue, bip));
    }
    out
}

fn regularity_tools() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(10);
    let mut irregular = 0;
    for i in 0..100 {
        let p: f64 = rng.gen_range(0.1..0.9);
        let edges: Vec<(usize, usize)> = (0..8)
            .flat_map(|x| (8..16).map(move |y| (x, y)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(16, edges).unwrap();
        let eps = [0.125, 0.2, 0.25, 0.3, 0.4, 0.5][i % 6];
        let (a, b) = (VertexSet::from_range(16, 0..8), VertexSet::from_range(16, 8..16));
        let v = regularity::check_regular_pair(&g, &a, &b, eps, RegularityMode::Exhaustive).map_err(|e| e.to_string())?;
        let (num, den) = brute_worst(&g, eps);
        let dev = match &v {
            RegularityVerdict::Regular { max_deviation } => max_deviation,
            RegularityVerdict::Irregular(w) => {
                irregular += 1;
                &w.deviation
            }
            RegularityVerdict::HeuristicRegular { .. } => return Err("exhaustive mode sampled".into()),
        };
        ensure!(dev.numer() * den == num * dev.denom(), "pair {i}: deviation {dev} vs {num}/{den}");
        ensure!(v.passes() == (num as f64 / den as f64 <= eps), "pair {i}: verdict {:?} at eps {eps}", v.passes());
    }

    for i in 0..500 {
        let vertices = rng.gen_range(1..=12);
        let m = rng.gen_range(0..=vertices * (vertices - 1) / 2);
        let g = random_graph(&mut rng, vertices, m);
        let t: f64 = rng.gen_range(0.5..12.5);
        let need = t.ceil() as usize;
        let best = components(&g)
            .iter()
            .filter(|(_, bip)| !bip)
            .map(|(c, _)| 2 * matching_oracle(&g, c))
            .max();
        let want = best.is_some_and(|s| s >= need);
        let got = regularity::property_mt(&g, t).map_err(|e| e.to_string())?;
        ensure!(got.is_some() == want, "graph {i}, t = {t}: got {:?}, oracle {best:?}", got.map(|c| c.saturated));
        if let Some(c) = got {
            ensure!(Some(c.saturated) == best, "graph {i}: saturated {} vs {best:?}", c.saturated);
        }
    }

    // Two parts of five with ten crossing edges; a 5–5 split is a draw.
    let cross: Vec<(usize, usize)> = (0..5).flat_map(|x| [(x, 5 + x), (x, 5 + (x + 1) % 5)]).collect();
    let g = Graph::from_edges(10, cross.iter().copied()).unwrap();
    let part = Partition::equitable(10, 2).map_err(|e| e.to_string())?;
    for (reds, want) in [(5, Color::Red), (4, Color::Blue), (6, Color::Red)] {
        let c = EdgeColoring::from_fn(&g, |u, v| {
            if cross.iter().position(|&e| e == (u, v)).unwrap() < reds {
                Color::Red
            } else {
                Color::Blue
            }
        });
        let r = regularity::reduced_graph(&g, &c, &part, 1.0, RegularityMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure!(r.pairs[0].edge == Some(want), "{reds} red edges: {:?}", r.pairs[0].edge);
    }
    Ok(format!("100 pairs ({irregular} irregular), 500 matching checks, draw goes red"))
}

fn run_args(args: &[&str]) -> String {
    let config = ExperimentConfig::try_parse_from(std::iter::once("ramsey-fit").chain(args.iter().copied()))
        .unwrap_or_else(|e| panic!("{args:?}: {e}"));
    run_experiment(&config).to_json()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let write = |name: &str, text: String| std::fs::write(dir.path().join(name), text).unwrap();

    let (g, c, _, _) = witness_instance(1);
    write("w.g6", io::to_graph6(&g) + "\n");
    write("w.col", c.to_text());
    write("pet.g6", io::to_graph6(&Graph::petersen()) + "\n");
    write("k6.g6", io::to_graph6(&Graph::complete(6)) + "\n");
    write("k5.g6", io::to_graph6(&Graph::complete(5)) + "\n");
    let mut rng = Pcg64::seed_from_u64(11);
    write("sparse.txt", io::to_edge_list(&random_graph(&mut rng, 11, 40)));
    let pair = Graph::from_edges(16, (0..8).flat_map(|x| (8..16).map(move |y| (x, y))).filter(|&(x, y)| (x * y) % 3 != 0))
        .unwrap();
    write("pair.g6", io::to_graph6(&pair) + "\n");
    write("pair.col", EdgeColoring::from_fn(&pair, |u, v| if (u + v) % 2 == 0 { Color::Red } else { Color::Blue }).to_text());
    write("pair.part", Partition::equitable(16, 4).unwrap().to_text());

    let commands: Vec<Vec<String>> = [
        "fit build --n 50 --seed 7 --out {d}/fit.g6 --cert {d}/fit.json --log {d}/log.json",
        "fit certify --in {d}/w.g6 --n 60",
        "color extremal --in {d}/sparse.txt --n 6 --out {d}/ext.col",
        "color blocking --n 5 --k 3 --out {d}/blk.col --graph-out {d}/k8.g6",
        "color verify --in {d}/pair.g6 --coloring {d}/pair.col --n 4 --k 3",
        "witness blue-spectrum --in {d}/w.g6 --coloring {d}/w.col --v1 0..59 --v2 59..118 --n 60 --threshold-multiplier 0.5 --hub 118",
        "witness red-pancyclic --in {d}/w.g6 --coloring {d}/w.col --v1 0..59 --v2 59..118 --n 60 --threshold-multiplier 0.5 --side 2",
        "reg density --in {d}/pair.g6 --a 0..8 --b 8..16",
        "reg pair --in {d}/pair.g6 --a 0..8 --b 8..16 --eps 0.25",
        "reg pair --in {d}/pair.g6 --a 0..8 --b 8..16 --eps 0.25 --samples 500 --seed 3",
        "reg reduce --in {d}/pair.g6 --coloring {d}/pair.col --partition {d}/pair.part --eps 0.5",
        "reg mt --in {d}/pet.g6 --t 10",
        "cycles spectrum --in {d}/pet.g6 --max-len 10",
        "arrows check --in {d}/k6.g6 --n 3 --k 3 --deterministic",
        "arrows check --in {d}/k5.g6 --n 3 --k 3 --deterministic --witness-out {d}/k5.col",
        "arrows cnf --in {d}/k6.g6 --n 4 --k 3 --out {d}/k6.cnf",
        "formulas --n 40 --k 7",
    ]
    .iter()
    .map(|c| c.replace("{d}", &p("")).replace("//", "/").split_whitespace().map(String::from).collect())
    .collect();
    let outputs = ["fit.g6", "fit.json", "log.json", "ext.col", "blk.col", "k8.g6", "k5.col", "k6.cnf"];
    let snapshot = |dir: &Path| -> Vec<Option<Vec<u8>>> { outputs.iter().map(|f| std::fs::read(dir.join(f)).ok()).collect() };
    let mut first = Vec::new();
    for args in &commands {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        first.push(run_args(&a));
    }
    let files = snapshot(dir.path());
    for (args, before) in commands.iter().zip(&first) {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        ensure!(run_args(&a) == *before, "report differs for {} {}", a[0], a[1]);
    }
    ensure!(snapshot(dir.path()) == files, "output files differ between runs");
    ensure!(files.iter().all(Option::is_some), "missing output files");

    let mut rng = Pcg64::seed_from_u64(12);
    let mut instances: Vec<(Graph, usize, usize)> = corpus().into_iter().take(30).map(|g| (g, 4, 3)).collect();
    for _ in 0..20 {
        let v = rng.gen_range(7..=9);
        let m = rng.gen_range(15..=24);
        instances.push((random_graph(&mut rng, v, m), 3, 3));
    }
    for (i, (g, n, k)) in instances.iter().enumerate() {
        let base = arrows_status(g, *n, *k, 1)?;
        for threads in [2, 8] {
            let s = arrows_status(g, *n, *k, threads)?;
            ensure!(s == base, "instance {i}: {} with 1 thread, {} with {threads}", base.name(), s.name());
        }
    }
    Ok(format!("{} commands byte-identical, 50 arrow instances agree on 1/2/8 threads", commands.len()))
}
