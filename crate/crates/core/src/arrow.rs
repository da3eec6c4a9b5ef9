//! Deciding `G → (C_n, C_k)` by exhaustive colouring search, plus the
//! reference formulas and a CNF export for external solvers.
//!
//! The search colours edges one at a time, red first, and closes a branch as
//! soon as the newly coloured edge completes a red `C_n` or a blue `C_k`.
//! Only the cycles through the new edge are examined, as paths between its
//! endpoints in the matching colour class.

use crate::coloring::{verify_avoidance, AvoidanceSpec, BlueForbidden, Color, EdgeColoring};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

/// `⌈(n+1)(2n−1)/2⌉`, the edge count of an `n`-fit graph.
///
/// This is the restricted size Ramsey number only for `n` beyond an
/// unspecified threshold; the value is not claimed for small `n`.
pub fn rstar_formula(n: usize) -> Result<u64> {
    if n < 3 {
        return invalid(format!("n = {n} must be at least 3"));
    }
    let n = n as u64;
    Ok(((n + 1) * (2 * n - 1)).div_ceil(2))
}

/// `r(C_n, C_k) = 2n − 1` for odd `k` with `3 ≤ k ≤ n`, except `(3, 3)`.
pub fn ramsey_cycle_number(n: usize, k: usize) -> Result<u64> {
    if k % 2 == 0 {
        return Err(Error::Unsupported(format!("k = {k} is even; only odd k is covered")));
    }
    if k < 3 || k > n {
        return invalid(format!("need 3 <= k <= n, got n = {n}, k = {k}"));
    }
    if (n, k) == (3, 3) {
        return Err(Error::Unsupported("r(C3, C3) = 6, not 2n - 1 = 5".into()));
    }
    Ok(2 * n as u64 - 1)
}

/// Limits for [`arrows`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
    pub threads: usize,
    /// Return the lexicographically least counterexample (red before blue,
    /// in search edge order) regardless of thread count.
    pub deterministic: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 50_000_000,
            max_time: None,
            threads: 1,
            deterministic: true,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 || self.threads == 0 || self.max_time == Some(Duration::ZERO) {
            return invalid("search budget caps must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowStatus {
    Arrows,
    /// A colouring with no red `C_n` and no blue `C_k`.
    NotArrows(EdgeColoring),
    Unknown,
}

impl ArrowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ArrowStatus::Arrows => "arrows",
            ArrowStatus::NotArrows(_) => "not_arrows",
            ArrowStatus::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowVerdict {
    pub status: ArrowStatus,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Decides whether every red/blue colouring of `g` has a red `C_n` or a
/// blue `C_k`. Graphs are limited to 64 vertices.
pub fn arrows(g: &Graph, n: usize, k: usize, budget: &SearchBudget) -> Result<ArrowVerdict> {
    if n < 3 || k < 3 {
        return invalid(format!("cycle lengths must be at least 3, got n = {n}, k = {k}"));
    }
    if g.vertex_count() > 64 {
        return Err(Error::Unsupported(format!(
            "arrow search handles at most 64 vertices, got {}",
            g.vertex_count()
        )));
    }
    budget.validate()?;
    let start = Instant::now();
    let problem = Problem::new(g, n, k);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        max_nodes: budget.max_nodes,
        deadline: budget.max_time.map(|t| start + t),
        out_of_budget: AtomicBool::new(false),
        best_subtree: AtomicUsize::new(usize::MAX),
        deterministic: budget.deterministic,
    };
    let found = if budget.threads == 1 {
        let mut w = Worker::new(&problem, &shared, 0);
        if w.descend(0) {
            Some(w.assignment())
        } else {
            None
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(budget.threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| problem.split_search(&shared))
    };
    let status = match found {
        Some(colors) => {
            let coloring = EdgeColoring::from_fn(g, |u, v| colors[problem.index_of(u, v)]);
            let spec = AvoidanceSpec::new(n, BlueForbidden::Length(k));
            if let Ok(spec) = spec {
                let verdict = verify_avoidance(g, &coloring, &spec)?;
                assert!(verdict.clean, "arrow search emitted a colouring with a forbidden cycle");
            } else {
                // Even k: the avoidance checker only takes odd blue lengths,
                // so check both classes directly.
                for (c, l) in [(Color::Red, n), (Color::Blue, k)] {
                    let hit = crate::graph::find_cycle_of_length(coloring.class(c), l, u64::MAX)?;
                    assert!(!hit.is_found(), "arrow search emitted a colouring with a forbidden cycle");
                }
            }
            ArrowStatus::NotArrows(coloring)
        }
        None if shared.out_of_budget.load(Ordering::Relaxed) => ArrowStatus::Unknown,
        None => ArrowStatus::Arrows,
    };
    Ok(ArrowVerdict {
        status,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        wall_time: start.elapsed(),
    })
}

/// Depth at which the search tree is cut into independent subtrees.
const SPLIT_DEPTH: usize = 3;

struct Problem {
    order: usize,
    /// Search order of the edges.
    edges: Vec<(usize, usize)>,
    /// Position in ascending `(u, v)` order for each search-order edge.
    lex_index: Vec<usize>,
    red_len: usize,
    blue_len: usize,
}

impl Problem {
    fn new(g: &Graph, n: usize, k: usize) -> Self {
        let lex: Vec<(usize, usize)> = g.edges().collect();
        let mut order: Vec<usize> = (0..lex.len()).collect();
        // Vertices by descending degree (ties by id); each vertex brings in
        // its edges to the vertices ranked before it, so short cycles close
        // on small vertex sets early.
        let mut by_degree: Vec<usize> = (0..g.vertex_count()).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut rank = vec![0; g.vertex_count()];
        for (r, &v) in by_degree.iter().enumerate() {
            rank[v] = r;
        }
        order.sort_by_key(|&i| {
            let (u, v) = lex[i];
            (rank[u].max(rank[v]), rank[u].min(rank[v]))
        });
        Problem {
            order: g.vertex_count(),
            edges: order.iter().map(|&i| lex[i]).collect(),
            lex_index: order,
            red_len: n,
            blue_len: k,
        }
    }

    /// Index into ascending edge order of `(u, v)`.
    fn index_of(&self, u: usize, v: usize) -> usize {
        let p = self.edges.iter().position(|&e| e == (u, v)).expect("host edge");
        self.lex_index[p]
    }

    fn split_search(&self, shared: &Shared) -> Option<Vec<Color>> {
        let depth = SPLIT_DEPTH.min(self.edges.len());
        let prefixes: Vec<usize> = (0..1usize << depth).collect();
        let results: Vec<Option<Vec<Color>>> = prefixes
            .par_iter()
            .map(|&p| {
                let mut w = Worker::new(self, shared, p);
                // Bit `depth − 1 − i` of `p` colours edge `i`; 0 is red, so
                // subtree indices follow lexicographic order.
                for i in 0..depth {
                    let c = if p >> (depth - 1 - i) & 1 == 0 { Color::Red } else { Color::Blue };
                    if !w.assign(i, c) {
                        return None;
                    }
                }
                if w.descend(depth) {
                    Some(w.assignment())
                } else {
                    None
                }
            })
            .collect();
        results.into_iter().flatten().next()
    }
}

struct Shared {
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
    out_of_budget: AtomicBool,
    /// Lowest subtree index holding a counterexample so far.
    best_subtree: AtomicUsize,
    deterministic: bool,
}

struct Worker<'a> {
    p: &'a Problem,
    shared: &'a Shared,
    subtree: usize,
    red: Vec<u64>,
    blue: Vec<u64>,
    colors: Vec<Color>,
    local_nodes: u64,
}

enum Halt {
    Budget,
    Cancelled,
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem, shared: &'a Shared, subtree: usize) -> Self {
        Worker {
            p,
            shared,
            subtree,
            red: vec![0; p.order],
            blue: vec![0; p.order],
            colors: Vec::with_capacity(p.edges.len()),
            local_nodes: 0,
        }
    }

    /// Colours in ascending edge order.
    fn assignment(&self) -> Vec<Color> {
        let mut out = vec![Color::Red; self.colors.len()];
        for (i, &c) in self.colors.iter().enumerate() {
            out[self.p.lex_index[i]] = c;
        }
        out
    }

    /// Colours edge `i` (which must be the next edge) and reports whether no
    /// forbidden cycle was closed. The colour stays assigned either way;
    /// callers undo with [`Worker::unassign`].
    fn assign(&mut self, i: usize, c: Color) -> bool {
        debug_assert_eq!(self.colors.len(), i);
        let (u, v) = self.p.edges[i];
        let (adj, len) = match c {
            Color::Red => (&mut self.red, self.p.red_len),
            Color::Blue => (&mut self.blue, self.p.blue_len),
        };
        // A cycle through uv is a u–v path on `len` vertices avoiding uv.
        let closes = len <= self.p.order && has_path(adj, u, v, len);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        self.colors.push(c);
        !closes
    }

    fn unassign(&mut self) {
        let i = self.colors.len() - 1;
        let (u, v) = self.p.edges[i];
        let adj = match self.colors.pop().unwrap() {
            Color::Red => &mut self.red,
            Color::Blue => &mut self.blue,
        };
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
    }

    fn tick(&mut self) -> Option<Halt> {
        self.local_nodes += 1;
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if total > self.shared.max_nodes {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
            return Some(Halt::Budget);
        }
        if self.local_nodes % 1024 == 0 {
            if let Some(d) = self.shared.deadline {
                if Instant::now() >= d {
                    self.shared.out_of_budget.store(true, Ordering::Relaxed);
                    return Some(Halt::Budget);
                }
            }
        }
        let best = self.shared.best_subtree.load(Ordering::Relaxed);
        let stop = if self.shared.deterministic {
            best < self.subtree
        } else {
            best != usize::MAX
        };
        if stop {
            return Some(Halt::Cancelled);
        }
        if self.shared.out_of_budget.load(Ordering::Relaxed) {
            return Some(Halt::Budget);
        }
        None
    }

    /// Depth-first completion from edge `i`. Returns true with a full
    /// avoiding colouring in `self.colors`.
    fn descend(&mut self, i: usize) -> bool {
        match self.search(i) {
            Ok(true) => {
                self.shared.best_subtree.fetch_min(self.subtree, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    fn search(&mut self, i: usize) -> std::result::Result<bool, Halt> {
        if i == self.p.edges.len() {
            return Ok(true);
        }
        for c in [Color::Red, Color::Blue] {
            if let Some(h) = self.tick() {
                return Err(h);
            }
            let ok = self.assign(i, c);
            if ok && self.search(i + 1)? {
                return Ok(true);
            }
            self.unassign();
        }
        Ok(false)
    }
}

/// Is there a path from `from` to `to` on exactly `vertices` vertices in the
/// graph given by adjacency masks? The edge `from–to` itself is not used.
fn has_path(adj: &[u64], from: usize, to: usize, vertices: usize) -> bool {
    fn go(adj: &[u64], x: usize, to: usize, left: usize, used: u64) -> bool {
        // `left` more vertices to add after x, the last being `to`.
        if left == 1 {
            return adj[x] >> to & 1 == 1;
        }
        let mut cand = adj[x] & !used & !(1u64 << to);
        while cand != 0 {
            let y = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            // y must still reach `to` through unused vertices.
            if left == 2 && adj[y] >> to & 1 == 0 {
                continue;
            }
            if go(adj, y, to, left - 1, used | 1 << y) {
                return true;
            }
        }
        false
    }
    vertices >= 3 && go(adj, from, to, vertices - 1, 1 << from | 1 << to)
}

/// A CNF formula in DIMACS terms: variables `1..=vars`, literals signed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    /// Does `assignment[i]` (variable `i + 1`) satisfy every clause?
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }
}

/// Cap on the number of cycle copies [`export_cnf`] will encode.
pub const CNF_CYCLE_LIMIT: u64 = 10_000_000;

/// Encodes "`g` has a colouring with no red `C_n` and no blue `C_k`".
///
/// Variable `i` is the `i`-th edge in ascending order, true meaning red.
/// Each `C_n` copy contributes a clause that some edge is blue, each `C_k`
/// copy one that some edge is red; the formula is satisfiable exactly when
/// `g` does not arrow `(C_n, C_k)`.
pub fn export_cnf(g: &Graph, n: usize, k: usize) -> Result<Cnf> {
    if n < 3 || k < 3 {
        return invalid(format!("cycle lengths must be at least 3, got n = {n}, k = {k}"));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let var = |u: usize, v: usize| -> i64 {
        let key = (u.min(v), u.max(v));
        edges.binary_search(&key).expect("cycle edge is a host edge") as i64 + 1
    };
    let mut count = 0u64;
    let red = cycle_copies(g, n, &mut count)?;
    let blue = cycle_copies(g, k, &mut count)?;
    let mut clauses = Vec::with_capacity(red.len() + blue.len());
    for cyc in &red {
        let mut c: Vec<i64> = cycle_edges(cyc).map(|(u, v)| -var(u, v)).collect();
        c.sort_unstable_by_key(|l| l.abs());
        clauses.push(c);
    }
    for cyc in &blue {
        let mut c: Vec<i64> = cycle_edges(cyc).map(|(u, v)| var(u, v)).collect();
        c.sort_unstable();
        clauses.push(c);
    }
    Ok(Cnf {
        vars: edges.len(),
        clauses,
    })
}

fn cycle_edges(c: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()]))
}

/// Every cycle of length `len` exactly once: least vertex first, second
/// vertex smaller than the last.
fn cycle_copies(g: &Graph, len: usize, count: &mut u64) -> Result<Vec<Vec<usize>>> {
    fn go(g: &Graph, path: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>, count: &mut u64) -> Result<()> {
        let x = *path.last().unwrap();
        let a = path[0];
        if path.len() == len {
            if g.has_edge(x, a) && path[1] < x {
                *count += 1;
                if *count > CNF_CYCLE_LIMIT {
                    return Err(Error::GuardExceeded {
                        what: "cycle copies",
                        count: *count,
                        limit: CNF_CYCLE_LIMIT,
                    });
                }
                out.push(path.clone());
            }
            return Ok(());
        }
        for y in g.neighbors(x).filter(|&y| y > a) {
            if !path.contains(&y) {
                path.push(y);
                go(g, path, len, out, count)?;
                path.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    if len > g.vertex_count() {
        return Ok(out);
    }
    for a in 0..g.vertex_count() {
        go(g, &mut vec![a], len, &mut out, count)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::color_bipartite_blocking;
    use crate::graph::GraphBuilder;
    use rand::{Rng, SeedableRng};

    /// Oracle: try all 2^m colourings.
    fn enumerate_arrows(g: &Graph, n: usize, k: usize) -> bool {
        let edges: Vec<_> = g.edges().collect();
        let m = edges.len();
        (0u64..1 << m).all(|mask| {
            let red = Graph::from_edges(g.vertex_count(), (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i])).unwrap();
            let blue = Graph::from_edges(g.vertex_count(), (0..m).filter(|&i| mask >> i & 1 == 0).map(|i| edges[i])).unwrap();
            crate::graph::find_cycle_of_length(&red, n, u64::MAX).unwrap().is_found()
                || crate::graph::find_cycle_of_length(&blue, k, u64::MAX).unwrap().is_found()
        })
    }

    fn random_graph(rng: &mut impl Rng) -> Graph {
        let n = rng.gen_range(3..=8);
        let mut b = GraphBuilder::new(n);
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for i in (1..pairs.len()).rev() {
            pairs.swap(i, rng.gen_range(0..=i));
        }
        let m = rng.gen_range(0..=pairs.len().min(16));
        for &(u, v) in &pairs[..m] {
            b.add_edge(u, v);
        }
        b.build()
    }

    #[test]
    fn formulas() {
        assert_eq!(rstar_formula(5).unwrap(), 27);
        assert_eq!(rstar_formula(6).unwrap(), 39);
        assert_eq!(rstar_formula(100).unwrap(), 10050);
        assert!(rstar_formula(2).is_err());
        assert_eq!(ramsey_cycle_number(7, 3).unwrap(), 13);
        assert_eq!(ramsey_cycle_number(5, 5).unwrap(), 9);
        assert!(matches!(ramsey_cycle_number(3, 3), Err(Error::Unsupported(_))));
        assert!(matches!(ramsey_cycle_number(6, 4), Err(Error::Unsupported(_))));
        assert!(ramsey_cycle_number(5, 7).is_err());
    }

    #[test]
    fn small_complete_graphs() {
        let b = SearchBudget::default();
        assert_eq!(arrows(&Graph::complete(6), 3, 3, &b).unwrap().status, ArrowStatus::Arrows);
        assert!(enumerate_arrows(&Graph::complete(6), 3, 3));
        let v = arrows(&Graph::complete(5), 3, 3, &b).unwrap();
        let ArrowStatus::NotArrows(c) = v.status else { panic!("K5 should not arrow") };
        assert_eq!(c.red().edge_count(), 5);
        assert!(crate::graph::components_bipartiteness(c.red()).iter().all(|x| !x.bipartite));
        assert!(!enumerate_arrows(&Graph::complete(5), 3, 3));
    }

    #[test]
    fn blocking_graph_does_not_arrow() {
        let (g, _) = color_bipartite_blocking(5, 3).unwrap();
        let v = arrows(&g, 5, 3, &SearchBudget::default()).unwrap();
        assert!(matches!(v.status, ArrowStatus::NotArrows(_)));
    }

    #[test]
    fn matches_full_enumeration() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(17);
        for _ in 0..60 {
            let g = random_graph(&mut rng);
            for (n, k) in [(3, 3), (4, 3)] {
                let got = arrows(&g, n, k, &SearchBudget::default()).unwrap();
                assert_ne!(got.status, ArrowStatus::Unknown);
                assert_eq!(got.status == ArrowStatus::Arrows, enumerate_arrows(&g, n, k));
            }
        }
    }

    #[test]
    fn verdict_and_witness_independent_of_threads() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_graph(&mut rng);
            let base = arrows(&g, 3, 3, &SearchBudget::default()).unwrap().status;
            for threads in [2, 8] {
                let b = SearchBudget {
                    threads,
                    ..SearchBudget::default()
                };
                assert_eq!(arrows(&g, 3, 3, &b).unwrap().status, base);
            }
        }
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let b = SearchBudget {
            max_nodes: 10,
            ..SearchBudget::default()
        };
        assert_eq!(arrows(&Graph::complete(6), 3, 3, &b).unwrap().status, ArrowStatus::Unknown);
        assert!(arrows(&Graph::complete(6), 2, 3, &b).is_err());
        assert!(arrows(&Graph::complete(65), 3, 3, &b).is_err());
    }

    #[test]
    fn cnf_counts() {
        let c5 = export_cnf(&Graph::complete(5), 3, 3).unwrap();
        assert_eq!((c5.vars, c5.clauses.len()), (10, 20));
        assert!(c5.to_dimacs().starts_with("p cnf 10 20\n"));
        let c6 = export_cnf(&Graph::complete(6), 3, 3).unwrap();
        assert_eq!((c6.vars, c6.clauses.len()), (15, 40));
        let free = export_cnf(&Graph::cycle(6), 6, 3).unwrap();
        assert_eq!(free.clauses, vec![vec![-1, -2, -3, -4, -5, -6]]);
        assert!(free.satisfied_by(&[false; 6]));
    }

    #[test]
    fn cnf_agrees_with_search() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(23);
        for _ in 0..60 {
            let g = random_graph(&mut rng);
            let cnf = export_cnf(&g, 3, 3).unwrap();
            let m = cnf.vars;
            let sat = (0u64..1 << m).any(|mask| {
                let a: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
                cnf.satisfied_by(&a)
            });
            let verdict = arrows(&g, 3, 3, &SearchBudget::default()).unwrap().status;
            assert_eq!(sat, verdict != ArrowStatus::Arrows);
        }
    }
}
