//! Constructive monochromatic cycles in a 2-coloured host with two large
//! sides `V1`, `V2`.
//!
//! Builders may be greedy internally, but every cycle they hand out has been
//! re-verified against the colour class it is claimed for.

use crate::coloring::{Color, EdgeColoring};
use crate::error::{invalid, Error, Result};
use crate::graph::{edge_count_between, CycleWitness, Graph, VertexSet};
use crate::regularity::{check_regular_pair, strongly_regular_trim, RegularityMode};
use crate::rng::{self, Stream};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// Degree thresholds used to sort vertices onto the two sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SideThresholds {
    /// Red neighbours in `Vi` needed to join `Wi` (`0.22n`).
    pub many_red: f64,
    /// Neighbours in each `Vi` below which a vertex is special (`0.23n`).
    pub side_degree: f64,
    /// Blue neighbours a hub needs on each side, and the most a member of
    /// `Wi` may have in `Vi` (`n^0.9`).
    pub hub_blue: f64,
    /// Red neighbours of the split centre required in each half (`0.1n`).
    pub split_red: f64,
}

impl SideThresholds {
    pub fn new(n: usize) -> Result<Self> {
        Self::scaled(n, 1.0)
    }

    /// All four thresholds multiplied by `multiplier`.
    pub fn scaled(n: usize, multiplier: f64) -> Result<Self> {
        if n < 3 {
            return invalid(format!("n = {n} is below 3"));
        }
        if !(multiplier > 0.0 && multiplier.is_finite()) {
            return invalid(format!("threshold multiplier {multiplier} must be positive"));
        }
        let n = n as f64;
        Ok(SideThresholds {
            many_red: 0.22 * n * multiplier,
            side_degree: 0.23 * n * multiplier,
            hub_blue: n.powf(0.9) * multiplier,
            split_red: 0.1 * n * multiplier,
        })
    }
}

/// Knobs shared by the path and cycle builders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BuilderOptions {
    /// Regularity parameter; enters the path length cap.
    pub epsilon: f64,
    /// Random sub-pairs tried against ε-regularity before building a path;
    /// zero skips the check.
    pub regularity_samples: usize,
    /// Endpoint choices tried per length before giving up on it.
    pub endpoint_attempts: usize,
    /// Alternative choices the path walk may take after the greedy first
    /// choice fails further on; zero makes it purely greedy.
    pub backtracks: usize,
    pub seed: u64,
}

impl Default for BuilderOptions {
    fn default() -> Self {
        BuilderOptions {
            epsilon: 0.05,
            regularity_samples: 0,
            endpoint_attempts: 8,
            backtracks: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub w1: VertexSet,
    pub w2: VertexSet,
    pub special: Option<usize>,
    pub unclassified: VertexSet,
    /// Every vertex with fewer than `side_degree` neighbours in some `Vi`.
    /// At most one is expected on a fit host; the one with the smallest
    /// such degree becomes `special`.
    pub low_degree: Vec<usize>,
}

fn check_sides(g: &Graph, coloring: &EdgeColoring, v1: &VertexSet, v2: &VertexSet) -> Result<()> {
    if coloring.host() != g {
        return invalid("colouring belongs to a different graph");
    }
    let n = g.vertex_count();
    if v1.universe() != n || v2.universe() != n {
        return invalid("vertex set does not match the graph");
    }
    if !v1.is_disjoint(v2) {
        return invalid("V1 and V2 overlap");
    }
    Ok(())
}

/// Sorts vertices into `W1`, `W2`, a special vertex and the rest.
///
/// `x` qualifies for `Wi` when it has at least `many_red` red and at most
/// `hub_blue` blue neighbours in `Vi`. Members of `Vi` that qualify stay on
/// their own side; any other vertex qualifying for both goes to the side
/// where it has more red neighbours, `W1` on a tie.
pub fn classify_vertices(
    g: &Graph,
    coloring: &EdgeColoring,
    v1: &VertexSet,
    v2: &VertexSet,
    thr: &SideThresholds,
) -> Result<Classification> {
    check_sides(g, coloring, v1, v2)?;
    let n = g.vertex_count();
    let sides = [v1, v2];
    let counts: Vec<[(usize, usize, usize); 2]> = (0..n)
        .map(|x| {
            sides.map(|s| {
                (
                    coloring.red().degree_into(x, s),
                    coloring.blue().degree_into(x, s),
                    g.degree_into(x, s),
                )
            })
        })
        .collect();
    let low_degree: Vec<usize> = (0..n)
        .filter(|&x| counts[x].iter().any(|c| (c.2 as f64) < thr.side_degree))
        .collect();
    let special = low_degree
        .iter()
        .copied()
        .min_by_key(|&x| (counts[x][0].2.min(counts[x][1].2), x));

    let mut out = Classification {
        w1: VertexSet::new(n),
        w2: VertexSet::new(n),
        special,
        unclassified: VertexSet::new(n),
        low_degree,
    };
    for x in (0..n).filter(|&x| Some(x) != special) {
        let q = counts[x].map(|(r, b, _)| r as f64 >= thr.many_red && b as f64 <= thr.hub_blue);
        let side = match q {
            [true, true] if v1.contains(x) => Some(0),
            [true, true] if v2.contains(x) => Some(1),
            [true, true] => Some((counts[x][1].0 > counts[x][0].0) as usize),
            [true, false] => Some(0),
            [false, true] => Some(1),
            [false, false] => None,
        };
        match side {
            Some(0) => out.w1.insert(x),
            Some(_) => out.w2.insert(x),
            None => out.unclassified.insert(x),
        };
    }
    Ok(out)
}

/// Why [`bipartite_path_builder`] produced no path.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("a path of length {len} cannot join {}", if *.same_side { "two vertices of one side" } else { "the two sides" })]
    Parity { len: usize, same_side: bool },
    #[error("length {len} exceeds the cap {cap} for this pair")]
    LengthCap { len: usize, cap: usize },
    #[error("pair precondition fails: {0}")]
    Precondition(String),
    #[error("greedy construction of a length-{len} path got stuck in both directions")]
    DeadEnd { len: usize },
}

impl PathError {
    /// Stable identifier for reports.
    pub fn code(&self) -> &'static str {
        match self {
            PathError::Input(_) => "input",
            PathError::Parity { .. } => "parity",
            PathError::LengthCap { .. } => "length_cap",
            PathError::Precondition(_) => "precondition",
            PathError::DeadEnd { .. } => "dead_end",
        }
    }
}

impl From<PathError> for Error {
    fn from(e: PathError) -> Self {
        match e {
            PathError::Input(m) => Error::InvalidInput(m),
            PathError::Precondition(m) => Error::Precondition(m),
            other => Error::Construction(other.to_string()),
        }
    }
}

/// The usable length cap `⌊2(1 − 2ε/d)·min(|A|,|B|)⌋`.
pub fn path_length_cap(a: usize, b: usize, density: f64, eps: f64) -> usize {
    if density <= 0.0 {
        return 0;
    }
    (2.0 * (1.0 - 2.0 * eps / density) * a.min(b) as f64).max(0.0).floor() as usize
}

/// A path of exactly `len` edges from `u` to `v` alternating between `A`
/// and `B` along `color` edges.
///
/// Each step moves to the unused neighbour with the most unused neighbours
/// back across, among those still within `remaining − 1` steps of `v` in the
/// unused part of the pair. A stuck walk may revisit up to
/// `opts.backtracks` earlier choices; if it still fails the construction is
/// rerun from `v` towards `u` once. Endpoints on opposite sides need odd `len`,
/// endpoints on one side even `len`.
#[allow(clippy::too_many_arguments)]
pub fn bipartite_path_builder(
    g: &Graph,
    coloring: &EdgeColoring,
    color: Color,
    a: &VertexSet,
    b: &VertexSet,
    u: usize,
    v: usize,
    len: usize,
    opts: &BuilderOptions,
) -> Result<Vec<usize>, PathError> {
    check_sides(g, coloring, a, b).map_err(|e| PathError::Input(e.to_string()))?;
    let inside = a.union(b);
    if !inside.contains(u) || !inside.contains(v) {
        return Err(PathError::Input(format!("endpoints {u}, {v} must lie in A ∪ B")));
    }
    if u == v || len == 0 {
        return Err(PathError::Input("a path needs two distinct endpoints and length at least 1".into()));
    }
    let same_side = a.contains(u) == a.contains(v);
    if same_side != (len % 2 == 0) {
        return Err(PathError::Parity { len, same_side });
    }
    let h = coloring.class(color);
    let e = edge_count_between(h, a, b).expect("checked sets");
    if e == 0 {
        return Err(PathError::Precondition("the pair has no edges in this colour".into()));
    }
    let density = e as f64 / (a.len() * b.len()) as f64;
    let cap = path_length_cap(a.len(), b.len(), density, opts.epsilon);
    if len > cap {
        return Err(PathError::LengthCap { len, cap });
    }
    // Strong-degree part of strong regularity: 10·|A|·deg_B(x) ≥ e(A,B).
    for (side, other) in [(a, b), (b, a)] {
        if let Some(x) = side.iter().find(|&x| 10 * side.len() * h.degree_into(x, other) < e as usize) {
            return Err(PathError::Precondition(format!(
                "vertex {x} has {} neighbours across, below a tenth of the expected degree",
                h.degree_into(x, other)
            )));
        }
    }
    if opts.regularity_samples > 0 {
        let verdict = check_regular_pair(
            h,
            a,
            b,
            opts.epsilon,
            RegularityMode::Sampled {
                samples: opts.regularity_samples,
                seed: opts.seed,
            },
        )
        .map_err(|e| PathError::Input(e.to_string()))?;
        if !verdict.passes() {
            return Err(PathError::Precondition("sampled sub-pair violates ε-regularity".into()));
        }
    }

    let path = greedy_path(h, a, b, u, v, len, opts.backtracks)
        .or_else(|| {
            greedy_path(h, a, b, v, u, len, opts.backtracks).map(|mut p| {
                p.reverse();
                p
            })
        })
        .ok_or(PathError::DeadEnd { len })?;

    assert_eq!(path.len(), len + 1);
    assert_eq!((path[0], path[len]), (u, v));
    let mut seen = VertexSet::new(g.vertex_count());
    for (i, &x) in path.iter().enumerate() {
        assert!(seen.insert(x), "path repeats {x}");
        if i > 0 {
            assert!(h.has_edge(path[i - 1], x), "path step is not a {color:?} edge");
            assert_ne!(a.contains(path[i - 1]), a.contains(x), "path step stays on one side");
        }
    }
    Ok(path)
}

fn greedy_path(
    h: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    start: usize,
    end: usize,
    len: usize,
    backtracks: usize,
) -> Option<Vec<usize>> {
    struct Walk<'a> {
        h: &'a Graph,
        a: &'a VertexSet,
        b: &'a VertexSet,
        end: usize,
        len: usize,
        unused: VertexSet,
        path: Vec<usize>,
        backtracks: usize,
    }
    impl Walk<'_> {
        fn across(&self, x: usize) -> &VertexSet {
            if self.a.contains(x) {
                self.b
            } else {
                self.a
            }
        }

        fn go(&mut self) -> bool {
            let cur = *self.path.last().expect("path starts nonempty");
            let remaining = self.len + 1 - self.path.len();
            if remaining == 1 {
                if self.h.has_edge(cur, self.end) && self.across(cur).contains(self.end) {
                    self.path.push(self.end);
                    return true;
                }
                return false;
            }
            let dist = distances_from(self.h, self.a, self.b, self.end, &self.unused, self.h.vertex_count());
            let mut next: Vec<(usize, usize)> = self
                .h
                .neighbors(cur)
                .filter(|&y| y != self.end && self.unused.contains(y) && self.across(cur).contains(y))
                .filter(|&y| dist[y] < remaining)
                .map(|y| {
                    let free = self
                        .h
                        .neighbors(y)
                        .filter(|&z| self.unused.contains(z) && self.across(y).contains(z))
                        .count();
                    (free, y)
                })
                .collect();
            next.sort_unstable_by(|p, q| q.0.cmp(&p.0).then(p.1.cmp(&q.1)));
            for (i, &(_, y)) in next.iter().enumerate() {
                if i > 0 {
                    if self.backtracks == 0 {
                        return false;
                    }
                    self.backtracks -= 1;
                }
                self.unused.remove(y);
                self.path.push(y);
                if self.go() {
                    return true;
                }
                self.path.pop();
                self.unused.insert(y);
            }
            false
        }
    }
    let mut unused = a.union(b);
    unused.remove(start);
    let mut walk = Walk {
        h,
        a,
        b,
        end,
        len,
        unused,
        path: vec![start],
        backtracks,
    };
    walk.go().then_some(walk.path)
}

/// Cross-edge BFS distances from `src` through `allowed` vertices.
fn distances_from(h: &Graph, a: &VertexSet, b: &VertexSet, src: usize, allowed: &VertexSet, n: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; n];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let other = if a.contains(x) { b } else { a };
        for y in h.neighbors(x) {
            if dist[y] == usize::MAX && other.contains(y) && (allowed.contains(y) || y == src) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Five vertices closing blue cycles of length 3 and 5 around a special
/// vertex: `s w v1` and `s w v1 v2 v3`, with `v1, v3 ∈ V1`, `v2 ∈ V2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndgameConfig {
    pub s: usize,
    pub w: usize,
    pub v1: usize,
    pub v2: usize,
    pub v3: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum BlueRoute {
    /// A vertex with many blue neighbours on both sides.
    Hub { hub: usize },
    Endgame(EndgameConfig),
}

/// Cycles per length, with the reason for every length not produced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleFamily {
    pub cycles: BTreeMap<usize, CycleWitness>,
    pub gaps: BTreeMap<usize, String>,
}

impl CycleFamily {
    pub fn is_complete(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.keys().copied().collect()
    }

    fn insert(&mut self, len: usize, outcome: Result<CycleWitness, String>) {
        match outcome {
            Ok(c) => {
                debug_assert_eq!(c.len(), len);
                self.cycles.insert(len, c);
            }
            Err(msg) => {
                self.gaps.insert(len, msg);
            }
        }
    }
}

fn emit(h: &Graph, vertices: Vec<usize>, len: usize) -> Result<CycleWitness, String> {
    if vertices.len() != len {
        return Err(format!("assembled {} vertices for length {len}", vertices.len()));
    }
    CycleWitness::new_verified(h, vertices).map_err(|e| format!("witness failed verification: {e}"))
}

fn without(set: &VertexSet, drop: &[usize]) -> VertexSet {
    let mut s = set.clone();
    for &x in drop {
        s.remove(x);
    }
    s
}

/// Blue cycles of every length `3..=max_len`.
///
/// Hub route: even lengths close a path between the ends of a blue edge of
/// the pair, odd lengths close a path between two blue neighbours of the
/// hub through the hub. Endgame route: the seeds `s w v1` and `s w v1 v2 v3`
/// give 3 and 5; longer odd cycles replace the edge `v2 v3` of the second
/// seed by a path, even ones close a path through that edge.
#[allow(clippy::too_many_arguments)]
pub fn build_blue_spectrum(
    g: &Graph,
    coloring: &EdgeColoring,
    v1: &VertexSet,
    v2: &VertexSet,
    route: BlueRoute,
    max_len: usize,
    thr: &SideThresholds,
    opts: &BuilderOptions,
) -> Result<CycleFamily> {
    check_sides(g, coloring, v1, v2)?;
    if max_len < 3 {
        return invalid(format!("maximum length {max_len} is below 3"));
    }
    let blue = coloring.blue();
    let n = g.vertex_count();
    match route {
        BlueRoute::Hub { hub } => {
            if hub >= n {
                return invalid(format!("hub {hub} out of range"));
            }
            let (s1, s2) = (without(v1, &[hub]), without(v2, &[hub]));
            let (nb1, nb2) = (blue.degree_into(hub, &s1), blue.degree_into(hub, &s2));
            for (side, k) in [("V1", nb1), ("V2", nb2)] {
                if (k as f64) < thr.hub_blue {
                    return Err(Error::Precondition(format!(
                        "hub {hub} has {k} blue neighbours in {side}, needs at least {:.2}",
                        thr.hub_blue
                    )));
                }
            }
            let trim = strongly_regular_trim(blue, &s1, &s2, opts.epsilon)?;
            let (pa, pb) = (trim.w1, trim.w2);
            let hub_a: Vec<usize> = blue.neighborhood(hub).intersection(&pa).iter().collect();
            let hub_b: Vec<usize> = blue.neighborhood(hub).intersection(&pb).iter().collect();
            let cross: Vec<(usize, usize)> = pa
                .iter()
                .flat_map(|x| blue.neighbors(x).filter(|y| pb.contains(*y)).map(move |y| (x, y)))
                .take(opts.endpoint_attempts.max(1))
                .collect();
            let build = |len: usize| -> Result<CycleWitness, String> {
                if len == 3 {
                    let (x, y) = hub_a
                        .iter()
                        .flat_map(|&x| hub_b.iter().map(move |&y| (x, y)))
                        .find(|&(x, y)| blue.has_edge(x, y))
                        .ok_or("no blue edge joins the hub's neighbourhoods")?;
                    return emit(blue, vec![hub, x, y], 3);
                }
                let mut last = String::from("no endpoint pair available");
                if len % 2 == 0 {
                    for &(x, y) in &cross {
                        match bipartite_path_builder(g, coloring, Color::Blue, &pa, &pb, x, y, len - 1, opts) {
                            Ok(p) => return emit(blue, p, len),
                            Err(e @ (PathError::LengthCap { .. } | PathError::Precondition(_))) => {
                                return Err(e.to_string())
                            }
                            Err(e) => last = e.to_string(),
                        }
                    }
                } else {
                    let ends = hub_a.iter().flat_map(|&x| hub_b.iter().map(move |&y| (x, y)));
                    for (x, y) in ends.take(opts.endpoint_attempts.max(1)) {
                        match bipartite_path_builder(g, coloring, Color::Blue, &pa, &pb, x, y, len - 2, opts) {
                            Ok(p) => {
                                let mut c = vec![hub];
                                c.extend(p);
                                return emit(blue, c, len);
                            }
                            Err(e @ (PathError::LengthCap { .. } | PathError::Precondition(_))) => {
                                return Err(e.to_string())
                            }
                            Err(e) => last = e.to_string(),
                        }
                    }
                }
                Err(last)
            };
            Ok(collect_lengths(3..=max_len, build))
        }
        BlueRoute::Endgame(cfg) => {
            let EndgameConfig { s, w, v1: x1, v2: x2, v3: x3 } = cfg;
            let all = [s, w, x1, x2, x3];
            if all.iter().any(|&x| x >= n) {
                return invalid("endgame vertex out of range");
            }
            for i in 0..5 {
                if all[i + 1..].contains(&all[i]) {
                    return invalid(format!("endgame vertices must be distinct, {} repeats", all[i]));
                }
            }
            if !v1.contains(x1) || !v1.contains(x3) || !v2.contains(x2) {
                return Err(Error::Precondition("endgame needs v1, v3 in V1 and v2 in V2".into()));
            }
            for (p, q) in [(s, w), (w, x1), (x1, s), (x1, x2), (x2, x3), (x3, s)] {
                if !blue.has_edge(p, q) {
                    return Err(Error::Precondition(format!("endgame edge {p}–{q} is not blue")));
                }
            }
            let s1 = without(v1, &[s, w, x1]);
            let s2 = without(v2, &[s, w, x1]);
            let trim = strongly_regular_trim(blue, &s1, &s2, opts.epsilon)?;
            let (mut pa, mut pb) = (trim.w1, trim.w2);
            pa.insert(x3);
            pb.insert(x2);
            let build = |len: usize| -> Result<CycleWitness, String> {
                match len {
                    3 => emit(blue, vec![s, w, x1], 3),
                    5 => emit(blue, vec![s, w, x1, x2, x3], 5),
                    _ if len % 2 == 1 => {
                        let p = bipartite_path_builder(g, coloring, Color::Blue, &pa, &pb, x2, x3, len - 4, opts)
                            .map_err(|e| e.to_string())?;
                        let mut c = vec![s, w, x1];
                        c.extend(p);
                        emit(blue, c, len)
                    }
                    _ => {
                        let p = bipartite_path_builder(g, coloring, Color::Blue, &pa, &pb, x3, x2, len - 1, opts)
                            .map_err(|e| e.to_string())?;
                        emit(blue, p, len)
                    }
                }
            };
            Ok(collect_lengths(3..=max_len, build))
        }
    }
}

fn collect_lengths(
    lens: std::ops::RangeInclusive<usize>,
    build: impl Fn(usize) -> Result<CycleWitness, String> + Sync,
) -> CycleFamily {
    let results: Vec<(usize, Result<CycleWitness, String>)> =
        lens.collect::<Vec<_>>().into_par_iter().map(|l| (l, build(l))).collect();
    let mut fam = CycleFamily::default();
    for (l, r) in results {
        fam.insert(l, r);
    }
    fam
}

/// Searches for an [`EndgameConfig`] around `s`, taking `w` from `w2`.
/// Candidates are scanned in increasing id order.
pub fn find_endgame(
    coloring: &EdgeColoring,
    v1: &VertexSet,
    v2: &VertexSet,
    w2: &VertexSet,
    s: usize,
) -> Option<EndgameConfig> {
    let blue = coloring.blue();
    let sb1: Vec<usize> = blue.neighbors(s).filter(|&x| v1.contains(x)).collect();
    for w in blue.neighbors(s).filter(|&x| w2.contains(x) && x != s) {
        for &x1 in sb1.iter().filter(|&&x| x != w && blue.has_edge(x, w)) {
            for x2 in blue.neighbors(x1).filter(|&y| v2.contains(y) && y != w && y != s) {
                if let Some(&x3) = sb1.iter().find(|&&z| z != x1 && z != w && blue.has_edge(z, x2)) {
                    return Some(EndgameConfig { s, w, v1: x1, v2: x2, v3: x3 });
                }
            }
        }
    }
    None
}

/// Inserts `w` into `cycle`.
///
/// Looks for cycle neighbours `vi`, `vj` of `w` (`i < j` along the cycle)
/// whose predecessors lie in `v_side` and are adjacent, and returns
/// `v1 … v(i−1) v(j−1) … vi w vj … vl`. The given orientation is tried
/// before the reversed one.
pub fn rotation_extend(
    g_red: &Graph,
    cycle: &CycleWitness,
    w: usize,
    v_side: &VertexSet,
) -> Result<CycleWitness> {
    cycle.verify(g_red)?;
    if w >= g_red.vertex_count() {
        return invalid(format!("vertex {w} out of range"));
    }
    if cycle.vertices().contains(&w) {
        return invalid(format!("vertex {w} already lies on the cycle"));
    }
    let mut reversed = cycle.vertices().to_vec();
    reversed.reverse();
    for order in [cycle.vertices(), &reversed[..]] {
        if let Some(c) = rotate_once(g_red, order, w, v_side) {
            let out = CycleWitness::new_verified(g_red, c)?;
            assert_eq!(out.len(), cycle.len() + 1);
            let mut a: Vec<usize> = out.vertices().to_vec();
            let mut b: Vec<usize> = cycle.vertices().to_vec();
            b.push(w);
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "extension changed the vertex set");
            return Ok(out);
        }
    }
    Err(Error::Construction(format!(
        "vertex {w} has no pair of cycle neighbours with adjacent predecessors"
    )))
}

fn rotate_once(h: &Graph, c: &[usize], w: usize, v_side: &VertexSet) -> Option<Vec<usize>> {
    let l = c.len();
    let pred = |i: usize| c[(i + l - 1) % l];
    let good: Vec<usize> = (0..l).filter(|&i| h.has_edge(w, c[i]) && v_side.contains(pred(i))).collect();
    for (gi, &i) in good.iter().enumerate() {
        for &j in &good[gi + 1..] {
            if j == i + 1 || h.has_edge(pred(i), pred(j)) {
                // Rotate so that position i becomes 1 and read off the new cycle.
                let r: Vec<usize> = (0..l).map(|k| c[(i + l - 1 + k) % l]).collect();
                let jj = j - i + 1;
                let mut out = Vec::with_capacity(l + 1);
                out.push(r[0]);
                out.extend(r[1..jj].iter().rev());
                out.push(w);
                out.extend(&r[jj..]);
                return Some(out);
            }
        }
    }
    None
}

/// What [`build_red_pancyclic`] did, alongside the cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedPancyclic {
    pub family: CycleFamily,
    /// Vertex whose red neighbourhood seeds the short cycles.
    pub centre: usize,
    pub split_sizes: (usize, usize),
    /// True when the random split attempts all failed.
    pub greedy_split: bool,
    /// Lengths obtained by rotation-extension rather than directly.
    pub extended: Vec<usize>,
}

struct Split {
    a: VertexSet,
    b: VertexSet,
    greedy: bool,
}

/// Halves `pool` so that each half holds at least `need` of `nbrs`:
/// random balanced splits first, then alternate assignment.
fn split_pool(pool: &VertexSet, nbrs: &VertexSet, need: usize, seed: u64) -> Result<Split> {
    let n = pool.universe();
    let members: Vec<usize> = pool.iter().collect();
    let mut rng = rng::substream(seed, Stream::Split);
    for _ in 0..20 {
        let mut m = members.clone();
        m.shuffle(&mut rng);
        let half = m.len() / 2;
        let a = VertexSet::from_vertices(n, m[..half].iter().copied())?;
        let b = VertexSet::from_vertices(n, m[half..].iter().copied())?;
        if a.intersection_len(nbrs) >= need && b.intersection_len(nbrs) >= need {
            return Ok(Split { a, b, greedy: false });
        }
    }
    let (mut a, mut b) = (VertexSet::new(n), VertexSet::new(n));
    let (inn, out): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&x| nbrs.contains(x));
    for (i, x) in inn.into_iter().chain(out).enumerate() {
        if i % 2 == 0 {
            a.insert(x);
        } else {
            b.insert(x);
        }
    }
    if a.intersection_len(nbrs) < need || b.intersection_len(nbrs) < need {
        return Err(Error::Precondition(format!(
            "centre has {} red neighbours to split, needs {need} on each side",
            pool.intersection_len(nbrs)
        )));
    }
    Ok(Split { a, b, greedy: true })
}

/// Red cycles of every length `3..=|Wi|` inside `Wi`, and of length
/// `|Wi| + 1` through `external` when given.
///
/// A centre `c ∈ Vi` with most red neighbours in `Vi` is fixed and
/// `Vi ∖ {c}` is halved so both halves hold many red neighbours of `c`.
/// After strong trimming of the red pair, a cycle of length `l` is `c`
/// followed by a red path of length `l − 2` between two red neighbours of
/// `c`: on opposite halves for odd `l`, on one half for even `l`. Lengths
/// this misses, and all lengths past the pair's cap, are reached by
/// inserting unused vertices of `Wi` with [`rotation_extend`].
#[allow(clippy::too_many_arguments)]
pub fn build_red_pancyclic(
    g: &Graph,
    coloring: &EdgeColoring,
    w_side: &VertexSet,
    v_side: &VertexSet,
    external: Option<usize>,
    thr: &SideThresholds,
    opts: &BuilderOptions,
) -> Result<RedPancyclic> {
    if coloring.host() != g {
        return invalid("colouring belongs to a different graph");
    }
    let n = g.vertex_count();
    if w_side.universe() != n || v_side.universe() != n {
        return invalid("vertex set does not match the graph");
    }
    let red = coloring.red();
    for x in w_side.iter() {
        let r = red.degree_into(x, v_side);
        if (r as f64) < thr.many_red {
            return Err(Error::Precondition(format!(
                "vertex {x} of W has {r} red neighbours in V, needs at least {:.2}",
                thr.many_red
            )));
        }
    }
    let core = v_side.intersection(w_side);
    let centre = core
        .iter()
        .max_by_key(|&x| (red.degree_into(x, &core), std::cmp::Reverse(x)))
        .ok_or_else(|| Error::Precondition("V ∩ W is empty".into()))?;
    let pool = without(&core, &[centre]);
    let nbrs = red.neighborhood(centre).intersection(&pool);
    let split = split_pool(&pool, &nbrs, thr.split_red.ceil() as usize, opts.seed)?;
    let trim = strongly_regular_trim(red, &split.a, &split.b, opts.epsilon)?;
    let (pa, pb) = (trim.w1, trim.w2);
    let ends_a: Vec<usize> = nbrs.intersection(&pa).iter().collect();
    let ends_b: Vec<usize> = nbrs.intersection(&pb).iter().collect();
    let attempts = opts.endpoint_attempts.max(1);
    let top = w_side.len();

    let build = |len: usize| -> Result<CycleWitness, String> {
        if len == 3 {
            let cand: Vec<usize> = red.neighborhood(centre).intersection(w_side).iter().collect();
            let (x, y) = cand
                .iter()
                .enumerate()
                .flat_map(|(i, &x)| cand[i + 1..].iter().map(move |&y| (x, y)))
                .find(|&(x, y)| red.has_edge(x, y))
                .ok_or("no red edge among the centre's neighbours")?;
            return emit(red, vec![centre, x, y], 3);
        }
        let pairs: Vec<(usize, usize)> = if len % 2 == 1 {
            ends_a.iter().flat_map(|&x| ends_b.iter().map(move |&y| (x, y))).take(attempts).collect()
        } else {
            let within = |e: &[usize]| -> Vec<(usize, usize)> {
                e.iter()
                    .enumerate()
                    .flat_map(|(i, &x)| e[i + 1..].iter().map(move |&y| (x, y)))
                    .collect()
            };
            let (wa, wb) = (within(&ends_a), within(&ends_b));
            wa.into_iter().zip(wb).flat_map(|(p, q)| [p, q]).take(attempts).collect()
        };
        let mut last = String::from("no endpoint pair available");
        for (x, y) in pairs {
            match bipartite_path_builder(g, coloring, Color::Red, &pa, &pb, x, y, len - 2, opts) {
                Ok(p) => {
                    let mut c = vec![centre];
                    c.extend(p);
                    return emit(red, c, len);
                }
                Err(e @ (PathError::LengthCap { .. } | PathError::Precondition(_))) => return Err(e.to_string()),
                Err(e) => last = e.to_string(),
            }
        }
        Err(last)
    };
    let direct = collect_lengths(3..=top.max(3), build);
    let mut family = CycleFamily::default();
    let mut extended = Vec::new();
    for len in 3..=top {
        let got = match direct.cycles.get(&len) {
            Some(c) => Ok(c.clone()),
            None => {
                let why = direct.gaps.get(&len).cloned().unwrap_or_default();
                match family.cycles.get(&(len - 1)) {
                    Some(prev) => extend_by_one(red, prev, w_side, v_side)
                        .inspect(|_| extended.push(len))
                        .map_err(|e| format!("{why}; extension from {}: {e}", len - 1)),
                    None => Err(format!("{why}; no cycle of length {} to extend", len - 1)),
                }
            }
        };
        family.insert(len, got);
    }

    if let Some(x) = external {
        let got = external_cycle(g, coloring, w_side, v_side, &core, x, opts);
        family.insert(top + 1, got.map_err(|e| e.to_string()));
    }
    Ok(RedPancyclic {
        family,
        centre,
        split_sizes: (split.a.len(), split.b.len()),
        greedy_split: split.greedy,
        extended,
    })
}

/// Tries every vertex of `w_side` off the cycle, in increasing id order.
fn extend_by_one(red: &Graph, cycle: &CycleWitness, w_side: &VertexSet, v_side: &VertexSet) -> Result<CycleWitness> {
    let on: VertexSet = VertexSet::from_vertices(red.vertex_count(), cycle.vertices().iter().copied())?;
    for w in w_side.difference(&on).iter() {
        if let Ok(c) = rotation_extend(red, cycle, w, v_side) {
            return Ok(c);
        }
    }
    Err(Error::Construction("no unused vertex of W admits a rotation".into()))
}

/// A red cycle through `x ∉ Wi` covering all of `Wi`: `x`, then a long red
/// path between two red neighbours of `x`, then rotation-extension until
/// every vertex of `Wi` is on the cycle.
fn external_cycle(
    g: &Graph,
    coloring: &EdgeColoring,
    w_side: &VertexSet,
    v_side: &VertexSet,
    core: &VertexSet,
    x: usize,
    opts: &BuilderOptions,
) -> Result<CycleWitness> {
    let red = coloring.red();
    if x >= g.vertex_count() || w_side.contains(x) {
        return invalid(format!("external vertex {x} must lie outside W"));
    }
    let xn: Vec<usize> = red.neighbors(x).filter(|&y| w_side.contains(y)).collect();
    if xn.len() < 2 {
        return Err(Error::Precondition(format!(
            "external vertex {x} has {} red neighbours in W, needs 2",
            xn.len()
        )));
    }
    let mut last = Error::Construction("no neighbour pair tried".into());
    for (i, &p) in xn.iter().enumerate() {
        for &q in &xn[i + 1..] {
            let pool = without(core, &[p, q, x]);
            let members: Vec<usize> = pool.iter().collect();
            let half = members.len() / 2;
            let mut a = VertexSet::from_vertices(g.vertex_count(), members[..half].iter().copied())?;
            let mut b = VertexSet::from_vertices(g.vertex_count(), members[half..].iter().copied())?;
            a.insert(p);
            b.insert(q);
            let trim = match strongly_regular_trim(red, &a, &b, opts.epsilon) {
                Ok(t) => t,
                Err(e) => {
                    last = e;
                    continue;
                }
            };
            let (mut ta, mut tb) = (trim.w1, trim.w2);
            ta.insert(p);
            tb.insert(q);
            let e = edge_count_between(red, &ta, &tb)?;
            let density = e as f64 / (ta.len() * tb.len()) as f64;
            let mut len = path_length_cap(ta.len(), tb.len(), density, opts.epsilon);
            if len % 2 == 0 {
                len = len.saturating_sub(1);
            }
            let mut tries = 0;
            while len >= 1 && tries < opts.endpoint_attempts.max(1) {
                match bipartite_path_builder(g, coloring, Color::Red, &ta, &tb, p, q, len, opts) {
                    Ok(path) => {
                        let mut c = vec![x];
                        c.extend(path);
                        let mut cyc = CycleWitness::new_verified(red, c)?;
                        while cyc.len() < w_side.len() + 1 {
                            cyc = extend_by_one(red, &cyc, w_side, v_side)?;
                        }
                        return Ok(cyc);
                    }
                    Err(e) => last = e.into(),
                }
                len = len.saturating_sub(2);
                tries += 1;
            }
        }
    }
    Err(last)
}
