//! Regular pairs, reduced graphs and matching-based connectivity, at sizes
//! where they can be checked exactly.
//!
//! Regularity of a pair is certified only by exhaustive enumeration of
//! sub-pairs, which is limited to 15 vertices per side. Sampled checks can
//! refute regularity but never certify it.

use crate::coloring::{Color, EdgeColoring};
use crate::error::{invalid, Error, Result};
use crate::graph::{components_bipartiteness, edge_count_between, CycleWitness, Graph, VertexSet};
use crate::rng;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Largest side for which [`RegularityMode::Exhaustive`] is accepted.
pub const EXHAUSTIVE_SIDE_LIMIT: usize = 15;

/// Exact fraction as it appears in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numerator: i64,
    pub denominator: i64,
}

impl From<Ratio<i64>> for Fraction {
    fn from(r: Ratio<i64>) -> Self {
        Fraction {
            numerator: *r.numer(),
            denominator: *r.denom(),
        }
    }
}

fn ser_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    Fraction::from(*r).serialize(s)
}

fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_pair(g: &Graph, v1: &VertexSet, v2: &VertexSet) -> Result<()> {
    if v1.universe() != g.vertex_count() || v2.universe() != g.vertex_count() {
        return invalid("vertex set does not match the graph");
    }
    if v1.is_empty() || v2.is_empty() {
        return invalid("pair sides must be nonempty");
    }
    if !v1.is_disjoint(v2) {
        return invalid("pair sides must be disjoint");
    }
    Ok(())
}

/// `e(V1, V2) / (|V1||V2|)` as an exact fraction.
pub fn pair_density(g: &Graph, v1: &VertexSet, v2: &VertexSet) -> Result<Ratio<i64>> {
    check_pair(g, v1, v2)?;
    let e = edge_count_between(g, v1, v2)? as i64;
    Ok(Ratio::new(e, (v1.len() * v2.len()) as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityMode {
    /// Every sub-pair; certifies regularity.
    Exhaustive,
    /// Random sub-pairs; can only refute.
    Sampled { samples: usize, seed: u64 },
}

/// A sub-pair whose density strays from the pair density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrregularWitness {
    pub w1: VertexSet,
    pub w2: VertexSet,
    #[serde(serialize_with = "ser_ratio")]
    pub density: Ratio<i64>,
    #[serde(serialize_with = "ser_ratio")]
    pub deviation: Ratio<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RegularityVerdict {
    /// Exhaustive check found no sub-pair deviating by more than ε; the
    /// largest deviation seen is reported.
    Regular {
        #[serde(serialize_with = "ser_ratio")]
        max_deviation: Ratio<i64>,
    },
    Irregular(IrregularWitness),
    /// Sampled check found no violation among `samples` sub-pairs.
    HeuristicRegular { samples: usize },
}

impl RegularityVerdict {
    /// True for `Regular` and `HeuristicRegular`.
    pub fn passes(&self) -> bool {
        !matches!(self, RegularityVerdict::Irregular(_))
    }
}

fn min_part(eps: f64, size: usize) -> usize {
    ((eps * size as f64).ceil() as usize).clamp(1, size)
}

/// Is `(V1, V2)` ε-regular: every `W1 ⊆ V1`, `W2 ⊆ V2` with
/// `|Wi| ≥ ε|Vi|` has `|d(W1,W2) − d(V1,V2)| ≤ ε`?
///
/// Exhaustive mode enumerates every `W1` and, for each size of `W2`, only
/// the two extreme choices (the vertices of `V2` with the most and the
/// fewest neighbours in `W1`). The witness is a sub-pair of largest
/// deviation; ties go to the smaller pair of sizes, compared as a sorted
/// pair so the answer does not depend on which side is listed first.
pub fn check_regular_pair(
    g: &Graph,
    v1: &VertexSet,
    v2: &VertexSet,
    eps: f64,
    mode: RegularityMode,
) -> Result<RegularityVerdict> {
    check_pair(g, v1, v2)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return invalid(format!("epsilon {eps} must lie in (0, 1]"));
    }
    let d = pair_density(g, v1, v2)?;
    match mode {
        RegularityMode::Exhaustive => {
            if v1.len() > EXHAUSTIVE_SIDE_LIMIT || v2.len() > EXHAUSTIVE_SIDE_LIMIT {
                return invalid(format!(
                    "exhaustive regularity needs sides of at most {EXHAUSTIVE_SIDE_LIMIT} vertices, got {} and {}",
                    v1.len(),
                    v2.len()
                ));
            }
            Ok(exhaustive(g, v1, v2, eps, d))
        }
        RegularityMode::Sampled { samples, seed } => Ok(sampled(g, v1, v2, eps, d, samples, seed)),
    }
}

fn exhaustive(g: &Graph, v1: &VertexSet, v2: &VertexSet, eps: f64, d: Ratio<i64>) -> RegularityVerdict {
    let side1: Vec<usize> = v1.iter().collect();
    let side2: Vec<usize> = v2.iter().collect();
    let (m1, m2) = (min_part(eps, side1.len()), min_part(eps, side2.len()));
    // Neighbours of each vertex of V2 as a mask over positions in V1.
    let nb: Vec<u32> = side2
        .iter()
        .map(|&y| {
            side1
                .iter()
                .enumerate()
                .filter(|&(_, &x)| g.has_edge(x, y))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();

    struct Best {
        dev: Ratio<i64>,
        key: (usize, usize),
        mask1: u32,
        chosen: Vec<usize>,
        density: Ratio<i64>,
    }
    let mut best: Option<Best> = None;
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(side2.len());
    for mask in 1u32..1 << side1.len() {
        let a = mask.count_ones() as usize;
        if a < m1 {
            continue;
        }
        counts.clear();
        counts.extend(nb.iter().enumerate().map(|(j, &m)| ((m & mask).count_ones(), j)));
        counts.sort_unstable_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let total = counts.len();
        let (mut top, mut bottom) = (0i64, 0i64);
        for t in 1..=total {
            top += counts[t - 1].0 as i64;
            bottom += counts[total - t].0 as i64;
            if t < m2 {
                continue;
            }
            let key = (a.min(t), a.max(t));
            for (sum, from_top) in [(top, true), (bottom, false)] {
                let density = Ratio::new(sum, (a * t) as i64);
                let dev = if density > d { density - d } else { d - density };
                let better = match &best {
                    None => true,
                    Some(b) => dev > b.dev || (dev == b.dev && key < b.key),
                };
                if better {
                    let chosen = if from_top {
                        counts[..t].iter().map(|c| c.1).collect()
                    } else {
                        counts[total - t..].iter().map(|c| c.1).collect()
                    };
                    best = Some(Best {
                        dev,
                        key,
                        mask1: mask,
                        chosen,
                        density,
                    });
                }
            }
        }
    }
    let best = best.expect("V1 is nonempty so some sub-pair exists");
    if ratio_f64(&best.dev) > eps {
        let n = g.vertex_count();
        let w1 = VertexSet::from_vertices(n, (0..side1.len()).filter(|i| best.mask1 >> i & 1 == 1).map(|i| side1[i]))
            .expect("in range");
        let w2 = VertexSet::from_vertices(n, best.chosen.iter().map(|&j| side2[j])).expect("in range");
        RegularityVerdict::Irregular(IrregularWitness {
            w1,
            w2,
            density: best.density,
            deviation: best.dev,
        })
    } else {
        RegularityVerdict::Regular { max_deviation: best.dev }
    }
}

fn sampled(
    g: &Graph,
    v1: &VertexSet,
    v2: &VertexSet,
    eps: f64,
    d: Ratio<i64>,
    samples: usize,
    seed: u64,
) -> RegularityVerdict {
    let side1: Vec<usize> = v1.iter().collect();
    let side2: Vec<usize> = v2.iter().collect();
    let (m1, m2) = (min_part(eps, side1.len()), min_part(eps, side2.len()));
    let mut rng = rng::substream(seed, rng::Stream::Split);
    let n = g.vertex_count();
    let pick = |side: &[usize], min: usize, rng: &mut rng::Prng| {
        let size = rng.gen_range(min..=side.len());
        VertexSet::from_vertices(n, side.choose_multiple(rng, size).copied()).expect("in range")
    };
    for _ in 0..samples {
        let w1 = pick(&side1, m1, &mut rng);
        let w2 = pick(&side2, m2, &mut rng);
        let e = edge_count_between(g, &w1, &w2).expect("in range") as i64;
        let density = Ratio::new(e, (w1.len() * w2.len()) as i64);
        let dev = if density > d { density - d } else { d - density };
        if ratio_f64(&dev) > eps {
            return RegularityVerdict::Irregular(IrregularWitness {
                w1,
                w2,
                density,
                deviation: dev,
            });
        }
    }
    RegularityVerdict::HeuristicRegular { samples }
}

/// Output of [`strongly_regular_trim`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongTrim {
    pub w1: VertexSet,
    pub w2: VertexSet,
    pub rounds: usize,
    /// `|Wi| ≥ (1 − 2ε)|Vi|` on both sides.
    pub size_guarantee_held: bool,
}

/// Repeatedly drops every vertex with fewer than `d(W1,W2)·|other side|/10`
/// neighbours across, recomputing the density each round, until no vertex
/// falls short. The result therefore meets the degree part of strong
/// regularity with respect to its own density, and trimming it again is a
/// no-op.
pub fn strongly_regular_trim(g: &Graph, v1: &VertexSet, v2: &VertexSet, eps: f64) -> Result<StrongTrim> {
    check_pair(g, v1, v2)?;
    let (mut w1, mut w2) = (v1.clone(), v2.clone());
    let mut rounds = 0;
    loop {
        let e = edge_count_between(g, &w1, &w2)? as u64;
        // deg(x) ≥ e/(|W1||W2|) · |W2| / 10  ⇔  10·|W1|·deg(x) ≥ e.
        let low1: Vec<usize> = w1.iter().filter(|&x| ((10 * w1.len() * g.degree_into(x, &w2)) as u64) < e).collect();
        let low2: Vec<usize> = w2.iter().filter(|&y| ((10 * w2.len() * g.degree_into(y, &w1)) as u64) < e).collect();
        if low1.is_empty() && low2.is_empty() {
            break;
        }
        rounds += 1;
        for x in low1 {
            w1.remove(x);
        }
        for y in low2 {
            w2.remove(y);
        }
        if w1.is_empty() || w2.is_empty() {
            return Err(Error::Precondition("strong trimming emptied a side of the pair".into()));
        }
    }
    let held = w1.len() as f64 >= (1.0 - 2.0 * eps) * v1.len() as f64
        && w2.len() as f64 >= (1.0 - 2.0 * eps) * v2.len() as f64;
    Ok(StrongTrim {
        w1,
        w2,
        rounds,
        size_guarantee_held: held,
    })
}

/// Disjoint parts covering the vertex set, sizes differing by at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<VertexSet>,
}

impl Partition {
    pub fn new(vertex_count: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.is_empty() {
            return invalid("partition has no parts");
        }
        let mut seen = VertexSet::new(vertex_count);
        let mut sets = Vec::with_capacity(parts.len());
        for (i, p) in parts.into_iter().enumerate() {
            let mut set = VertexSet::new(vertex_count);
            for v in p {
                if v >= vertex_count {
                    return invalid(format!("part {i}: vertex {v} out of range"));
                }
                if !seen.insert(v) || !set.insert(v) {
                    return invalid(format!("vertex {v} appears twice"));
                }
            }
            sets.push(set);
        }
        if seen.len() != vertex_count {
            return invalid(format!("parts cover {} of {vertex_count} vertices", seen.len()));
        }
        let (lo, hi) = sets.iter().fold((usize::MAX, 0), |(lo, hi), s| (lo.min(s.len()), hi.max(s.len())));
        if hi - lo > 1 {
            return invalid(format!("part sizes range from {lo} to {hi}"));
        }
        Ok(Partition { parts: sets })
    }

    /// Consecutive blocks `0..a, a..2a, …` of near-equal size.
    pub fn equitable(vertex_count: usize, parts: usize) -> Result<Self> {
        if parts == 0 || parts > vertex_count {
            return invalid(format!("cannot split {vertex_count} vertices into {parts} parts"));
        }
        let (q, r) = (vertex_count / parts, vertex_count % parts);
        let mut start = 0;
        let blocks = (0..parts)
            .map(|i| {
                let len = q + (i < r) as usize;
                let b: Vec<usize> = (start..start + len).collect();
                start += len;
                b
            })
            .collect();
        Self::new(vertex_count, blocks)
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// One `part i: v v v` line per part.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.parts.iter().enumerate() {
            write!(s, "part {i}:").unwrap();
            for v in p.iter() {
                write!(s, " {v}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(vertex_count: usize, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Format { what: "partition", msg };
        let mut parts = Vec::new();
        for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| bad(format!("line {}: missing ':'", ln + 1)))?;
            let idx: usize = head
                .trim()
                .strip_prefix("part")
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| bad(format!("line {}: expected `part i:`", ln + 1)))?;
            if idx != parts.len() {
                return Err(bad(format!("line {}: part {idx} out of order", ln + 1)));
            }
            let vs = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| bad(format!("line {}: {e}", ln + 1))))
                .collect::<Result<Vec<_>>>()?;
            parts.push(vs);
        }
        Self::new(vertex_count, parts)
    }
}

/// One pair of parts in a [`ReducedGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedPair {
    pub i: usize,
    pub j: usize,
    pub red_edges: u64,
    pub blue_edges: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub red_density: Ratio<i64>,
    #[serde(serialize_with = "ser_ratio")]
    pub blue_density: Ratio<i64>,
    pub red_regularity: RegularityVerdict,
    pub blue_regularity: RegularityVerdict,
    /// Present only when the pair is regular in both colours; red unless
    /// blue edges are strictly more numerous.
    pub edge: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedGraph {
    pub parts: usize,
    /// True when regularity was only sampled.
    pub heuristic: bool,
    pub pairs: Vec<ReducedPair>,
}

impl ReducedGraph {
    /// The reduced graph on the parts with its majority colouring.
    pub fn to_colored(&self) -> (Graph, EdgeColoring) {
        let edges: Vec<(usize, usize, Color)> =
            self.pairs.iter().filter_map(|p| p.edge.map(|c| (p.i, p.j, c))).collect();
        let g = Graph::from_edges(self.parts, edges.iter().map(|&(i, j, _)| (i, j))).expect("pairs are distinct");
        let c = EdgeColoring::from_fn(&g, |u, v| {
            edges.iter().find(|&&(i, j, _)| (i, j) == (u, v)).map(|e| e.2).expect("edge listed")
        });
        (g, c)
    }
}

/// Reduced graph of a colouring over a partition: parts `i < j` are joined
/// when the pair is ε-regular in both colour classes, coloured by the
/// majority of the edges between them with a draw going to red.
pub fn reduced_graph(
    g: &Graph,
    coloring: &EdgeColoring,
    partition: &Partition,
    eps: f64,
    mode: RegularityMode,
) -> Result<ReducedGraph> {
    if coloring.host() != g {
        return invalid("colouring belongs to a different graph");
    }
    if partition.parts().iter().any(|p| p.universe() != g.vertex_count()) {
        return invalid("partition does not match the graph");
    }
    let s = partition.len();
    let idx: Vec<(usize, usize)> = (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j))).collect();
    let pairs = idx
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&partition.parts()[i], &partition.parts()[j]);
            let red_edges = edge_count_between(coloring.red(), a, b)?;
            let blue_edges = edge_count_between(coloring.blue(), a, b)?;
            let denom = (a.len() * b.len()) as i64;
            let red_regularity = check_regular_pair(coloring.red(), a, b, eps, mode)?;
            let blue_regularity = check_regular_pair(coloring.blue(), a, b, eps, mode)?;
            let edge = (red_regularity.passes() && blue_regularity.passes()).then(|| {
                if red_edges >= blue_edges {
                    Color::Red
                } else {
                    Color::Blue
                }
            });
            Ok(ReducedPair {
                i,
                j,
                red_edges,
                blue_edges,
                red_density: Ratio::new(red_edges as i64, denom),
                blue_density: Ratio::new(blue_edges as i64, denom),
                red_regularity,
                blue_regularity,
                edge,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReducedGraph {
        parts: s,
        heuristic: matches!(mode, RegularityMode::Sampled { .. }),
        pairs,
    })
}

/// Maximum matching of a general graph by augmenting paths with blossom
/// contraction. Returns each vertex's partner.
pub fn maximum_matching(g: &Graph) -> Vec<Option<usize>> {
    const NONE: usize = usize::MAX;
    let n = g.vertex_count();
    let mut mate = vec![NONE; n];
    // Greedy start.
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(u) = g.neighbors(v).find(|&u| mate[u] == NONE) {
                mate[v] = u;
                mate[u] = v;
            }
        }
    }
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut blossom = vec![false; n];

    fn lca(mate: &[usize], base: &[usize], parent: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = parent[mate[a]];
        }
        loop {
            b = base[b];
            if seen[b] {
                return b;
            }
            b = parent[mate[b]];
        }
    }

    fn mark_path(
        mate: &[usize],
        base: &[usize],
        parent: &mut [usize],
        blossom: &mut [bool],
        mut v: usize,
        b: usize,
        mut child: usize,
    ) {
        while base[v] != b {
            blossom[base[v]] = true;
            blossom[base[mate[v]]] = true;
            parent[v] = child;
            child = mate[v];
            v = parent[mate[v]];
        }
    }

    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        parent.iter_mut().for_each(|p| *p = NONE);
        used.iter_mut().for_each(|u| *u = false);
        for (i, b) in base.iter_mut().enumerate() {
            *b = i;
        }
        used[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut end = NONE;
        'bfs: while let Some(v) = queue.pop_front() {
            for to in g.neighbors(v) {
                if base[v] == base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                    let cur = lca(&mate, &base, &parent, v, to);
                    blossom.iter_mut().for_each(|b| *b = false);
                    mark_path(&mate, &base, &mut parent, &mut blossom, v, cur, to);
                    mark_path(&mate, &base, &mut parent, &mut blossom, to, cur, v);
                    for i in 0..n {
                        if blossom[base[i]] {
                            base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if parent[to] == NONE {
                    parent[to] = v;
                    if mate[to] == NONE {
                        end = to;
                        break 'bfs;
                    }
                    used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        let mut v = end;
        while v != NONE {
            let pv = parent[v];
            let ppv = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = ppv;
        }
    }
    mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}

/// A matching inside one non-bipartite component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingCertificate {
    pub matching: Vec<(usize, usize)>,
    /// Index of the component in [`components_bipartiteness`] order.
    pub component: usize,
    pub component_vertices: Vec<usize>,
    pub saturated: usize,
    pub odd_cycle: CycleWitness,
}

/// Some non-bipartite component has a matching saturating `⌈t⌉` vertices.
/// Reports the component with the largest maximum matching (ties to the
/// earlier component), or `None`.
pub fn property_mt(g: &Graph, t: f64) -> Result<Option<MatchingCertificate>> {
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("t = {t} must be positive"));
    }
    let need = t.ceil() as usize;
    let mate = maximum_matching(g);
    let mut best: Option<MatchingCertificate> = None;
    for (ci, comp) in components_bipartiteness(g).into_iter().enumerate() {
        let Some(odd_cycle) = comp.odd_cycle else { continue };
        let matching: Vec<(usize, usize)> = comp
            .vertices
            .iter()
            .filter_map(|v| mate[v].filter(|&u| u > v).map(|u| (v, u)))
            .collect();
        let saturated = 2 * matching.len();
        if best.as_ref().is_none_or(|b| saturated > b.saturated) {
            best = Some(MatchingCertificate {
                matching,
                component: ci,
                component_vertices: comp.vertices.iter().collect(),
                saturated,
                odd_cycle,
            });
        }
    }
    Ok(best.filter(|b| b.saturated >= need))
}

/// Vertices of `k` with fewer than `(1 − 2√ε)·s` neighbours, `s` the
/// vertex count. In a graph missing at most `εs²` edges of `K_s` there are
/// at most `√ε·s` of them.
pub fn low_degree_vertices(k: &Graph, eps: f64) -> Vec<usize> {
    let cut = (1.0 - 2.0 * eps.sqrt()) * k.vertex_count() as f64;
    (0..k.vertex_count()).filter(|&v| (k.degree(v) as f64) < cut).collect()
}

/// Result of [`dense_even_core`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseCore {
    pub kept: Vec<usize>,
    pub dropped_low_degree: Vec<usize>,
    /// Dropped to make the kept set even: the largest remaining id.
    pub dropped_for_parity: Option<usize>,
    /// Minimum degree inside the kept set.
    pub min_degree: usize,
    /// `min_degree > |kept|/2`, so the core is Hamiltonian.
    pub dirac: bool,
    pub triangle: Option<[usize; 3]>,
}

/// Removes from `w` the vertices of low degree in `k` (see
/// [`low_degree_vertices`]) and, if an odd number remain, the largest id.
pub fn dense_even_core(k: &Graph, w: &VertexSet, eps: f64) -> Result<DenseCore> {
    if w.universe() != k.vertex_count() {
        return invalid("vertex set does not match the graph");
    }
    let low: Vec<usize> = low_degree_vertices(k, eps).into_iter().filter(|&v| w.contains(v)).collect();
    let mut kept: Vec<usize> = w.iter().filter(|v| !low.contains(v)).collect();
    let parity = if kept.len() % 2 == 1 { kept.pop() } else { None };
    let set = VertexSet::from_vertices(k.vertex_count(), kept.iter().copied())?;
    let min_degree = kept.iter().map(|&v| k.degree_into(v, &set)).min().unwrap_or(0);
    let mut triangle = None;
    'outer: for (i, &a) in kept.iter().enumerate() {
        for (j, &b) in kept.iter().enumerate().skip(i + 1) {
            if !k.has_edge(a, b) {
                continue;
            }
            for &c in &kept[j + 1..] {
                if k.has_edge(a, c) && k.has_edge(b, c) {
                    triangle = Some([a, b, c]);
                    break 'outer;
                }
            }
        }
    }
    Ok(DenseCore {
        dirac: !kept.is_empty() && 2 * min_degree > kept.len(),
        kept,
        dropped_low_degree: low,
        dropped_for_parity: parity,
        min_degree,
        triangle,
    })
}

/// Two disjoint independent sets of a colour class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteSearch {
    pub found: Option<(Vec<usize>, Vec<usize>)>,
    /// False when the answer came from the greedy heuristic.
    pub exact: bool,
}

/// Largest graph handled by exact search in [`induced_bipartite`].
pub const INDUCED_BIPARTITE_EXACT_LIMIT: usize = 20;

/// Looks for disjoint `W1, W2`, each independent in `h` and of size at
/// least `min_side`, so that `h[W1 ∪ W2]` is bipartite with these sides.
/// Exact up to 20 vertices (maximum independent sets by subset dynamic
/// programming); greedy minimum-degree selection above that, flagged as
/// inexact.
pub fn induced_bipartite(h: &Graph, min_side: usize) -> BipartiteSearch {
    let n = h.vertex_count();
    if n > INDUCED_BIPARTITE_EXACT_LIMIT {
        return BipartiteSearch {
            found: greedy_bipartite(h, min_side),
            exact: false,
        };
    }
    if min_side == 0 {
        return BipartiteSearch {
            found: Some((vec![], vec![])),
            exact: true,
        };
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| h.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    // mis[mask] = size of a maximum independent set inside mask.
    let full = 1usize << n;
    let mut mis = vec![0u8; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let without = mask & !(1 << v);
        let with = mask & !(1 << v) & !(adj[v] as usize);
        mis[mask] = mis[without].max(1 + mis[with]);
    }
    let extract = |mut mask: usize| {
        let mut out = Vec::new();
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            let without = mask & !(1 << v);
            let with = without & !(adj[v] as usize);
            if 1 + mis[with] >= mis[mask] {
                out.push(v);
                mask = with;
            } else {
                mask = without;
            }
        }
        out
    };
    for mask in 1..full {
        if (mask.count_ones() as usize) < min_side || mis[mask] as u32 != mask.count_ones() {
            continue;
        }
        let rest = (full - 1) & !mask;
        if mis[rest] as usize >= min_side {
            let w1: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let w2 = extract(rest);
            return BipartiteSearch {
                found: Some((w1, w2)),
                exact: true,
            };
        }
    }
    BipartiteSearch { found: None, exact: true }
}

fn greedy_bipartite(h: &Graph, min_side: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let greedy_mis = |avail: &mut VertexSet| {
        let mut out = Vec::new();
        while let Some(v) = avail.iter().min_by_key(|&v| (h.degree_into(v, avail), v)) {
            out.push(v);
            avail.remove(v);
            for u in h.neighbors(v) {
                avail.remove(u);
            }
        }
        out
    };
    let mut avail = h.all_vertices();
    let w1 = greedy_mis(&mut avail);
    let mut rest = h.all_vertices();
    for &v in &w1 {
        rest.remove(v);
    }
    let mut w2 = greedy_mis(&mut rest);
    w2.sort_unstable();
    (w1.len() >= min_side && w2.len() >= min_side).then(|| {
        let mut w1 = w1;
        w1.sort_unstable();
        (w1, w2)
    })
}
