//! Simple undirected graphs stored as fixed-width bit rows.
//!
//! Vertex `v` owns `words` 64-bit words; bit `u` of the row is set iff
//! `{u, v}` is an edge. Rows are kept symmetric and irreflexive, so
//! neighbourhood intersections reduce to word-wise `AND` plus popcount.

mod components;
mod cycles;
pub mod io;
mod spectral;

pub use components::{components_bipartiteness, Component};
pub use cycles::{cycle_spectrum, find_cycle_of_length, CycleSearch, CycleSpectrum, CycleStatus};
pub use spectral::{spectral_discrepancy_bound, SpectralReport};

use crate::error::{invalid, Result};
use std::fmt;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Immutable simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v);
            }
        }
        b.build()
    }

    /// The cycle `0 - 1 - ... - (n-1) - 0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least three vertices");
        let mut b = GraphBuilder::new(n);
        for v in 0..n {
            b.add_edge(v, (v + 1) % n);
        }
        b.build()
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for v in 1..n {
            b.add_edge(v - 1, v);
        }
        b.build()
    }

    /// Petersen graph: outer 5-cycle `0..5`, spokes `i - i+5`, inner pentagram.
    pub fn petersen() -> Self {
        let mut b = GraphBuilder::new(10);
        for i in 0..5 {
            b.add_edge(i, (i + 1) % 5);
            b.add_edge(i, i + 5);
            b.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        b.build()
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) out of range for {n} vertices"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if !b.add_edge(u, v) {
                return invalid(format!("duplicate edge ({u}, {v})"));
            }
        }
        Ok(b.build())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of 64-bit words in each adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `v` as raw words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.row(u)[v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    pub fn neighborhood(&self, v: usize) -> VertexSet {
        VertexSet {
            universe: self.n,
            bits: self.row(v).to_vec(),
        }
    }

    /// Edges `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `|N(v) ∩ set|`.
    #[inline]
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        popcount_and(self.row(v), &set.bits)
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            n: self.n,
            words: self.words,
            rows: self.rows.clone(),
            edges: self.edges,
        }
    }

    /// Subgraph keeping only the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let mut b = GraphBuilder::new(self.n);
        for (u, v) in self.edges() {
            if keep(u, v) {
                b.add_edge(u, v);
            }
        }
        b.build()
    }

    /// Subgraph induced by `set`, relabelled to `0..set.len()` in increasing
    /// order. Returns the graph and the new-to-old vertex map.
    pub fn induced(&self, set: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = set.iter().collect();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let mut b = GraphBuilder::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            for u in self.neighbors(v) {
                let j = back[u];
                if j != usize::MAX && j > i {
                    b.add_edge(i, j);
                }
            }
        }
        (b.build(), map)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range for {} vertices", self.n));
        }
        Ok(())
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.universe != self.n {
            return invalid(format!(
                "vertex set over {} vertices used with a graph on {}",
                s.universe, self.n
            ));
        }
        Ok(())
    }
}

/// Mutable counterpart of [`Graph`] used while constructing or editing.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        GraphBuilder {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    fn flip(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] ^= 1 << (v % 64);
        self.rows[v * self.words + u / 64] ^= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Adds `{u, v}`; returns `false` if it was already present.
    ///
    /// # Panics
    /// On a self-loop or an out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v})");
        if self.has_edge(u, v) {
            return false;
        }
        self.flip(u, v);
        self.edges += 1;
        true
    }

    /// Removes `{u, v}`; returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n || !self.has_edge(u, v) {
            return false;
        }
        self.flip(u, v);
        self.edges -= 1;
        true
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.n,
            words: self.words,
            rows: self.rows,
            edges: self.edges,
        }
    }
}

/// A subset of `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    bits: Vec<u64>,
}

/// Serialized as the sorted member list.
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            bits: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    /// Builds a set, rejecting members outside the universe.
    pub fn from_vertices(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::new(universe);
        for v in members {
            if v >= universe {
                return invalid(format!("vertex {v} out of range for {universe} vertices"));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn from_range(universe: usize, range: std::ops::Range<usize>) -> Self {
        let mut s = Self::new(universe);
        for v in range {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && (self.bits[v / 64] >> (v % 64)) & 1 == 1
    }

    /// # Panics
    /// If `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let had = self.contains(v);
        self.bits[v / 64] |= 1 << (v % 64);
        !had
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let had = self.contains(v);
        if had {
            self.bits[v / 64] &= !(1 << (v % 64));
        }
        had
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(&self.bits)
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        popcount_and(&self.bits, &other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(self.universe, other.universe, "vertex sets over different universes");
        VertexSet {
            universe: self.universe,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

#[inline]
pub(crate) fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A vertex sequence claimed to close up into a cycle.
///
/// Witnesses are only handed out after [`CycleWitness::verify`] succeeds
/// against the graph they were found in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct CycleWitness {
    vertices: Vec<usize>,
}

impl CycleWitness {
    /// Wraps `vertices` after checking it is a cycle of `g`.
    pub fn new_verified(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        let w = CycleWitness { vertices };
        w.verify(g)?;
        Ok(w)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Cyclically consecutive pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let l = self.vertices.len();
        (0..l).map(move |i| (self.vertices[i], self.vertices[(i + 1) % l]))
    }

    /// Checks length, distinctness and adjacency of consecutive vertices.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        verify_cycle(g, &self.vertices)
    }
}

pub(crate) fn verify_cycle(g: &Graph, vs: &[usize]) -> Result<()> {
    if vs.len() < 3 {
        return invalid(format!("cycle of length {} is shorter than 3", vs.len()));
    }
    let mut seen = VertexSet::new(g.vertex_count());
    for &v in vs {
        g.check_vertex(v)?;
        if !seen.insert(v) {
            return invalid(format!("vertex {v} repeated in cycle"));
        }
    }
    for i in 0..vs.len() {
        let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
        if !g.has_edge(a, b) {
            return invalid(format!("cycle uses non-edge ({a}, {b})"));
        }
    }
    Ok(())
}

/// `|N(v) ∩ N(w)|` for distinct vertices.
pub fn codegree(g: &Graph, v: usize, w: usize) -> Result<usize> {
    g.check_vertex(v)?;
    g.check_vertex(w)?;
    if v == w {
        return invalid("codegree needs two distinct vertices");
    }
    Ok(popcount_and(g.row(v), g.row(w)))
}

/// Ordered-pair edge count `|{(v, w) : v ∈ S, w ∈ T, vw ∈ E}|`; edges inside
/// `S ∩ T` are counted twice.
pub fn edge_count_between(g: &Graph, s: &VertexSet, t: &VertexSet) -> Result<u64> {
    g.check_set(s)?;
    g.check_set(t)?;
    Ok(s.iter().map(|v| g.degree_into(v, t) as u64).sum())
}
