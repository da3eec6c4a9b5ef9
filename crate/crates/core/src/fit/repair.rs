//! Degree repair: trimming over-full vertices, then switchings that raise
//! deficient degrees without disturbing any other vertex.

use super::{TargetDegreeProfile, ToleranceProfile};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::rng::{self, Prng, Stream};
use rand::Rng;
use serde::Serialize;

/// One edit applied by the repair phases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum RepairOp {
    /// `vertex` was over target; `removed` was deleted.
    Trim { vertex: usize, removed: (usize, usize) },
    /// Delete `deleted = w′w″`, add `v′w′` and `v″w″`. When `v1 == v2` this
    /// is the single-vertex variant raising one degree by two.
    Switch {
        v1: usize,
        v2: usize,
        deleted: (usize, usize),
        added: [(usize, usize); 2],
    },
    /// Fallback when two deficient vertices are non-adjacent and no
    /// crossing edge exists: the edge `v1v2` is added directly.
    Join { v1: usize, v2: usize },
}

/// Ordered edits plus how many changed edges touch each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairLog {
    pub ops: Vec<RepairOp>,
    pub touches: Vec<u32>,
}

/// Aggregate counts over a [`RepairLog`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairSummary {
    pub trims: usize,
    pub switches: usize,
    pub single_vertex_switches: usize,
    pub joins: usize,
    /// `2·multiplier·n^(deg_exponent+1)`.
    pub trim_edge_bound: f64,
    /// Largest number of trimmed edges at one vertex.
    pub max_trim_touch: u32,
    /// `7·multiplier·n^deg_exponent`.
    pub trim_touch_bound: f64,
    pub max_touch: u32,
}

impl RepairSummary {
    pub fn trim_within_bounds(&self) -> bool {
        self.trims as f64 <= self.trim_edge_bound && self.max_trim_touch as f64 <= self.trim_touch_bound
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl RepairLog {
    pub fn new(vertex_count: usize) -> Self {
        RepairLog {
            ops: Vec::new(),
            touches: vec![0; vertex_count],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Applies every op to `base`, failing if an edge to delete is missing
    /// or an edge to add is already present.
    pub fn replay(&self, base: &Graph) -> Result<Graph> {
        let mut b = base.to_builder();
        let bad = |i: usize, what: &str| Error::InvalidInput(format!("repair op {i}: {what}"));
        let check = |v: usize, i: usize| {
            if v < base.vertex_count() {
                Ok(())
            } else {
                Err(bad(i, "vertex out of range"))
            }
        };
        for (i, op) in self.ops.iter().enumerate() {
            match *op {
                RepairOp::Trim { removed: (u, v), .. } => {
                    check(u, i)?;
                    check(v, i)?;
                    if u == v || !b.remove_edge(u, v) {
                        return Err(bad(i, "trimmed edge is absent"));
                    }
                }
                RepairOp::Switch { deleted: (u, v), added, .. } => {
                    for x in [u, v, added[0].0, added[0].1, added[1].0, added[1].1] {
                        check(x, i)?;
                    }
                    if u == v || !b.remove_edge(u, v) {
                        return Err(bad(i, "switched edge is absent"));
                    }
                    for (x, y) in added {
                        if x == y || !b.add_edge(x, y) {
                            return Err(bad(i, "added edge already present"));
                        }
                    }
                }
                RepairOp::Join { v1, v2 } => {
                    check(v1, i)?;
                    check(v2, i)?;
                    if v1 == v2 || !b.add_edge(v1, v2) {
                        return Err(bad(i, "joined edge already present"));
                    }
                }
            }
        }
        Ok(b.build())
    }

    pub fn summary(&self, n: usize, tol: &ToleranceProfile) -> RepairSummary {
        let mut trim_touch = vec![0u32; self.touches.len()];
        let (mut trims, mut switches, mut singles, mut joins) = (0, 0, 0, 0);
        for op in &self.ops {
            match *op {
                RepairOp::Trim { removed: (u, v), .. } => {
                    trims += 1;
                    trim_touch[u] += 1;
                    trim_touch[v] += 1;
                }
                RepairOp::Switch { v1, v2, .. } if v1 == v2 => singles += 1,
                RepairOp::Switch { .. } => switches += 1,
                RepairOp::Join { .. } => joins += 1,
            }
        }
        RepairSummary {
            trims,
            switches,
            single_vertex_switches: singles,
            joins,
            trim_edge_bound: 2.0 * tol.sample_discrepancy_tolerance(n),
            max_trim_touch: trim_touch.iter().copied().max().unwrap_or(0),
            trim_touch_bound: 7.0 * tol.degree_tolerance(n),
            max_touch: self.touches.iter().copied().max().unwrap_or(0),
        }
    }

    fn touch(&mut self, v: usize, by: u32) {
        self.touches[v] += by;
    }
}

/// Removes surplus edges so no vertex exceeds its target.
///
/// Vertices are processed in increasing id. An over-full vertex drops its
/// edges to the neighbours with the fewest touches so far, ties to the
/// smaller id.
pub fn trim_surplus_edges(g: &Graph, profile: &TargetDegreeProfile) -> Result<(Graph, RepairLog)> {
    let mut log = RepairLog::new(g.vertex_count());
    let out = trim_into(g, profile, &mut log)?;
    Ok((out, log))
}

pub(crate) fn trim_into(g: &Graph, profile: &TargetDegreeProfile, log: &mut RepairLog) -> Result<Graph> {
    profile.check_graph(g)?;
    let mut b = g.to_builder();
    for v in 0..g.vertex_count() {
        let surplus = b.degree(v).saturating_sub(profile.target(v));
        if surplus == 0 {
            continue;
        }
        // Removing vu only touches v and u, so the order of the remaining
        // neighbours does not change while we work through this vertex.
        let mut nbrs: Vec<usize> = b.neighbors(v).collect();
        nbrs.sort_by_key(|&u| (log.touches[u], u));
        for &u in &nbrs[..surplus] {
            b.remove_edge(v, u);
            log.touch(v, 1);
            log.touch(u, 1);
            log.ops.push(RepairOp::Trim {
                vertex: v,
                removed: norm(v, u),
            });
        }
    }
    Ok(b.build())
}

/// Raises every degree to its target by switchings.
///
/// Repeatedly pairs the two most deficient vertices `v′, v″` (ties to the
/// smaller id), takes the `⌈n/10⌉` least-touched vertices of
/// `N(v″) ∖ N(v′)` and of `N(v′) ∖ N(v″)`, and replaces a crossing edge
/// `w′w″` by `v′w′, v″w″`. Among crossing edges the one with the fewest
/// touches wins, remaining ties drawn from the seeded generator. Without a
/// crossing edge the candidate sets are widened to everything once.
pub fn switch_repair(g: &Graph, profile: &TargetDegreeProfile, seed: u64) -> Result<(Graph, RepairLog)> {
    let mut log = RepairLog::new(g.vertex_count());
    let mut rng = rng::substream(seed, Stream::Repair);
    let out = switch_into(g, profile, &mut rng, &mut log)?;
    Ok((out, log))
}

pub(crate) fn switch_into(
    g: &Graph,
    profile: &TargetDegreeProfile,
    rng: &mut Prng,
    log: &mut RepairLog,
) -> Result<Graph> {
    profile.check_graph(g)?;
    let order = g.vertex_count();
    let mut deficit = vec![0usize; order];
    for (v, d) in deficit.iter_mut().enumerate() {
        let (deg, target) = (g.degree(v), profile.target(v));
        if deg > target {
            return Err(Error::Precondition(format!(
                "vertex {v} has degree {deg} above its target {target}"
            )));
        }
        *d = target - deg;
    }
    if deficit.iter().sum::<usize>() % 2 == 1 {
        return Err(Error::Precondition("total degree deficit is odd".into()));
    }
    let keep = profile.n().div_ceil(10).max(1);
    let mut b = g.to_builder();
    loop {
        let mut short: Vec<usize> = (0..order).filter(|&v| deficit[v] > 0).collect();
        if short.is_empty() {
            break;
        }
        short.sort_by_key(|&v| (std::cmp::Reverse(deficit[v]), v));
        #[cfg(debug_assertions)]
        let before: Vec<usize> = (0..order).map(|v| b.degree(v)).collect();

        // The two most deficient vertices first; other pairs only when
        // they admit no switch, which happens on very small graphs.
        let pairs = (0..short.len()).flat_map(|i| (i + 1..short.len()).map(move |j| (i, j)));
        let mut op = None;
        for (i, j) in pairs {
            op = pair_step(&b, short[i], short[j], keep, rng, &log.touches);
            if op.is_some() {
                break;
            }
        }
        if op.is_none() {
            if let Some(&v) = short.iter().find(|&&v| short.len() == 1 || deficit[v] >= 2) {
                op = single_step(&b, v, keep, rng, &log.touches);
            }
        }
        let op = op.ok_or_else(|| {
            Error::RepairFailed(format!("no switch or join raises the degree of any of {short:?}"))
        })?;
        let (v1, v2) = match op {
            RepairOp::Switch { v1, v2, .. } | RepairOp::Join { v1, v2 } => (v1, v2),
            RepairOp::Trim { .. } => unreachable!(),
        };
        apply(&mut b, &op, log);
        deficit[v1] -= 1;
        deficit[v2] -= 1;

        #[cfg(debug_assertions)]
        for (v, &d) in before.iter().enumerate() {
            let expect = d + (v == v1) as usize + (v == v2) as usize;
            debug_assert_eq!(b.degree(v), expect, "switch {op:?} disturbed vertex {v}");
        }
    }
    let out = b.build();
    for v in 0..order {
        assert_eq!(out.degree(v), profile.target(v), "repair left vertex {v} off target");
    }
    Ok(out)
}

fn least_touched(cands: &VertexSet, keep: usize, touches: &[u32]) -> Vec<usize> {
    let mut v: Vec<usize> = cands.iter().collect();
    v.sort_by_key(|&x| (touches[x], x));
    v.truncate(keep);
    v
}

/// Picks the least-touched edge among `edges`, drawing uniformly between
/// ties.
fn pick(edges: Vec<(usize, usize)>, touches: &[u32], rng: &mut Prng) -> Option<(usize, usize)> {
    let cost = |&(a, c): &(usize, usize)| touches[a] + touches[c];
    let best = edges.iter().map(cost).min()?;
    let ties: Vec<_> = edges.into_iter().filter(|e| cost(e) == best).collect();
    let i = if ties.len() > 1 { rng.gen_range(0..ties.len()) } else { 0 };
    Some(ties[i])
}

fn crossing(b: &GraphBuilder, left: &[usize], right: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &a in left {
        for &c in right {
            if b.has_edge(a, c) {
                out.push((a, c));
            }
        }
    }
    out
}

fn inner(b: &GraphBuilder, set: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &a) in set.iter().enumerate() {
        for &c in &set[i + 1..] {
            if b.has_edge(a, c) {
                out.push((a, c));
            }
        }
    }
    out
}

fn neighborhood(b: &GraphBuilder, v: usize, order: usize) -> VertexSet {
    VertexSet::from_vertices(order, b.neighbors(v)).expect("builder neighbours are in range")
}

fn pair_step(
    b: &GraphBuilder,
    v1: usize,
    v2: usize,
    keep: usize,
    rng: &mut Prng,
    touches: &[u32],
) -> Option<RepairOp> {
    let order = touches.len();
    let (n1, n2) = (neighborhood(b, v1, order), neighborhood(b, v2, order));
    let mut ends = VertexSet::new(order);
    ends.insert(v1);
    ends.insert(v2);
    // w′ must be new to v′, w″ new to v″.
    let cand1 = n2.difference(&n1).difference(&ends);
    let cand2 = n1.difference(&n2).difference(&ends);
    let narrow = crossing(
        b,
        &least_touched(&cand1, keep, touches),
        &least_touched(&cand2, keep, touches),
    );
    let found = pick(narrow, touches, rng).or_else(|| {
        let all1: Vec<usize> = cand1.iter().collect();
        let all2: Vec<usize> = cand2.iter().collect();
        pick(crossing(b, &all1, &all2), touches, rng)
    });
    match found {
        Some((w1, w2)) => Some(RepairOp::Switch {
            v1,
            v2,
            deleted: norm(w1, w2),
            added: [norm(v1, w1), norm(v2, w2)],
        }),
        None if !b.has_edge(v1, v2) => Some(RepairOp::Join { v1, v2 }),
        None => None,
    }
}

fn single_step(b: &GraphBuilder, v: usize, keep: usize, rng: &mut Prng, touches: &[u32]) -> Option<RepairOp> {
    let order = touches.len();
    let mut cands = neighborhood(b, v, order);
    cands.insert(v);
    let cands = VertexSet::full(order).difference(&cands);
    let found = pick(inner(b, &least_touched(&cands, keep, touches)), touches, rng).or_else(|| {
        let all: Vec<usize> = cands.iter().collect();
        pick(inner(b, &all), touches, rng)
    });
    let (w1, w2) = found?;
    Some(RepairOp::Switch {
        v1: v,
        v2: v,
        deleted: norm(w1, w2),
        added: [norm(v, w1), norm(v, w2)],
    })
}

fn apply(b: &mut GraphBuilder, op: &RepairOp, log: &mut RepairLog) {
    match *op {
        RepairOp::Switch { v1, v2, deleted, added } => {
            let removed = b.remove_edge(deleted.0, deleted.1);
            debug_assert!(removed);
            for (x, y) in added {
                let fresh = b.add_edge(x, y);
                debug_assert!(fresh);
            }
            log.touch(v1, 1);
            log.touch(v2, 1);
            log.touch(deleted.0, 2);
            log.touch(deleted.1, 2);
        }
        RepairOp::Join { v1, v2 } => {
            b.add_edge(v1, v2);
            log.touch(v1, 1);
            log.touch(v2, 1);
        }
        RepairOp::Trim { .. } => unreachable!("trims are not produced by switching"),
    }
    log.ops.push(op.clone());
}
