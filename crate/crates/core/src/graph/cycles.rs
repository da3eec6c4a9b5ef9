//! Exact search for cycles of a prescribed length.
//!
//! Cycles are enumerated by their minimum vertex (the anchor). For a fixed
//! anchor `a` the search only walks vertices `> a` and prunes any vertex
//! whose BFS distance back to `a` exceeds the number of edges still to be
//! placed. Each cycle is seen in one orientation only: the last vertex must
//! exceed the second.

use super::{verify_cycle, words_for, BitIter, CycleWitness, Graph};
use crate::error::{invalid, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of a single-length cycle search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleSearch {
    Found(CycleWitness),
    /// The search finished exhaustively without finding a cycle.
    Absent,
    /// The expansion budget ran out first.
    Unknown,
}

impl CycleSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, CycleSearch::Found(_))
    }

    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            CycleSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Searches `g` for a cycle with exactly `len` vertices, expanding at most
/// `budget` search nodes.
pub fn find_cycle_of_length(g: &Graph, len: usize, budget: u64) -> Result<CycleSearch> {
    if len < 3 {
        return invalid(format!("cycle length {len} is below 3"));
    }
    let mut counter = 0u64;
    let out = search(g, len, budget, &mut counter);
    if let CycleSearch::Found(w) = &out {
        verify_cycle(g, w.vertices()).expect("cycle search emitted an invalid witness");
    }
    Ok(out)
}

pub(crate) fn search(g: &Graph, len: usize, budget: u64, counter: &mut u64) -> CycleSearch {
    let n = g.vertex_count();
    if len > n {
        return CycleSearch::Absent;
    }
    let words = words_for(n);
    let mut s = Searcher {
        g,
        len,
        budget,
        counter,
        words,
        anchor: 0,
        path: Vec::with_capacity(len),
        on_path: vec![0; words],
        within: vec![0; (len + 1) * words],
    };
    for a in 0..n {
        if n - a < len {
            break;
        }
        if !s.prepare_anchor(a) {
            continue;
        }
        s.path.clear();
        s.path.push(a);
        s.on_path.iter_mut().for_each(|w| *w = 0);
        s.on_path[a / 64] |= 1 << (a % 64);
        match s.extend(a, 0) {
            Step::Found => return CycleSearch::Found(CycleWitness { vertices: s.path.clone() }),
            Step::OutOfBudget => return CycleSearch::Unknown,
            Step::Exhausted => {}
        }
    }
    CycleSearch::Absent
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Searcher<'g, 'c> {
    g: &'g Graph,
    len: usize,
    budget: u64,
    counter: &'c mut u64,
    words: usize,
    anchor: usize,
    path: Vec<usize>,
    on_path: Vec<u64>,
    /// `within[r]` holds the vertices `> anchor` at distance `<= r` from it.
    within: Vec<u64>,
}

impl Searcher<'_, '_> {
    /// BFS from `a` restricted to vertices `>= a`. Returns false when the
    /// anchor cannot lie on a cycle of the requested length.
    fn prepare_anchor(&mut self, a: usize) -> bool {
        let (g, words) = (self.g, self.words);
        self.anchor = a;
        let mut allowed = vec![0u64; words];
        for v in a + 1..g.vertex_count() {
            allowed[v / 64] |= 1 << (v % 64);
        }
        self.within.iter_mut().for_each(|w| *w = 0);
        let mut frontier = vec![0u64; words];
        frontier[a / 64] |= 1 << (a % 64);
        let mut seen = frontier.clone();
        for r in 0..=self.len {
            if r > 0 {
                let mut next = vec![0u64; words];
                for v in BitIter::new(&frontier) {
                    for (i, (nw, rw)) in next.iter_mut().zip(g.row(v)).enumerate() {
                        *nw |= rw & allowed[i] & !seen[i];
                    }
                }
                for (s, nw) in seen.iter_mut().zip(&next) {
                    *s |= nw;
                }
                frontier = next;
            }
            let dst = &mut self.within[r * words..(r + 1) * words];
            for (d, (s, al)) in dst.iter_mut().zip(seen.iter().zip(&allowed)) {
                *d = s & al;
            }
        }
        // A cycle through `a` needs two neighbours above it.
        self.within[words..2 * words].iter().map(|w| w.count_ones()).sum::<u32>() >= 2
    }

    fn extend(&mut self, x: usize, depth: usize) -> Step {
        if depth + 1 == self.len {
            return if self.g.has_edge(x, self.anchor) && x > self.path[1] {
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        let remaining = self.len - depth - 1;
        let w = self.words;
        let cands: Vec<u64> = (0..w)
            .map(|i| self.g.row(x)[i] & !self.on_path[i] & self.within[remaining * w + i])
            .collect();
        for y in BitIter::new(&cands) {
            *self.counter += 1;
            if *self.counter > self.budget {
                return Step::OutOfBudget;
            }
            self.path.push(y);
            self.on_path[y / 64] |= 1 << (y % 64);
            match self.extend(y, depth + 1) {
                Step::Exhausted => {}
                other => return other,
            }
            self.on_path[y / 64] &= !(1 << (y % 64));
            self.path.pop();
        }
        Step::Exhausted
    }
}

/// Per-length status in a [`CycleSpectrum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleStatus {
    Present(CycleWitness),
    Absent,
    Unknown,
}

/// Which cycle lengths a graph contains, each `Present` entry carrying a
/// verified witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleSpectrum {
    pub statuses: BTreeMap<usize, CycleStatus>,
}

impl CycleSpectrum {
    pub fn present(&self) -> Vec<usize> {
        self.lengths_where(|s| matches!(s, CycleStatus::Present(_)))
    }

    pub fn absent(&self) -> Vec<usize> {
        self.lengths_where(|s| matches!(s, CycleStatus::Absent))
    }

    pub fn unknown(&self) -> Vec<usize> {
        self.lengths_where(|s| matches!(s, CycleStatus::Unknown))
    }

    fn lengths_where(&self, f: impl Fn(&CycleStatus) -> bool) -> Vec<usize> {
        self.statuses.iter().filter(|(_, s)| f(s)).map(|(&l, _)| l).collect()
    }
}

/// Runs [`find_cycle_of_length`] for every length in `3..=max_len`, each with
/// its own `budget`. Lengths are searched in parallel.
pub fn cycle_spectrum(g: &Graph, max_len: usize, budget: u64) -> Result<CycleSpectrum> {
    if max_len < 3 {
        return invalid(format!("maximum cycle length {max_len} is below 3"));
    }
    let statuses = (3..=max_len)
        .into_par_iter()
        .map(|l| {
            let status = match find_cycle_of_length(g, l, budget)? {
                CycleSearch::Found(w) => CycleStatus::Present(w),
                CycleSearch::Absent => CycleStatus::Absent,
                CycleSearch::Unknown => CycleStatus::Unknown,
            };
            Ok((l, status))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(CycleSpectrum { statuses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use rand::{Rng, SeedableRng};

    /// Naive oracle: does any simple cycle of length `len` exist? Plain DFS
    /// over all start vertices with no pruning.
    fn naive_has_cycle(g: &Graph, len: usize) -> bool {
        fn dfs(g: &Graph, path: &mut Vec<usize>, len: usize) -> bool {
            let x = *path.last().unwrap();
            if path.len() == len {
                return g.has_edge(x, path[0]);
            }
            for y in 0..g.vertex_count() {
                if g.has_edge(x, y) && !path.contains(&y) {
                    path.push(y);
                    if dfs(g, path, len) {
                        return true;
                    }
                    path.pop();
                }
            }
            false
        }
        (0..g.vertex_count()).any(|s| dfs(g, &mut vec![s], len))
    }

    #[test]
    fn petersen_examples() {
        let p = Graph::petersen();
        assert!(!naive_has_cycle(&p, 7));
        let five = find_cycle_of_length(&p, 5, u64::MAX).unwrap();
        assert_eq!(five.witness().unwrap().len(), 5);
        assert_eq!(find_cycle_of_length(&p, 7, u64::MAX).unwrap(), CycleSearch::Absent);
    }

    #[test]
    fn c6_is_its_own_cycle() {
        let c6 = Graph::cycle(6);
        let w = find_cycle_of_length(&c6, 6, u64::MAX).unwrap();
        let mut vs = w.witness().unwrap().vertices().to_vec();
        vs.sort();
        assert_eq!(vs, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn short_length_is_rejected() {
        assert!(find_cycle_of_length(&Graph::complete(4), 2, 10).is_err());
        assert!(cycle_spectrum(&Graph::complete(4), 2, 10).is_err());
    }

    #[test]
    fn tiny_budget_reports_unknown() {
        let p = Graph::petersen();
        assert_eq!(find_cycle_of_length(&p, 7, 3).unwrap(), CycleSearch::Unknown);
    }

    #[test]
    fn spectrum_examples() {
        let k5 = cycle_spectrum(&Graph::complete(5), 5, u64::MAX).unwrap();
        assert_eq!(k5.present(), vec![3, 4, 5]);
        let c6 = cycle_spectrum(&Graph::cycle(6), 6, u64::MAX).unwrap();
        assert_eq!(c6.present(), vec![6]);
        assert_eq!(c6.absent(), vec![3, 4, 5]);
        let p = cycle_spectrum(&Graph::petersen(), 10, u64::MAX).unwrap();
        let oracle: Vec<usize> = (3..=10).filter(|&l| naive_has_cycle(&Graph::petersen(), l)).collect();
        assert_eq!(oracle, vec![5, 6, 8, 9]);
        assert_eq!(p.present(), oracle);
        assert!(p.unknown().is_empty());
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(3..=9);
            let p: f64 = rng.gen_range(0.15..0.85);
            let mut b = GraphBuilder::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        b.add_edge(u, v);
                    }
                }
            }
            let g = b.build();
            for len in 3..=n {
                let got = find_cycle_of_length(&g, len, u64::MAX).unwrap();
                assert_ne!(got, CycleSearch::Unknown);
                assert_eq!(got.is_found(), naive_has_cycle(&g, len), "len {len} on {:?}", g.edges().collect::<Vec<_>>());
                if let CycleSearch::Found(w) = got {
                    assert_eq!(w.len(), len);
                    w.verify(&g).unwrap();
                }
            }
        }
    }
}
