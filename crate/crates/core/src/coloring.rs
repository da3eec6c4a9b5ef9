//! Red/blue edge colourings and monochromatic-cycle checks.

use crate::error::{invalid, Error, Result};
use crate::graph::{
    components_bipartiteness, find_cycle_of_length, CycleSearch, CycleWitness, Graph, GraphBuilder, VertexSet,
};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// A total red/blue colouring of a host graph's edges, stored as the two
/// colour classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    host: Graph,
    red: Graph,
    blue: Graph,
}

impl EdgeColoring {
    /// Colours every edge of `host` by `f(u, v)` with `u < v`.
    pub fn from_fn(host: &Graph, mut f: impl FnMut(usize, usize) -> Color) -> Self {
        let mut red = GraphBuilder::new(host.vertex_count());
        let mut blue = GraphBuilder::new(host.vertex_count());
        for (u, v) in host.edges() {
            match f(u, v) {
                Color::Red => red.add_edge(u, v),
                Color::Blue => blue.add_edge(u, v),
            };
        }
        Self::from_classes(host.clone(), red.build(), blue.build())
    }

    /// Host edges in `red` are red, the rest blue. Fails if `red` has an
    /// edge the host lacks.
    pub fn from_red(host: &Graph, red: &Graph) -> Result<Self> {
        if red.vertex_count() != host.vertex_count() {
            return invalid("red class and host differ in vertex count");
        }
        if let Some((u, v)) = red.edges().find(|&(u, v)| !host.has_edge(u, v)) {
            return invalid(format!("red edge ({u}, {v}) is not a host edge"));
        }
        Ok(Self::from_fn(host, |u, v| if red.has_edge(u, v) { Color::Red } else { Color::Blue }))
    }

    fn from_classes(host: Graph, red: Graph, blue: Graph) -> Self {
        assert_eq!(
            red.edge_count() + blue.edge_count(),
            host.edge_count(),
            "colour classes must partition the host edges"
        );
        EdgeColoring { host, red, blue }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn red(&self) -> &Graph {
        &self.red
    }

    pub fn blue(&self) -> &Graph {
        &self.blue
    }

    pub fn class(&self, c: Color) -> &Graph {
        match c {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        if self.red.has_edge(u, v) {
            Some(Color::Red)
        } else if self.blue.has_edge(u, v) {
            Some(Color::Blue)
        } else {
            None
        }
    }

    /// Edges in ascending order with their colours.
    pub fn colored_edges(&self) -> impl Iterator<Item = (usize, usize, Color)> + '_ {
        self.host
            .edges()
            .map(|(u, v)| (u, v, self.color(u, v).expect("host edge is coloured")))
    }

    /// `colors 2` header, then one `u v R|B` line per edge in ascending
    /// order.
    pub fn to_text(&self) -> String {
        let mut s = String::from("colors 2\n");
        for (u, v, c) in self.colored_edges() {
            writeln!(s, "{u} {v} {}", c.letter()).unwrap();
        }
        s
    }

    /// Parses [`EdgeColoring::to_text`] output. Every host edge must be
    /// coloured exactly once and nothing else may appear.
    pub fn from_text(host: &Graph, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Format { what: "coloring", msg };
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("colors 2") => {}
            other => return Err(bad(format!("expected header `colors 2`, found {other:?}"))),
        }
        let n = host.vertex_count();
        let mut red = GraphBuilder::new(n);
        let mut blue = GraphBuilder::new(n);
        for (i, line) in lines.enumerate() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [a, b, c] = parts[..] else {
                return Err(bad(format!("line {}: expected `u v R|B`", i + 2)));
            };
            let parse = |t: &str| t.parse::<usize>().map_err(|e| bad(format!("line {}: {e}", i + 2)));
            let (u, v) = (parse(a)?, parse(b)?);
            if u >= n || v >= n || u == v || !host.has_edge(u, v) {
                return Err(bad(format!("line {}: ({u}, {v}) is not a host edge", i + 2)));
            }
            if red.has_edge(u, v) || blue.has_edge(u, v) {
                return Err(bad(format!("line {}: edge ({u}, {v}) coloured twice", i + 2)));
            }
            match c {
                "R" => red.add_edge(u, v),
                "B" => blue.add_edge(u, v),
                _ => return Err(bad(format!("line {}: colour must be R or B, found {c}", i + 2))),
            };
        }
        let (red, blue) = (red.build(), blue.build());
        if red.edge_count() + blue.edge_count() != host.edge_count() {
            return Err(bad(format!(
                "{} of {} host edges coloured",
                red.edge_count() + blue.edge_count(),
                host.edge_count()
            )));
        }
        Ok(Self::from_classes(host.clone(), red, blue))
    }

    fn check_host(&self, g: &Graph) -> Result<()> {
        if *g != self.host {
            return invalid("colouring belongs to a different graph");
        }
        Ok(())
    }
}

/// Forbidden blue cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlueForbidden {
    Length(usize),
    AllOdd,
}

/// No red `C_n` and no blue cycle of the forbidden length(s).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidanceSpec {
    pub red_cycle: usize,
    pub blue: BlueForbidden,
}

impl AvoidanceSpec {
    pub fn new(red_cycle: usize, blue: BlueForbidden) -> Result<Self> {
        if red_cycle < 3 {
            return invalid(format!("red cycle length {red_cycle} is below 3"));
        }
        if let BlueForbidden::Length(k) = blue {
            if k < 3 || k % 2 == 0 {
                return invalid(format!("blue cycle length {k} must be odd and at least 3"));
            }
        }
        Ok(AvoidanceSpec { red_cycle, blue })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub color: Color,
    pub cycle: CycleWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidanceVerdict {
    pub clean: bool,
    pub violation: Option<Violation>,
}

/// Searches the `color` class of `coloring` for a cycle of length `len`.
pub fn monochromatic_cycle(
    g: &Graph,
    coloring: &EdgeColoring,
    color: Color,
    len: usize,
    budget: u64,
) -> Result<CycleSearch> {
    coloring.check_host(g)?;
    find_cycle_of_length(coloring.class(color), len, budget)
}

/// [`verify_avoidance_with_budget`] with an unlimited budget.
pub fn verify_avoidance(g: &Graph, coloring: &EdgeColoring, spec: &AvoidanceSpec) -> Result<AvoidanceVerdict> {
    verify_avoidance_with_budget(g, coloring, spec, u64::MAX)
}

/// Checks for a red `C_n` by exact search and for forbidden blue cycles by
/// exact search (single length) or bipartiteness (all odd lengths). A search
/// that runs out of budget is an error, never a clean verdict. A red
/// violation is reported in preference to a blue one.
pub fn verify_avoidance_with_budget(
    g: &Graph,
    coloring: &EdgeColoring,
    spec: &AvoidanceSpec,
    budget: u64,
) -> Result<AvoidanceVerdict> {
    coloring.check_host(g)?;
    let unknown = |what: &str| Error::BudgetExhausted(format!("{what} cycle search exceeded {budget} nodes"));
    let (red, blue) = rayon::join(
        || find_cycle_of_length(coloring.red(), spec.red_cycle, budget),
        || -> Result<Option<CycleWitness>> {
            match spec.blue {
                BlueForbidden::AllOdd => Ok(components_bipartiteness(coloring.blue())
                    .into_iter()
                    .find_map(|c| c.odd_cycle)),
                BlueForbidden::Length(k) => match find_cycle_of_length(coloring.blue(), k, budget)? {
                    CycleSearch::Found(w) => Ok(Some(w)),
                    CycleSearch::Absent => Ok(None),
                    CycleSearch::Unknown => Err(unknown("blue")),
                },
            }
        },
    );
    let violation = match red? {
        CycleSearch::Found(cycle) => Some(Violation { color: Color::Red, cycle }),
        CycleSearch::Unknown => return Err(unknown("red")),
        CycleSearch::Absent => blue?.map(|cycle| Violation { color: Color::Blue, cycle }),
    };
    if let Some(v) = &violation {
        v.cycle.verify(coloring.class(v.color)).expect("violation witness must lie in its colour");
    }
    Ok(AvoidanceVerdict {
        clean: violation.is_none(),
        violation,
    })
}

/// Output of [`color_extremal_lower_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalColoring {
    pub coloring: EdgeColoring,
    /// The low-degree vertex the construction is built around.
    pub vertex: usize,
    /// The `n − 1` vertices on the far side of the blue bipartite graph.
    pub part: VertexSet,
}

/// On a graph with `2n − 1` vertices and a vertex `v` of degree at most `n`
/// (the least such id), colours blue every edge between a set `V′` of
/// `n − 1` vertices and its complement, red everything else. `V′` takes the
/// smallest-id neighbours of `v` first and is padded with the smallest-id
/// non-neighbours other than `v`, so `v` keeps at most one neighbour on its
/// own side and cannot close a red `C_n`. Returns `None` when every degree
/// exceeds `n`.
pub fn color_extremal_lower_bound(g: &Graph, n: usize) -> Result<Option<ExtremalColoring>> {
    if n < 2 || g.vertex_count() != 2 * n - 1 {
        return invalid(format!(
            "expected {} vertices for n = {n}, got {}",
            (2 * n).saturating_sub(1),
            g.vertex_count()
        ));
    }
    let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) <= n) else {
        return Ok(None);
    };
    let mut part = VertexSet::new(g.vertex_count());
    for u in g.neighbors(v).take(n - 1) {
        part.insert(u);
    }
    for u in (0..g.vertex_count()).filter(|&u| u != v && !g.has_edge(u, v)) {
        if part.len() == n - 1 {
            break;
        }
        part.insert(u);
    }
    debug_assert_eq!(part.len(), n - 1);
    let rest = g.all_vertices().difference(&part);
    assert!(g.degree_into(v, &rest) <= 1, "low-degree vertex keeps two neighbours on its side");
    let coloring = EdgeColoring::from_fn(g, |a, b| {
        if part.contains(a) != part.contains(b) {
            Color::Blue
        } else {
            Color::Red
        }
    });
    debug_assert!(components_bipartiteness(coloring.blue()).iter().all(|c| c.bipartite));
    Ok(Some(ExtremalColoring { coloring, vertex: v, part }))
}

/// `K_{2n−2}` split into `{0..n−2}` and `{n−1..2n−3}`: edges across are
/// blue, edges inside a half red.
pub fn color_bipartite_blocking(n: usize, k: usize) -> Result<(Graph, EdgeColoring)> {
    if n < 3 {
        return invalid(format!("n = {n} must be at least 3"));
    }
    if k < 3 || k > n || k % 2 == 0 {
        return invalid(format!("k = {k} must be odd with 3 <= k <= n = {n}"));
    }
    let g = Graph::complete(2 * n - 2);
    let half = n - 1;
    let c = EdgeColoring::from_fn(&g, |u, v| if (u < half) != (v < half) { Color::Blue } else { Color::Red });
    debug_assert!(components_bipartiteness(c.blue()).iter().all(|c| c.bipartite));
    Ok((g, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn naive_cycle(g: &Graph, len: usize) -> bool {
        fn dfs(g: &Graph, path: &mut Vec<usize>, len: usize) -> bool {
            let x = *path.last().unwrap();
            if path.len() == len {
                return g.has_edge(x, path[0]);
            }
            (0..g.vertex_count()).any(|y| {
                if g.has_edge(x, y) && !path.contains(&y) {
                    path.push(y);
                    let hit = dfs(g, path, len);
                    path.pop();
                    hit
                } else {
                    false
                }
            })
        }
        (0..g.vertex_count()).any(|s| dfs(g, &mut vec![s], len))
    }

    fn random_colored(rng: &mut impl Rng, n: usize) -> (Graph, EdgeColoring) {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.6) {
                    b.add_edge(u, v);
                }
            }
        }
        let g = b.build();
        let c = EdgeColoring::from_fn(&g, |_, _| if rng.gen_bool(0.5) { Color::Red } else { Color::Blue });
        (g, c)
    }

    #[test]
    fn blocking_examples() {
        let (g, c) = color_bipartite_blocking(5, 3).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(c.blue().edge_count(), 16);
        assert!(c.blue().edges().all(|(u, v)| (u < 4) != (v < 4)));
        let spec = AvoidanceSpec::new(5, BlueForbidden::Length(3)).unwrap();
        assert!(verify_avoidance(&g, &c, &spec).unwrap().clean);
        let (g3, c3) = color_bipartite_blocking(3, 3).unwrap();
        assert_eq!(g3, Graph::complete(4));
        assert_eq!(c3.blue().edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(color_bipartite_blocking(5, 4).is_err());
        assert!(color_bipartite_blocking(5, 7).is_err());
    }

    #[test]
    fn blocking_is_clean_up_to_eight() {
        for n in 3..=8 {
            for k in (3..=n).step_by(2) {
                let (g, c) = color_bipartite_blocking(n, k).unwrap();
                let spec = AvoidanceSpec::new(n, BlueForbidden::Length(k)).unwrap();
                assert!(verify_avoidance(&g, &c, &spec).unwrap().clean, "n={n} k={k}");
                for l in (3..=2 * n - 2).step_by(2) {
                    assert_eq!(monochromatic_cycle(&g, &c, Color::Blue, l, u64::MAX).unwrap(), CycleSearch::Absent);
                }
            }
        }
    }

    #[test]
    fn all_red_complete_graph_violates() {
        let g = Graph::complete(9);
        let c = EdgeColoring::from_fn(&g, |_, _| Color::Red);
        let v = verify_avoidance(&g, &c, &AvoidanceSpec::new(5, BlueForbidden::AllOdd).unwrap()).unwrap();
        assert!(!v.clean);
        let viol = v.violation.unwrap();
        assert_eq!(viol.color, Color::Red);
        assert_eq!(viol.cycle.len(), 5);
        let k6 = Graph::complete(6);
        let red = EdgeColoring::from_fn(&k6, |_, _| Color::Red);
        assert!(monochromatic_cycle(&k6, &red, Color::Red, 3, u64::MAX).unwrap().is_found());
    }

    #[test]
    fn extremal_on_nine_cycle() {
        let g = Graph::cycle(9);
        let ex = color_extremal_lower_bound(&g, 5).unwrap().unwrap();
        assert_eq!(ex.vertex, 0);
        assert_eq!(ex.part.iter().collect::<Vec<_>>(), vec![1, 2, 3, 8]);
        let comps = components_bipartiteness(ex.coloring.blue());
        assert!(comps.iter().all(|c| c.bipartite));
        for (u, v) in ex.coloring.blue().edges() {
            assert_ne!(ex.part.contains(u), ex.part.contains(v));
        }
        let spec = AvoidanceSpec::new(5, BlueForbidden::AllOdd).unwrap();
        assert!(verify_avoidance(&g, &ex.coloring, &spec).unwrap().clean);
    }

    #[test]
    fn extremal_needs_low_degree_vertex() {
        assert_eq!(color_extremal_lower_bound(&Graph::complete(5), 3).unwrap(), None);
        assert!(color_extremal_lower_bound(&Graph::complete(6), 3).is_err());
    }

    #[test]
    fn extremal_is_clean_on_sparse_graphs() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(4..=7);
            let order = 2 * n - 1;
            let mut b = GraphBuilder::new(order);
            for u in 0..order {
                for v in u + 1..order {
                    if rng.gen_bool(0.35) {
                        b.add_edge(u, v);
                    }
                }
            }
            let g = b.build();
            let ex = color_extremal_lower_bound(&g, n).unwrap().expect("sparse graph has a low vertex");
            let spec = AvoidanceSpec::new(n, BlueForbidden::AllOdd).unwrap();
            assert!(verify_avoidance(&g, &ex.coloring, &spec).unwrap().clean);
        }
    }

    #[test]
    fn monochromatic_search_matches_naive() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(21);
        for _ in 0..500 {
            let (g, c) = random_colored(&mut rng, 8);
            for color in [Color::Red, Color::Blue] {
                for len in 3..=8 {
                    let got = monochromatic_cycle(&g, &c, color, len, u64::MAX).unwrap();
                    assert_eq!(got.is_found(), naive_cycle(c.class(color), len));
                    if let CycleSearch::Found(w) = got {
                        assert!(w.edges().all(|(a, b)| c.color(a, b) == Some(color)));
                    }
                }
            }
        }
    }

    #[test]
    fn more_forbidden_lengths_never_clean_up() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(2);
        for _ in 0..100 {
            let (g, c) = random_colored(&mut rng, 8);
            for k in [3, 5, 7] {
                let single = verify_avoidance(&g, &c, &AvoidanceSpec::new(4, BlueForbidden::Length(k)).unwrap()).unwrap();
                let all = verify_avoidance(&g, &c, &AvoidanceSpec::new(4, BlueForbidden::AllOdd).unwrap()).unwrap();
                if !single.clean {
                    assert!(!all.clean);
                }
            }
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let (g, c) = color_bipartite_blocking(4, 3).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("colors 2\n0 1 R\n0 2 R\n0 3 B\n"));
        assert_eq!(EdgeColoring::from_text(&g, &text).unwrap(), c);
        assert!(EdgeColoring::from_text(&g, "colors 3\n").is_err());
        assert!(EdgeColoring::from_text(&g, "colors 2\n0 1 R\n").is_err());
        let dup = format!("{text}0 1 B\n");
        assert!(EdgeColoring::from_text(&g, &dup).is_err());
        let bad = text.replace("0 1 R", "0 1 G");
        assert!(EdgeColoring::from_text(&g, &bad).is_err());
        assert!(EdgeColoring::from_text(&Graph::cycle(6), &text).is_err());
    }

    #[test]
    fn classes_partition_edges() {
        let mut rng = rand_pcg::Pcg64::seed_from_u64(4);
        for _ in 0..50 {
            let (g, c) = random_colored(&mut rng, 10);
            assert_eq!(c.red().edge_count() + c.blue().edge_count(), g.edge_count());
            assert_eq!(EdgeColoring::from_red(&g, c.red()).unwrap(), c);
        }
    }
}
