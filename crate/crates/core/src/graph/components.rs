use super::{CycleWitness, Graph, VertexSet};
use serde::Serialize;
use std::collections::VecDeque;

/// A connected component with its bipartiteness verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    pub bipartite: bool,
    /// Colour classes when bipartite.
    pub sides: Option<(VertexSet, VertexSet)>,
    /// Verified odd cycle when not bipartite.
    pub odd_cycle: Option<CycleWitness>,
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Component", 3)?;
        st.serialize_field("vertices", &self.vertices.iter().collect::<Vec<_>>())?;
        st.serialize_field("bipartite", &self.bipartite)?;
        st.serialize_field("odd_cycle", &self.odd_cycle)?;
        st.end()
    }
}

/// Splits `g` into connected components (ordered by least vertex) and
/// 2-colours each by BFS. A non-bipartite component carries an odd cycle
/// closed through the first monochromatic edge found.
pub fn components_bipartiteness(g: &Graph) -> Vec<Component> {
    let n = g.vertex_count();
    let mut comp_of = vec![usize::MAX; n];
    let mut side = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut out = Vec::new();
    for root in 0..n {
        if comp_of[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = VertexSet::new(n);
        let mut queue = VecDeque::from([root]);
        comp_of[root] = id;
        while let Some(v) = queue.pop_front() {
            members.insert(v);
            for u in g.neighbors(v) {
                if comp_of[u] == usize::MAX {
                    comp_of[u] = id;
                    side[u] = 1 - side[v];
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        let conflict = members
            .iter()
            .flat_map(|v| g.neighbors(v).filter(move |&u| u > v).map(move |u| (v, u)))
            .find(|&(v, u)| side[v] == side[u]);
        let component = match conflict {
            None => {
                let mut a = VertexSet::new(n);
                let mut b = VertexSet::new(n);
                for v in members.iter() {
                    if side[v] == 0 {
                        a.insert(v);
                    } else {
                        b.insert(v);
                    }
                }
                Component {
                    vertices: members,
                    bipartite: true,
                    sides: Some((a, b)),
                    odd_cycle: None,
                }
            }
            Some((v, u)) => {
                let cycle = close_odd_cycle(&parent, &depth, v, u);
                let witness =
                    CycleWitness::new_verified(g, cycle).expect("BFS odd cycle must verify");
                debug_assert!(witness.len() % 2 == 1);
                Component {
                    vertices: members,
                    bipartite: false,
                    sides: None,
                    odd_cycle: Some(witness),
                }
            }
        };
        out.push(component);
    }
    out
}

/// Tree paths from `v` and `u` up to their lowest common ancestor, joined
/// by the edge `vu`.
fn close_odd_cycle(parent: &[usize], depth: &[usize], v: usize, u: usize) -> Vec<usize> {
    let (mut a, mut b) = (v, u);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}
