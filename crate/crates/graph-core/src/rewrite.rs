//! Graph rewrite rules for single-qubit Pauli measurements on graph states.
//! Up to local corrections on the remaining qubits: a Z measurement deletes
//! the vertex; a Y measurement locally complements at the vertex, then
//! deletes it.

use crate::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Y,
    Z,
}

/// Old label → new label after a deletion; the measured vertex maps to None.
pub type LabelMap = Vec<Option<usize>>;

/// Complement the edge set inside the neighborhood of v; everything else is
/// untouched. Applying it twice at the same vertex is the identity.
pub fn local_complement(g: &Graph, v: usize) -> Graph {
    assert!(v < g.n(), "vertex out of range");
    let mut out = g.clone();
    let nb = g.neighbors(v);
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            out.toggle_edge(a, b);
        }
    }
    out
}

/// Measure qubit v in the given Pauli basis and remove it from the graph.
/// Labels above v shift down by one; the returned map sends each old label
/// to its new label (None for v itself).
pub fn measure_pauli(g: &Graph, v: usize, basis: Basis) -> (Graph, LabelMap) {
    assert!(v < g.n(), "vertex out of range");
    let pre = match basis {
        Basis::Y => local_complement(g, v),
        Basis::Z => g.clone(),
    };
    let n = g.n();
    let map: LabelMap = (0..n)
        .map(|u| match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(u),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(u - 1),
        })
        .collect();
    let mut out = Graph::empty(n - 1);
    for (a, b) in pre.edges() {
        if a == v || b == v {
            continue;
        }
        out.add_edge(map[a].unwrap(), map[b].unwrap());
    }
    (out, map)
}
