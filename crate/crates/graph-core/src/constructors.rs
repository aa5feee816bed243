//! Structured graph constructors: square grids, their path-subdivided
//! ("sparsified") variants, and the Y-measurement reduction that recovers the
//! grid from the sparsified graph.

use crate::{measure_pauli, Basis, Graph};

/// L×L grid; vertex (r, c) gets label r·L + c. With v = L² vertices the edge
/// count is 2L(L−1) = 2v − 2√v.
pub fn grid_graph(l: usize) -> Graph {
    assert!(l >= 1, "grid needs L >= 1");
    let mut g = Graph::empty(l * l);
    for r in 0..l {
        for c in 0..l {
            let v = r * l + c;
            if c + 1 < l {
                g.add_edge(v, v + 1);
            }
            if r + 1 < l {
                g.add_edge(v, v + l);
            }
        }
    }
    g
}

/// One subdivided grid edge: its grid endpoints and the L−1 inserted path
/// vertices in order from `endpoints.0` to `endpoints.1`.
#[derive(Debug, Clone)]
pub struct Line {
    pub endpoints: (usize, usize),
    pub inserted: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SparsifiedGrid {
    pub graph: Graph,
    pub lines: Vec<Line>,
}

/// Grid with every edge replaced by a path of L edges (L−1 inserted vertices),
/// so v = L² + 2L(L−1)² and e = 2L²(L−1). Grid vertices keep their labels;
/// inserted vertices are appended line by line in grid-edge order.
pub fn sparsified_grid_graph(l: usize) -> Graph {
    sparsified_grid_with_lines(l).graph
}

pub fn sparsified_grid_with_lines(l: usize) -> SparsifiedGrid {
    assert!(l >= 2, "sparsified grid needs L >= 2");
    let grid = grid_graph(l);
    let grid_edges = grid.edges();
    let n = l * l + grid_edges.len() * (l - 1);
    let mut g = Graph::empty(n);
    let mut lines = Vec::with_capacity(grid_edges.len());
    let mut next = l * l;
    for (u, v) in grid_edges {
        let inserted: Vec<usize> = (0..l - 1).map(|k| next + k).collect();
        next += l - 1;
        let mut prev = u;
        for &w in &inserted {
            g.add_edge(prev, w);
            prev = w;
        }
        g.add_edge(prev, v);
        lines.push(Line {
            endpoints: (u, v),
            inserted,
        });
    }
    SparsifiedGrid { graph: g, lines }
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Graph left after measuring out every inserted vertex.
    pub final_graph: Graph,
    /// Where each original grid vertex r·L+c ended up in the final labelling.
    pub grid_vertex_map: Vec<usize>,
    /// Original labels of the measured vertices, in measurement order.
    pub measurement_sequence: Vec<usize>,
    /// Number of Y measurements performed.
    pub measurements: usize,
    /// Whether the final graph, relabelled through grid_vertex_map, is
    /// exactly the L×L grid. The map is an explicit isomorphism witness.
    pub matches_grid: bool,
}

/// Measure every inserted path vertex of the sparsified grid in the Y basis
/// and check that the L×L grid comes back.
pub fn reduce_sparsified_grid(l: usize) -> ReductionReport {
    let sg = sparsified_grid_with_lines(l);
    let n0 = sg.graph.n();
    // current[w] tracks the label of original vertex w as deletions shift labels.
    let mut current: Vec<Option<usize>> = (0..n0).map(Some).collect();
    let mut g = sg.graph;
    let mut measurements = 0;
    let mut measurement_sequence = Vec::new();
    for line in &sg.lines {
        for &w in &line.inserted {
            let v = current[w].expect("inserted vertex measured twice");
            let (next, map) = measure_pauli(&g, v, Basis::Y);
            g = next;
            for slot in current.iter_mut() {
                *slot = slot.and_then(|lbl| map[lbl]);
            }
            measurement_sequence.push(w);
            measurements += 1;
        }
    }
    let grid_vertex_map: Vec<usize> = (0..l * l)
        .map(|w| current[w].expect("grid vertex must survive"))
        .collect();
    let grid = grid_graph(l);
    let matches_grid = g.n() == l * l
        && g.edge_count() == grid.edge_count()
        && grid
            .edges()
            .iter()
            .all(|&(u, v)| g.has_edge(grid_vertex_map[u], grid_vertex_map[v]));
    ReductionReport {
        final_graph: g,
        grid_vertex_map,
        measurement_sequence,
        measurements,
        matches_grid,
    }
}
