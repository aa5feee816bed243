//! Graphs and multigraphs with the samplers and rewrite rules used by the
//! second-moment and entanglement analyses: pairing / matching-model /
//! uniform-regular / Erdős–Rényi ensembles, grid constructors, local
//! complementation, and single-qubit Pauli measurement rules on graph states.

mod constructors;
mod rewrite;
mod sample;

pub use constructors::{
    grid_graph, reduce_sparsified_grid, sparsified_grid_graph, sparsified_grid_with_lines, Line,
    ReductionReport, SparsifiedGrid,
};
pub use rewrite::{local_complement, measure_pauli, Basis, LabelMap};
pub use sample::{
    sample_erdos_renyi, sample_erdos_renyi_with, sample_matching_model,
    sample_matching_model_with, sample_pairing, sample_pairing_with, sample_perfect_matching_with,
    sample_uniform_regular, sample_uniform_regular_with, EnsembleSpec, Model,
    DEFAULT_MAX_ATTEMPTS,
};

use gf2_linalg::BitMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("pairing model needs n*d even, got n={n}, d={d}")]
    OddHalfEdges { n: usize, d: usize },
    #[error("matching model needs an even vertex count, got n={n}")]
    OddVertexCount { n: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("uniform-regular rejection sampling supports d <= 4, got d={d}")]
    DegreeTooLarge { d: usize },
    #[error("regular graph needs d < n, got n={n}, d={d}")]
    DegreeExceedsOrder { n: usize, d: usize },
    #[error("no simple graph found within {attempts} attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("edge probability must lie in [0,1], got {0}")]
    InvalidProbability(f64),
    #[error("edge ({u},{v}) out of range for n={n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop ({v},{v}) not allowed in a simple graph")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: usize, v: usize },
}

/// Simple undirected graph backed by a symmetric zero-diagonal bit matrix.
#[derive(Clone, PartialEq, Eq)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: BitMatrix,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: BitMatrix::zero(n),
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.n()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj.set_sym(u, v, true);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj.set_sym(u, v, false);
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        self.adj.flip_sym(u, v);
    }

    /// Edges as (u, v) with u < v, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if self.has_edge(u, v) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n()).filter(|&u| self.has_edge(v, u)).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.has_edge(v, u)).collect()
    }

    /// Neighborhood of v as a bitmask; requires n ≤ 64.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj.row_mask(v)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if self.has_edge(v, u) && !seen[u] {
                    seen[u] = true;
                    visited += 1;
                    stack.push(u);
                }
            }
        }
        visited == n
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Graph, GraphError> {
        let edges: Vec<(usize, usize)> = r.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::from_edges(r.n, &edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> GraphRepr {
        GraphRepr {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// Undirected multigraph: unordered edges with multiplicity, self-loops allowed.
#[derive(Clone, PartialEq, Eq)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "MultigraphRepr", into = "MultigraphRepr")]
pub struct Multigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), usize>,
}

impl Multigraph {
    pub fn new(n: usize) -> Multigraph {
        Multigraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge endpoint out of range");
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += 1;
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.get(&key).copied().unwrap_or(0)
    }

    /// Distinct edges with their multiplicities, keys (u, v) with u ≤ v.
    pub fn edge_multiplicities(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Total edge count, multiplicities included.
    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Half-edge degree: a self-loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        let mut deg = 0;
        for (&(a, b), &m) in &self.edges {
            if a == v {
                deg += m;
            }
            if b == v {
                deg += m;
            }
        }
        deg
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.keys().any(|&(a, b)| a == b)
    }
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n, self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct MultigraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<MultigraphRepr> for Multigraph {
    type Error = GraphError;
    fn try_from(r: MultigraphRepr) -> Result<Multigraph, GraphError> {
        let mut g = Multigraph::new(r.n);
        for &[u, v] in &r.edges {
            if u >= r.n || v >= r.n {
                return Err(GraphError::EdgeOutOfRange { u, v, n: r.n });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

impl From<Multigraph> for MultigraphRepr {
    fn from(g: Multigraph) -> MultigraphRepr {
        let mut edges = Vec::with_capacity(g.edge_count());
        for ((u, v), m) in g.edge_multiplicities() {
            for _ in 0..m {
                edges.push([u, v]);
            }
        }
        MultigraphRepr { n: g.n, edges }
    }
}

/// Reduce multiplicities mod 2 and drop self-loops. On graph states a doubled
/// CZ cancels, so this is the state-preserving simplification.
pub fn simplify(g: &Multigraph) -> Graph {
    let mut out = Graph::empty(g.n());
    for ((u, v), m) in g.edge_multiplicities() {
        if u != v && m % 2 == 1 {
            out.add_edge(u, v);
        }
    }
    out
}

/// True iff the multigraph has no self-loops and no repeated edges.
pub fn is_simple(g: &Multigraph) -> bool {
    g.edge_multiplicities().all(|((u, v), m)| u != v && m == 1)
}
