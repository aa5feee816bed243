//! Induced-subgraph statistics of random regular graphs: pattern automorphism
//! and density computation, exact counting in sampled hosts, and the closed
//! forms for expected counts in the sparse regime.

mod count;
mod mc;

pub use count::{count_induced, ENUMERATION_BUDGET};
pub use mc::{
    expected_induced_count, induced_probability_leading, mc_induced_count, LeadingProbability,
};

use graph_core::{grid_graph, sparsified_grid_graph, Graph, GraphError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub type ExactRational = BigRational;

#[derive(Debug, Error)]
pub enum SubgraphError {
    #[error("pattern has {v} vertices; this operation allows at most {max}")]
    PatternTooLarge { v: usize, max: usize },
    #[error("pattern needs at least one vertex")]
    EmptyPattern,
    #[error("C({n}, {v}) vertex subsets exceed the enumeration budget of {budget}")]
    EnumerationBudget { n: usize, v: usize, budget: u64 },
    #[error("density enumeration allows at most {max} vertices, got {v}")]
    DensityTooLarge { v: usize, max: usize },
    #[error("degree {d} must be below the vertex count {n}")]
    DegreeDomain { n: usize, d: usize },
    #[error("monte carlo supports n <= {max_n}, d <= {max_d}, pattern.v <= {max_v}")]
    McDomain { max_n: usize, max_d: usize, max_v: usize },
    #[error("need at least one sample")]
    ZeroSamples,
    #[error("unknown pattern name {name:?}")]
    UnknownPattern { name: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Run `f` on every permutation of 0..v.
fn for_each_permutation(v: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(v: usize, perm: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if perm.len() == v {
            f(perm);
            return;
        }
        for i in 0..v {
            if !used[i] {
                used[i] = true;
                perm.push(i);
                rec(v, perm, used, f);
                perm.pop();
                used[i] = false;
            }
        }
    }
    rec(v, &mut Vec::with_capacity(v), &mut vec![false; v], f);
}

/// Number of adjacency-preserving vertex permutations, by brute force.
pub fn automorphism_count(pattern: &Graph) -> Result<u64, SubgraphError> {
    let v = pattern.n();
    if v > 8 {
        return Err(SubgraphError::PatternTooLarge { v, max: 8 });
    }
    let edges = pattern.edges();
    let mut count = 0u64;
    for_each_permutation(v, &mut |perm| {
        if edges.iter().all(|&(a, b)| pattern.has_edge(perm[a], perm[b])) {
            count += 1;
        }
    });
    Ok(count)
}

/// Graph density: the maximum of |E(S)| / |S| over nonempty vertex subsets S,
/// taking all edges induced by S (dropping edges never raises the ratio).
pub fn graph_density(pattern: &Graph) -> Result<ExactRational, SubgraphError> {
    let v = pattern.n();
    if v > 12 {
        return Err(SubgraphError::DensityTooLarge { v, max: 12 });
    }
    let rows: Vec<u64> = (0..v).map(|i| pattern.neighbor_mask(i)).collect();
    let mut best = ExactRational::zero();
    for mask in 1u64..(1 << v) {
        let size = mask.count_ones() as u64;
        let edges: u32 = (0..v)
            .filter(|&i| (mask >> i) & 1 == 1)
            .map(|i| (rows[i] & mask).count_ones())
            .sum();
        let ratio = ExactRational::new(BigInt::from(edges / 2), BigInt::from(size));
        if ratio > best {
            best = ratio;
        }
    }
    Ok(best)
}

/// A small pattern graph H with its counting constants precomputed.
#[derive(Debug, Clone)]
pub struct PatternGraph {
    graph: Graph,
    v: usize,
    e: usize,
    aut: u64,
    density: ExactRational,
}

impl PatternGraph {
    /// At most 8 vertices, the automorphism brute-force limit.
    pub fn new(graph: Graph) -> Result<PatternGraph, SubgraphError> {
        let v = graph.n();
        if v == 0 {
            return Err(SubgraphError::EmptyPattern);
        }
        let aut = automorphism_count(&graph)?;
        let density = graph_density(&graph)?;
        let e = graph.edge_count();
        // |Aut(H)| divides |S_v| by Lagrange.
        debug_assert_eq!(factorial(v) % aut, 0);
        Ok(PatternGraph {
            graph,
            v,
            e,
            aut,
            density,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn aut(&self) -> u64 {
        self.aut
    }

    pub fn density(&self) -> &ExactRational {
        &self.density
    }
}

pub(crate) fn factorial(v: usize) -> u64 {
    (1..=v as u64).product()
}

pub fn cycle_pattern(v: usize) -> Result<PatternGraph, SubgraphError> {
    if v < 3 {
        return Err(SubgraphError::UnknownPattern {
            name: format!("c{v}"),
        });
    }
    let edges: Vec<(usize, usize)> = (0..v).map(|i| (i, (i + 1) % v)).collect();
    PatternGraph::new(Graph::from_edges(v, &edges)?)
}

pub fn path_pattern(v: usize) -> Result<PatternGraph, SubgraphError> {
    let edges: Vec<(usize, usize)> = (1..v).map(|i| (i - 1, i)).collect();
    PatternGraph::new(Graph::from_edges(v, &edges)?)
}

pub fn complete_pattern(v: usize) -> Result<PatternGraph, SubgraphError> {
    PatternGraph::new(Graph::complete(v))
}

pub fn empty_pattern(v: usize) -> Result<PatternGraph, SubgraphError> {
    PatternGraph::new(Graph::empty(v))
}

/// Parse a pattern name: `c<v>` cycle, `k<v>` clique, `p<v>` path,
/// `empty<v>` edgeless, `triangle`, `edge`, `nonedge`, `grid:<L>`,
/// `sparsegrid:<L>`.
pub fn pattern_by_name(name: &str) -> Result<PatternGraph, SubgraphError> {
    let unknown = || SubgraphError::UnknownPattern {
        name: name.to_string(),
    };
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "triangle" => return cycle_pattern(3),
        "edge" => return complete_pattern(2),
        "nonedge" => return empty_pattern(2),
        _ => {}
    }
    if let Some(l) = lower.strip_prefix("grid:") {
        let l: usize = l.parse().map_err(|_| unknown())?;
        return PatternGraph::new(grid_graph(l));
    }
    if let Some(l) = lower.strip_prefix("sparsegrid:") {
        let l: usize = l.parse().map_err(|_| unknown())?;
        return PatternGraph::new(sparsified_grid_graph(l));
    }
    for (prefix, build) in [
        ("c", cycle_pattern as fn(usize) -> Result<PatternGraph, SubgraphError>),
        ("k", complete_pattern),
        ("p", path_pattern),
        ("empty", empty_pattern),
    ] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            if let Ok(v) = rest.parse::<usize>() {
                return build(v);
            }
        }
    }
    Err(unknown())
}
