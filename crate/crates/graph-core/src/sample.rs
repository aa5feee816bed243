//! Random-ensemble samplers. Every sampler is a pure function of its inputs
//! and seed; `_with` variants draw from a caller-supplied generator so callers
//! can derive independent per-sample streams.

use crate::{is_simple, simplify, Graph, GraphError, Multigraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Attempt budget for rejection sampling of simple regular graphs. The
/// simplicity probability is bounded below by 2^{-d²}, so with d ≤ 4 the
/// chance of exhausting this budget is astronomically small.
pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

/// Uniform perfect matching on {0, …, m−1} as m/2 unordered pairs.
///
/// Uniformity: shuffle the m items, then pair consecutive entries. Each
/// matching is produced by exactly (m/2)! · 2^{m/2} of the m! equally likely
/// permutations (order the pairs, then order within each pair), a count that
/// does not depend on the matching.
pub fn sample_perfect_matching_with<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    assert!(m % 2 == 0, "perfect matching needs an even item count");
    let mut items: Vec<usize> = (0..m).collect();
    items.shuffle(rng);
    items
        .chunks_exact(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect()
}

/// Pairing-model multigraph: vertex i owns half-edges {i·d, …, i·d+d−1}; a
/// uniform perfect matching of all n·d half-edges induces the edges.
pub fn sample_pairing(n: usize, d: usize, seed: u64) -> Result<Multigraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_pairing_with(n, d, &mut rng)
}

pub fn sample_pairing_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
) -> Result<Multigraph, GraphError> {
    if d == 0 {
        return Err(GraphError::ZeroDegree);
    }
    if (n * d) % 2 != 0 {
        return Err(GraphError::OddHalfEdges { n, d });
    }
    let mut g = Multigraph::new(n);
    for (a, b) in sample_perfect_matching_with(n * d, rng) {
        g.add_edge(a / d, b / d);
    }
    Ok(g)
}

/// Matching-model multigraph: the union, with multiplicity, of d independent
/// uniform perfect matchings on the vertex set. Never contains self-loops.
pub fn sample_matching_model(n: usize, d: usize, seed: u64) -> Result<Multigraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_matching_model_with(n, d, &mut rng)
}

pub fn sample_matching_model_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
) -> Result<Multigraph, GraphError> {
    if d == 0 {
        return Err(GraphError::ZeroDegree);
    }
    if n % 2 != 0 {
        return Err(GraphError::OddVertexCount { n });
    }
    let mut g = Multigraph::new(n);
    for _ in 0..d {
        for (a, b) in sample_perfect_matching_with(n, rng) {
            g.add_edge(a, b);
        }
    }
    Ok(g)
}

/// Uniform simple d-regular graph by rejection: sample pairing-model
/// multigraphs until one is simple. Conditioned on simplicity the pairing
/// model is uniform over simple d-regular graphs, so the output is too.
pub fn sample_uniform_regular(
    n: usize,
    d: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_uniform_regular_with(n, d, &mut rng, max_attempts)
}

pub fn sample_uniform_regular_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Graph, GraphError> {
    if d > 4 {
        return Err(GraphError::DegreeTooLarge { d });
    }
    if d >= n {
        return Err(GraphError::DegreeExceedsOrder { n, d });
    }
    for _ in 0..max_attempts {
        let mg = sample_pairing_with(n, d, rng)?;
        if is_simple(&mg) {
            return Ok(simplify(&mg));
        }
    }
    Err(GraphError::AttemptsExhausted {
        attempts: max_attempts,
    })
}

/// G(n, p): each of the C(n,2) edges present independently with probability p.
pub fn sample_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_erdos_renyi_with(n, p, &mut rng)
}

pub fn sample_erdos_renyi_with<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// A random-graph ensemble pinned down to a reproducible distribution:
/// model, size parameters, and the 64-bit seed of the sample stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Model {
    Pairing { d: usize },
    Matching { d: usize },
    UniformRegular { d: usize },
    ErdosRenyi { p: f64 },
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), GraphError> {
        match self.model {
            Model::Pairing { d } => {
                if d == 0 {
                    return Err(GraphError::ZeroDegree);
                }
                if (self.n * d) % 2 != 0 {
                    return Err(GraphError::OddHalfEdges { n: self.n, d });
                }
            }
            Model::Matching { d } => {
                if d == 0 {
                    return Err(GraphError::ZeroDegree);
                }
                if self.n % 2 != 0 {
                    return Err(GraphError::OddVertexCount { n: self.n });
                }
            }
            Model::UniformRegular { d } => {
                if d == 0 {
                    return Err(GraphError::ZeroDegree);
                }
                if (self.n * d) % 2 != 0 {
                    return Err(GraphError::OddHalfEdges { n: self.n, d });
                }
                if d > 4 {
                    return Err(GraphError::DegreeTooLarge { d });
                }
                if d >= self.n {
                    return Err(GraphError::DegreeExceedsOrder { n: self.n, d });
                }
            }
            Model::ErdosRenyi { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(GraphError::InvalidProbability(p));
                }
            }
        }
        Ok(())
    }

    /// Sample index i of the stream defined by this spec's seed. Streams for
    /// distinct indices are independent, so parallel workers can each take an
    /// index without coordinating.
    pub fn rng_for_sample(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Draw the simple graph of sample `index`: multigraph models simplify,
    /// the others are already simple.
    pub fn sample_graph(&self, index: u64) -> Result<Graph, GraphError> {
        let mut rng = self.rng_for_sample(index);
        self.sample_graph_with(&mut rng)
    }

    /// Like [`EnsembleSpec::sample_graph`] but drawing from a caller-supplied
    /// generator, so follow-up randomness (measurement angles, say) can come
    /// from the same per-sample stream.
    pub fn sample_graph_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph, GraphError> {
        match self.model {
            Model::Pairing { d } => Ok(simplify(&sample_pairing_with(self.n, d, rng)?)),
            Model::Matching { d } => Ok(simplify(&sample_matching_model_with(self.n, d, rng)?)),
            Model::UniformRegular { d } => {
                sample_uniform_regular_with(self.n, d, rng, DEFAULT_MAX_ATTEMPTS)
            }
            Model::ErdosRenyi { p } => sample_erdos_renyi_with(self.n, p, rng),
        }
    }
}
