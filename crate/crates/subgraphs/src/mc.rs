//! Closed-form expected induced-subgraph counts in the d/n → 0 regime and
//! their Monte Carlo counterparts over uniform regular graphs.

use crate::{count_induced, factorial, PatternGraph, SubgraphError};
use graph_core::sample_uniform_regular_with;
use moments::MomentEstimate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Leading-order expected number of induced copies of the pattern in a
/// uniform d-regular graph on n vertices:
/// C(n,v) v!/aut(H) (d/n)^e (1 - d/n)^(C(v,2)-e). The vanishing correction
/// factor is dropped.
pub fn expected_induced_count(
    n: usize,
    d: usize,
    pattern: &PatternGraph,
) -> Result<f64, SubgraphError> {
    if d >= n {
        return Err(SubgraphError::DegreeDomain { n, d });
    }
    let v = pattern.v();
    if v > n {
        return Ok(0.0);
    }
    let mut subsets = 1f64;
    for i in 0..v {
        subsets *= (n - i) as f64 / (i + 1) as f64;
    }
    let placements = (factorial(v) / pattern.aut()) as f64;
    let p = d as f64 / n as f64;
    let gaps = v * (v - 1) / 2 - pattern.e();
    Ok(subsets * placements * p.powi(pattern.e() as i32) * (1.0 - p).powi(gaps as i32))
}

/// Leading-order probability that s chosen pairs are edges and s_bar other
/// pairs are not, in a uniform d-regular graph. Trustworthy only while
/// `hypothesis_ratio` is small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingProbability {
    pub value: f64,
    /// s*s_bar relative to d, the smallness parameter of the approximation.
    pub hypothesis_ratio: f64,
}

pub fn induced_probability_leading(
    n: usize,
    d: usize,
    s: usize,
    s_bar: usize,
) -> LeadingProbability {
    debug_assert!(d < n, "degree must be below the vertex count");
    let p = d as f64 / n as f64;
    let value = p.powi(s as i32) * (1.0 - p).powi(s_bar as i32);
    let cross = (s * s_bar) as f64;
    let hypothesis_ratio = if cross == 0.0 { 0.0 } else { cross / d as f64 };
    LeadingProbability {
        value,
        hypothesis_ratio,
    }
}

/// Mean and standard error of count_induced over uniform d-regular samples.
/// Per-sample seed streams keep the estimate independent of thread count.
pub fn mc_induced_count(
    n: usize,
    d: usize,
    pattern: &PatternGraph,
    samples: usize,
    seed: u64,
) -> Result<MomentEstimate, SubgraphError> {
    const MAX_N: usize = 300;
    const MAX_D: usize = 4;
    const MAX_V: usize = 4;
    if n > MAX_N || d > MAX_D || pattern.v() > MAX_V {
        return Err(SubgraphError::McDomain {
            max_n: MAX_N,
            max_d: MAX_D,
            max_v: MAX_V,
        });
    }
    if samples == 0 {
        return Err(SubgraphError::ZeroSamples);
    }
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = sample_uniform_regular_with(n, d, &mut rng, 10_000)?;
            Ok(count_induced(&g, pattern)? as f64)
        })
        .collect::<Vec<Result<f64, SubgraphError>>>()
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(MomentEstimate::from_values(&values, seed))
}
