//! Monte Carlo estimation of the ensemble-averaged second moment.

use crate::{
    graph_state_distribution, m2_of_distribution, m2_statmech, rational_to_f64, AngleVector,
    MomentsError,
};
use graph_core::EnsembleSpec;
use rayon::prelude::*;

/// How each sampled graph is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    /// Exact angle average per graph via the signed subset sum (n ≤ 16).
    Statmech,
    /// Empirical angle average: the full 2ⁿ outcome distribution is built at
    /// each of a batch of uniformly random angle vectors (n ≤ 14).
    Statevector,
}

/// A mean with its standard error and the seed needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MomentEstimate {
    /// Mean and standard error of the mean of iid per-sample values. With a
    /// single sample the spread is unknowable and stderr is reported as 0.
    pub fn from_values(values: &[f64], seed: u64) -> MomentEstimate {
        let s = values.len();
        assert!(s > 0, "need at least one value");
        let mean = values.iter().sum::<f64>() / s as f64;
        let stderr = if s > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1) as f64;
            (var / s as f64).sqrt()
        } else {
            0.0
        };
        MomentEstimate {
            mean,
            stderr,
            samples: s,
            seed,
        }
    }
}

/// Estimate E[m₂] over `spec` from `samples` independent graphs.
///
/// Sample i draws from stream i of the ensemble seed, so the result is
/// deterministic and independent of thread count. In statevector mode each
/// graph is scored by the average over `angle_samples` fresh angle vectors
/// drawn from the same stream; the per-graph average is the iid unit, so the
/// reported standard error covers the combined graph and angle noise.
pub fn mc_avg_m2(
    spec: &EnsembleSpec,
    samples: usize,
    mode: McMode,
    angle_samples: usize,
) -> Result<MomentEstimate, MomentsError> {
    spec.validate()?;
    if samples == 0 || (mode == McMode::Statevector && angle_samples == 0) {
        return Err(MomentsError::ZeroSamples);
    }
    match mode {
        McMode::Statmech if spec.n > 16 => {
            return Err(MomentsError::TooManyQubits {
                n: spec.n,
                max: 16,
            })
        }
        McMode::Statevector if spec.n > 14 => {
            return Err(MomentsError::TooManyQubits {
                n: spec.n,
                max: 14,
            })
        }
        _ => {}
    }

    // Indexed collect keeps the values in sample order; the sequential
    // reduction below is then bit-for-bit reproducible.
    let values: Vec<Result<f64, MomentsError>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = spec.rng_for_sample(i);
            let g = spec.sample_graph_with(&mut rng)?;
            match mode {
                McMode::Statmech => Ok(rational_to_f64(&m2_statmech(&g)?)),
                McMode::Statevector => {
                    let mut acc = 0.0;
                    for _ in 0..angle_samples {
                        let theta = AngleVector::uniform(spec.n, &mut rng);
                        acc += m2_of_distribution(&graph_state_distribution(&g, &theta)?);
                    }
                    Ok(acc / angle_samples as f64)
                }
            }
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>, _>>()?;

    Ok(MomentEstimate::from_values(&values, spec.seed))
}
