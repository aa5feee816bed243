//! Geometric-entanglement bounds for graph states via GF(2) rank deficiency.
//!
//! The best squared overlap between a graph state and a real-stabilizer
//! product state is 2^{−(n−D)}, where D = max_S (|S| − rank A[S]) is the
//! largest rank deficiency over principal submatrices of the adjacency
//! matrix. This crate computes D exhaustively or heuristically, evaluates the
//! exact rank distribution of uniform random adjacency matrices, evolves the
//! associated deficiency Markov chain, and runs an alternating-least-squares
//! product-state optimizer as an independent oracle for the overlap.

mod als;
mod deficiency;

pub use als::{als_product_overlap, AlsInit, ProductState};
pub use deficiency::{
    max_rank_deficiency, real_stab_entanglement_bound, DeficiencyMethod, DeficiencyResult,
};

use gf2_linalg::{rank_gf2, BitMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub type ExactRational = BigRational;

#[derive(Debug, Error, PartialEq)]
pub enum EntanglementError {
    #[error("exhaustive subset scan supports n <= {max}, got n={n}")]
    ExhaustiveTooLarge { n: usize, max: usize },
    #[error("product-state optimization supports n <= {max}, got n={n}")]
    AlsTooLarge { n: usize, max: usize },
    #[error("exact rank distribution supports n <= {max}, got n={n}")]
    RankDistributionTooLarge { n: usize, max: usize },
    #[error("matrix growth needs even r0 <= m0 and m0 + k <= 64, got r0={r0}, m0={m0}, k={k}")]
    GrowthDomain { r0: usize, m0: usize, k: usize },
    #[error("need at least {min} samples, got {samples}")]
    TooFewSamples { samples: usize, min: usize },
    #[error("deficiency chain needs a cap of at least {min}, got {d_cap}")]
    CapTooSmall { d_cap: usize, min: usize },
}

/// Exact distribution of the GF(2) rank of a uniform random symmetric n×n
/// matrix with zero diagonal. Ranks are always even; entry h holds P(Rk=2h).
#[derive(Debug, Clone, PartialEq)]
pub struct RankDistribution {
    n: usize,
    probs: Vec<ExactRational>,
}

impl RankDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// P(Rk = rank); zero for odd or out-of-range ranks.
    pub fn prob_rank(&self, rank: usize) -> ExactRational {
        if rank % 2 != 0 || rank / 2 >= self.probs.len() {
            return ExactRational::zero();
        }
        self.probs[rank / 2].clone()
    }

    /// Probabilities indexed by h, for rank 2h.
    pub fn half_rank_probs(&self) -> &[ExactRational] {
        &self.probs
    }

    /// The same distribution over the deficiency D = n − Rk, ascending in D.
    /// D always has the parity of n.
    pub fn deficiency_marginal(&self) -> Vec<(usize, ExactRational)> {
        let mut out: Vec<(usize, ExactRational)> = self
            .probs
            .iter()
            .enumerate()
            .map(|(h, p)| (self.n - 2 * h, p.clone()))
            .collect();
        out.sort_by_key(|&(d, _)| d);
        out
    }
}

/// P(Rk = 2h) = 2^{−n(n−1)/2} · Π_{i=1}^{h} 2^{2i−2}/(2^{2i}−1)
///            · Π_{i=0}^{2h−1} (2^{n−i} − 1), for h = 0..⌊n/2⌋.
pub fn rank_distribution_exact(n: usize) -> Result<RankDistribution, EntanglementError> {
    if n > 200 {
        return Err(EntanglementError::RankDistributionTooLarge { n, max: 200 });
    }
    let scale = ExactRational::new(BigInt::one(), BigInt::one() << (n * (n - 1) / 2).max(0));
    let mut probs = Vec::with_capacity(n / 2 + 1);
    // Running products over i = 1..=h and i = 0..2h−1.
    let mut pair_factor = ExactRational::one();
    let mut count_factor = BigInt::one();
    for h in 0..=(n / 2) {
        if h > 0 {
            pair_factor *= ExactRational::new(
                BigInt::one() << (2 * h - 2),
                (BigInt::one() << (2 * h)) - BigInt::one(),
            );
            count_factor *= (BigInt::one() << (n - (2 * h - 2))) - BigInt::one();
            count_factor *= (BigInt::one() << (n - (2 * h - 1))) - BigInt::one();
        }
        probs.push(&scale * &pair_factor * ExactRational::from(count_factor.clone()));
    }
    let total: ExactRational = probs.iter().sum();
    debug_assert!(total.is_one(), "rank probabilities must sum to 1");
    Ok(RankDistribution { n, probs })
}

/// Two-sided Gaussian-kernel approximation of P(Rk = 2h):
/// (e^{−2}/4) · 2^{−t²/2 + t/2} ≤ P ≤ e^{2/3} · 2^{−t²/2 + t/2}, t = n − 2h.
pub fn rank_distribution_gaussian_bounds(n: usize, h: usize) -> (f64, f64) {
    assert!(2 * h <= n, "rank 2h cannot exceed n");
    let t = (n - 2 * h) as f64;
    let kernel = 2f64.powf(-t * t / 2.0 + t / 2.0);
    ((-2f64).exp() / 4.0 * kernel, (2f64 / 3.0).exp() * kernel)
}

/// Lower bound on the probability that a fixed block reaches deficiency ≥ t:
/// (e^{−2}/4) · 2^{−t²/2 − t/2}.
pub fn deficiency_tail_bound(t: usize) -> f64 {
    let t = t as f64;
    (-2f64).exp() / 4.0 * 2f64.powf(-t * t / 2.0 - t / 2.0)
}

/// Parity class of a deficiency distribution. One growth step flips it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(d: usize) -> Parity {
        if d % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Distribution over deficiency states 0..=D_cap, with the mass that ever
/// stepped past the cap tracked separately.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDeficiencyChain {
    dist: Vec<f64>,
    parity: Parity,
    leak: f64,
}

impl RankDeficiencyChain {
    pub fn point_mass(d: usize, d_cap: usize) -> RankDeficiencyChain {
        assert!(d <= d_cap, "initial state must fit under the cap");
        let mut dist = vec![0.0; d_cap + 1];
        dist[d] = 1.0;
        RankDeficiencyChain {
            dist,
            parity: Parity::of(d),
            leak: 0.0,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.dist
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn leak(&self) -> f64 {
        self.leak
    }

    pub fn d_cap(&self) -> usize {
        self.dist.len() - 1
    }

    /// Tracked mass: in-range probability plus leak; 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.dist.iter().sum::<f64>() + self.leak
    }
}

/// One step of the deficiency chain: from state i the deficiency rises by 1
/// with probability 2^{−i} (the new row lies in the span forced by the
/// deficient directions) and falls by 1 otherwise. Mass stepping past the cap
/// joins the leak term.
pub fn markov_step(chain: &RankDeficiencyChain) -> RankDeficiencyChain {
    let cap = chain.d_cap();
    let mut dist = vec![0.0; cap + 1];
    let mut leak = chain.leak;
    for (i, &p) in chain.dist.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let up = p * 2f64.powi(-(i as i32));
        let down = p - up;
        if i + 1 <= cap {
            dist[i + 1] += up;
        } else {
            leak += up;
        }
        if i > 0 {
            dist[i - 1] += down;
        }
    }
    RankDeficiencyChain {
        dist,
        parity: chain.parity.flip(),
        leak,
    }
}

/// Stationary distribution of the two-step chain on one parity class:
/// π(D) ∝ 2^{−D(D−1)/2} · Π_{j=D+1}^∞ (1 − 2^{−j}), with the infinite
/// product truncated once its factors are within 2^{−64} of 1. Normalization
/// is numeric; the M²-fixed-point residual is the correctness certificate.
pub fn stationary_deficiency(
    parity: Parity,
    d_cap: usize,
) -> Result<RankDeficiencyChain, EntanglementError> {
    if d_cap < 8 {
        return Err(EntanglementError::CapTooSmall { d_cap, min: 8 });
    }
    let mut dist = vec![0.0; d_cap + 1];
    for (d, slot) in dist.iter_mut().enumerate() {
        if Parity::of(d) != parity {
            continue;
        }
        let mut tail = 1.0f64;
        for j in (d + 1)..=64 {
            tail *= 1.0 - 2f64.powi(-(j as i32));
        }
        let exponent = d as f64 * (d as f64 - 1.0) / 2.0;
        *slot = 2f64.powf(-exponent) * tail;
    }
    let total: f64 = dist.iter().sum();
    for p in &mut dist {
        *p /= total;
    }
    Ok(RankDeficiencyChain {
        dist,
        parity,
        leak: 0.0,
    })
}

/// Chain prediction versus direct matrix growth.
#[derive(Debug, Clone)]
pub struct GrowthComparison {
    /// Deficiency distribution predicted by k chain steps.
    pub chain: RankDeficiencyChain,
    /// Empirical deficiency frequencies of the grown matrices, index = D.
    pub empirical: Vec<f64>,
    /// Total-variation distance between the two.
    pub tv: f64,
}

/// Fixed deterministic rank-r0 seed: r0/2 disjoint edge blocks embedded in a
/// size×size zero matrix.
fn seed_matrix(r0: usize, size: usize) -> BitMatrix {
    let mut m = BitMatrix::zero(size);
    for b in 0..(r0 / 2) {
        m.set_sym(2 * b, 2 * b + 1, true);
    }
    m
}

/// Evolve the chain k steps from deficiency m0 − r0 and, in parallel, grow
/// `samples` random symmetric zero-diagonal matrices from the fixed rank-r0
/// seed by appending k uniform row/column pairs, recording the final
/// deficiency of each. Returns both distributions and their TV distance.
pub fn markov_evolve_vs_growth(
    r0: usize,
    m0: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<GrowthComparison, EntanglementError> {
    if r0 % 2 != 0 || r0 > m0 || m0 + k > 64 {
        return Err(EntanglementError::GrowthDomain { r0, m0, k });
    }
    if samples < 1_000 {
        return Err(EntanglementError::TooFewSamples {
            samples,
            min: 1_000,
        });
    }
    const D_CAP: usize = 64;
    let mut chain = RankDeficiencyChain::point_mass(m0 - r0, D_CAP);
    for _ in 0..k {
        chain = markov_step(&chain);
    }

    // Seed block embedded at full size; each sample appends k random rows.
    let base = seed_matrix(r0, m0 + k);

    let counts = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut m = base.clone();
            for j in m0..(m0 + k) {
                let bits: u64 = rng.random::<u64>() & ((1u64 << j) - 1);
                for t in 0..j {
                    if (bits >> t) & 1 == 1 {
                        m.set_sym(j, t, true);
                    }
                }
            }
            let d = (m0 + k) - rank_gf2(&m);
            let mut c = vec![0u64; D_CAP + 1];
            c[d] = 1;
            c
        })
        .reduce(
            || vec![0u64; D_CAP + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / samples as f64)
        .collect();
    let tv = 0.5
        * chain
            .probs()
            .iter()
            .zip(&empirical)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    Ok(GrowthComparison {
        chain,
        empirical,
        tv,
    })
}

/// Deficiency marginal of [`rank_distribution_exact`] as floats, for
/// comparison with the stationary chain.
pub fn deficiency_marginal_f64(n: usize) -> Result<Vec<(usize, f64)>, EntanglementError> {
    let dist = rank_distribution_exact(n)?;
    Ok(dist
        .deficiency_marginal()
        .into_iter()
        .map(|(d, p)| (d, p.to_f64().unwrap_or(0.0)))
        .collect())
}
