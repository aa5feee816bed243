//! Second-moment machinery for graph states measured in the X-Y plane.
//!
//! Two independent evaluation routes are kept deliberately separate so they
//! can cross-check each other: a state-vector route (full 2ⁿ distribution for
//! one angle vector) and an exact parity-sum route (the angle-averaged second
//! moment as a rational number). On top of those sit the closed-form ensemble
//! averages for the pairing and matching models and Monte Carlo estimators.

mod mc;
mod parity;

pub use mc::{mc_avg_m2, McMode, MomentEstimate};
pub use parity::{
    avg_matching_parity, exact_avg_m2_matching, exact_avg_m2_matching_f64, exact_avg_m2_pairing,
    exact_avg_m2_pairing_f64,
};

use graph_core::{Graph, GraphError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational value; reduced form with positive denominator is maintained
/// by the arithmetic type itself.
pub type ExactRational = BigRational;

#[derive(Debug, Error, PartialEq)]
pub enum MomentsError {
    #[error("this path supports n <= {max}, got n={n}")]
    TooManyQubits { n: usize, max: usize },
    #[error("matching parity needs even n, got n={n}")]
    OddMatchingOrder { n: usize },
    #[error("matching parity needs a+b <= n, got a={a}, b={b}, n={n}")]
    SetsTooLarge { n: usize, a: usize, b: usize },
    #[error("exact ensemble averages support 1 <= n <= 64 and 1 <= d <= 8, got n={n}, d={d}")]
    ExactDomain { n: usize, d: usize },
    #[error("Monte Carlo estimation needs at least one sample")]
    ZeroSamples,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Measurement angles, one per qubit, stored reduced to [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(theta: Vec<f64>) -> AngleVector {
        let tau = std::f64::consts::TAU;
        AngleVector(theta.into_iter().map(|t| t.rem_euclid(tau)).collect())
    }

    pub fn zero(n: usize) -> AngleVector {
        AngleVector(vec![0.0; n])
    }

    pub fn uniform<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> AngleVector {
        let tau = std::f64::consts::TAU;
        AngleVector((0..n).map(|_| rng.random::<f64>() * tau).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }
}

/// Probability distribution over the 2ⁿ measurement outcomes.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> OutcomeDistribution {
        assert_eq!(probs.len(), 1 << n, "need 2^n outcome probabilities");
        let total: f64 = probs.iter().sum();
        assert!(
            (total - 1.0).abs() < 1e-10,
            "outcome probabilities must sum to 1, got {total}"
        );
        assert!(probs.iter().all(|&p| p >= 0.0));
        OutcomeDistribution { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Number of edges inside the support of each subset z, reduced mod 2, as a
/// sign table: sign[z] = (−1)^{z^T U z} with U the upper triangle of the
/// adjacency matrix.
fn quadratic_sign_table(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let adj: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let size = 1usize << n;
    let mut parity = vec![0u8; size];
    for z in 1..size {
        let j = (usize::BITS - 1 - z.leading_zeros()) as usize;
        let rest = z & !(1 << j);
        parity[z] = parity[rest] ^ ((adj[j] & rest as u64).count_ones() as u8 & 1);
    }
    parity
        .into_iter()
        .map(|p| if p == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Outcome distribution of the graph state measured qubit-wise along the
/// X-Y-plane directions θ: each qubit j is read in the basis
/// (|0⟩ + (−1)^{x_j} e^{iθ_j}|1⟩)/√2, so
/// p(x) = |2^{−n} Σ_z (−1)^{x·z + zᵀUz} e^{−iθ·z}|².
pub fn graph_state_distribution(
    g: &Graph,
    theta: &AngleVector,
) -> Result<OutcomeDistribution, MomentsError> {
    let n = g.n();
    if n > 14 {
        return Err(MomentsError::TooManyQubits { n, max: 14 });
    }
    assert_eq!(theta.len(), n, "need one angle per qubit");
    let size = 1usize << n;

    // ψ_z = (−1)^{zᵀUz} e^{−iθ·z}, built by doubling over qubits.
    let mut psi = vec![Complex64::new(1.0, 0.0); size];
    for (j, &t) in theta.angles().iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -t);
        let bit = 1usize << j;
        for z in 0..size {
            if z & bit != 0 {
                psi[z] *= phase;
            }
        }
    }
    for (z, sign) in quadratic_sign_table(g).into_iter().enumerate() {
        psi[z] *= sign;
    }

    // Unnormalized Walsh-Hadamard transform: out[x] = Σ_z (−1)^{x·z} ψ_z.
    let mut h = 1;
    while h < size {
        let mut chunk = 0;
        while chunk < size {
            for i in chunk..chunk + h {
                let a = psi[i];
                let b = psi[i + h];
                psi[i] = a + b;
                psi[i + h] = a - b;
            }
            chunk += 2 * h;
        }
        h *= 2;
    }

    let scale = 1.0 / (size as f64 * size as f64);
    let probs: Vec<f64> = psi.iter().map(|a| a.norm_sqr() * scale).collect();
    Ok(OutcomeDistribution::new(n, probs))
}

/// m₂ = 2ⁿ Σ_x p(x)².
pub fn m2_of_distribution(p: &OutcomeDistribution) -> f64 {
    let sum_sq: f64 = p.probs.iter().map(|&q| q * q).sum();
    (1u64 << p.n) as f64 * sum_sq
}

/// Angle-averaged second moment as an exact rational:
/// E_θ[m₂(g,θ)] = 2^{−n} Σ over disjoint L,R ⊆ [n] of (−1)^{#edges(L,R)}.
/// The 3ⁿ assignments are walked depth-first with an O(1) parity update per
/// step, so n ≤ 16 stays well under a second.
pub fn m2_statmech(g: &Graph) -> Result<ExactRational, MomentsError> {
    let n = g.n();
    if n > 16 {
        return Err(MomentsError::TooManyQubits { n, max: 16 });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbor_mask(v) as u32).collect();

    fn walk(v: usize, n: usize, adj: &[u32], l: u32, r: u32, parity: u32) -> i64 {
        if v == n {
            return 1 - 2 * parity as i64;
        }
        let bit = 1u32 << v;
        let mut acc = walk(v + 1, n, adj, l, r, parity);
        let dl = (adj[v] & r).count_ones() & 1;
        acc += walk(v + 1, n, adj, l | bit, r, parity ^ dl);
        let dr = (adj[v] & l).count_ones() & 1;
        acc += walk(v + 1, n, adj, l, r | bit, parity ^ dr);
        acc
    }

    let signed = walk(0, n, &adj, 0, 0, 0);
    Ok(BigRational::new(
        BigInt::from(signed),
        BigInt::from(1u64 << n),
    ))
}

/// Fraction of outcomes at least α times the uniform weight 2^{−n}.
pub fn anticoncentration_fraction(p: &OutcomeDistribution, alpha: f64) -> f64 {
    assert!(alpha > 0.0, "threshold must be positive");
    let cutoff = alpha / (1u64 << p.n) as f64;
    let hits = p.probs.iter().filter(|&&q| q >= cutoff).count();
    hits as f64 / p.probs.len() as f64
}

/// Round a big rational to the nearest representable f64 ballpark (exact to
/// ~2^{−80} relative, far tighter than any tolerance used downstream).
/// Magnitudes outside the f64 range overflow/underflow the usual way.
pub fn rational_to_f64(r: &ExactRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    if let (Some(nf), Some(df)) = (num.to_f64(), den.to_f64()) {
        if nf.is_finite() && df.is_finite() && df != 0.0 {
            let direct = nf / df;
            if direct.is_finite() && direct != 0.0 {
                return direct;
            }
        }
    }
    // Slow path for extreme magnitudes: scale into range, divide, scale back
    // in sub-overflow steps so representable extremes survive.
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = 96 - (nb - db);
    let scaled = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mut result = scaled.to_f64().unwrap_or(if num.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let mut rem = -shift;
    while rem != 0 && result != 0.0 && result.is_finite() {
        let step = rem.clamp(-900, 900);
        result *= 2f64.powi(step as i32);
        rem -= step;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_traits::One;

    fn rational(num: i64, den: i64) -> ExactRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn single_qubit_plus_state_along_x() {
        let g = Graph::empty(1);
        let p = graph_state_distribution(&g, &AngleVector::zero(1)).unwrap();
        assert_relative_eq!(p.probs()[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.probs()[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_qubit_plus_state_along_y() {
        let g = Graph::empty(1);
        let theta = AngleVector::new(vec![std::f64::consts::FRAC_PI_2]);
        let p = graph_state_distribution(&g, &theta).unwrap();
        assert_relative_eq!(p.probs()[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(p.probs()[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn distribution_rejects_large_n() {
        let g = Graph::empty(15);
        assert_eq!(
            graph_state_distribution(&g, &AngleVector::zero(15)).unwrap_err(),
            MomentsError::TooManyQubits { n: 15, max: 14 }
        );
    }

    #[test]
    fn m2_of_simple_distributions() {
        let uniform = OutcomeDistribution::new(3, vec![0.125; 8]);
        assert_relative_eq!(m2_of_distribution(&uniform), 1.0);

        let mut probs = vec![0.0; 8];
        probs[5] = 1.0;
        let point = OutcomeDistribution::new(3, probs);
        assert_relative_eq!(m2_of_distribution(&point), 8.0);

        let skew = OutcomeDistribution::new(1, vec![0.75, 0.25]);
        assert_relative_eq!(m2_of_distribution(&skew), 1.25);
    }

    #[test]
    fn statmech_anchor_values() {
        assert_eq!(m2_statmech(&Graph::empty(1)).unwrap(), rational(3, 2));

        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(m2_statmech(&edge).unwrap(), rational(5, 4));
    }

    #[test]
    fn statmech_rejects_large_n() {
        assert!(m2_statmech(&Graph::empty(17)).is_err());
    }

    #[test]
    fn anticoncentration_examples() {
        let uniform = OutcomeDistribution::new(2, vec![0.25; 4]);
        assert_eq!(anticoncentration_fraction(&uniform, 1.0), 1.0);
        assert_eq!(anticoncentration_fraction(&uniform, 1.01), 0.0);

        let mut probs = vec![0.0; 4];
        probs[2] = 1.0;
        let point = OutcomeDistribution::new(2, probs);
        assert_eq!(anticoncentration_fraction(&point, 1.0), 0.25);
    }

    #[test]
    fn angles_reduce_mod_tau() {
        let tau = std::f64::consts::TAU;
        let a = AngleVector::new(vec![-0.5, 3.0 * tau + 0.25]);
        assert!(a.angles()[0] > 0.0 && a.angles()[0] < tau);
        assert_relative_eq!(a.angles()[1], 0.25, epsilon = 1e-9);
    }

    #[test]
    fn rational_conversion_handles_extremes() {
        assert_relative_eq!(rational_to_f64(&rational(1, 3)), 1.0 / 3.0);
        assert_relative_eq!(rational_to_f64(&rational(-5, 4)), -1.25);
        assert_eq!(rational_to_f64(&rational(0, 7)), 0.0);

        // Huge numerator and denominator with a modest ratio.
        let big = BigInt::one() << 4000u32;
        let r = BigRational::new(&big * BigInt::from(5), big.clone() * BigInt::from(2));
        assert_relative_eq!(rational_to_f64(&r), 2.5, epsilon = 1e-12);

        // Representable but outside the naive num/den float range.
        let r = BigRational::new(BigInt::one(), BigInt::one() << 1000u32);
        assert_relative_eq!(rational_to_f64(&r), 2f64.powi(-1000), epsilon = 1e-300);

        // True underflow collapses to zero.
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 40000u32);
        assert_eq!(rational_to_f64(&tiny), 0.0);
    }
}
