//! Exact evaluation of binary Krawtchouk polynomials
//!
//!   K_i^N(x) = Σ_q (−1)^q C(x,q) C(N−x, i−q),
//!
//! plus two pointwise upper bounds on |K_i^N(t)| returned as floats, and the
//! small exact-combinatorics helpers (binomial, factorial, double factorial)
//! shared by the moment formulas downstream.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("krawtchouk domain violation: need i <= N and x <= N, got i={i}, N={n}, x={x}")]
    Krawtchouk { i: usize, n: usize, x: usize },
    #[error("double factorial undefined below -1, got {0}")]
    DoubleFactorial(i64),
}

/// C(n, k) as a big integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        num_integer::binomial(BigInt::from(n), BigInt::from(k))
    }
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// n!! with the empty-product conventions (−1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> Result<BigInt, DomainError> {
    if n < -1 {
        return Err(DomainError::DoubleFactorial(n));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// ln C(n, k) for float-only bounds; requires k ≤ n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial needs k <= n");
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// One recorded evaluation K_i^N(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrawtchoukEval {
    pub i: usize,
    pub n: usize,
    pub x: usize,
    pub value: BigInt,
}

impl KrawtchoukEval {
    pub fn compute(i: usize, n: usize, x: usize) -> Result<Self, DomainError> {
        Ok(KrawtchoukEval {
            i,
            n,
            x,
            value: krawtchouk(i, n, x)?,
        })
    }
}

/// K_i^N(x) by the defining alternating sum. This is the source of truth;
/// the recurrence in [`krawtchouk_row`] is validated against it.
pub fn krawtchouk(i: usize, n: usize, x: usize) -> Result<BigInt, DomainError> {
    if i > n || x > n {
        return Err(DomainError::Krawtchouk { i, n, x });
    }
    let mut acc = BigInt::zero();
    for q in 0..=i {
        let term = binomial(x as u64, q as u64) * binomial((n - x) as u64, (i - q) as u64);
        if q % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// [K_0^N(x), …, K_{i_max}^N(x)] by the degree recurrence
///   (i+1) K_{i+1} = (N−2x) K_i − (N−i+1) K_{i−1},
/// which divides exactly in big integers.
pub fn krawtchouk_row(n: usize, x: usize, i_max: usize) -> Result<Vec<BigInt>, DomainError> {
    if i_max > n || x > n {
        return Err(DomainError::Krawtchouk { i: i_max, n, x });
    }
    let mut out = Vec::with_capacity(i_max + 1);
    out.push(BigInt::one());
    if i_max == 0 {
        return Ok(out);
    }
    let lin = BigInt::from(n as i64 - 2 * x as i64);
    out.push(lin.clone());
    for i in 1..i_max {
        let next = &lin * &out[i] - BigInt::from((n - i + 1) as u64) * &out[i - 1];
        let (q, r) = next.div_rem(&BigInt::from(i as u64 + 1));
        debug_assert!(r.is_zero(), "recurrence division must be exact");
        out.push(q);
    }
    Ok(out)
}

/// Orthogonality-derived bound 2^{N/2} C(N,i)^{1/2} C(N,t)^{−1/2} on |K_i^N(t)|.
pub fn orth_bound(i: usize, n: usize, t: usize) -> f64 {
    assert!(i <= n && t <= n, "orth_bound domain");
    let ln2 = std::f64::consts::LN_2;
    (0.5 * (n as f64 * ln2 + ln_binomial(n as u64, i as u64) - ln_binomial(n as u64, t as u64)))
        .exp()
}

/// Bound C(N,i) · (i/N + (N−2t)²/N²)^{i/2} on |K_i^N(t)|. The second term is
/// the squared distance of t from the central point N/2, normalized; it must
/// be symmetric under t ↔ N−t because |K_i^N| is.
pub fn derksen_bound(i: usize, n: usize, t: usize) -> f64 {
    assert!(i <= n && t <= n, "derksen_bound domain");
    if i == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let gap = (nf - 2.0 * t as f64) / nf;
    let base = i as f64 / nf + gap * gap;
    (ln_binomial(n as u64, i as u64) + 0.5 * i as f64 * base.ln()).exp()
}

/// |K| as f64 for comparing against the float bounds in tests.
pub fn abs_to_f64(v: &BigInt) -> f64 {
    let (_, digits) = v.to_u64_digits();
    let mut acc = 0.0f64;
    for &d in digits.iter().rev() {
        acc = acc * 1.8446744073709552e19 + d as f64;
    }
    acc.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_one() {
        assert_eq!(krawtchouk(0, 5, 3).unwrap(), BigInt::one());
    }

    #[test]
    fn degree_one_is_n_minus_2x() {
        assert_eq!(krawtchouk(1, 4, 1).unwrap(), BigInt::from(2));
        assert_eq!(krawtchouk(1, 6, 5).unwrap(), BigInt::from(-4));
    }

    #[test]
    fn at_zero_equals_binomial() {
        assert_eq!(krawtchouk(2, 4, 0).unwrap(), BigInt::from(6));
        for n in 0..=12usize {
            for i in 0..=n {
                assert_eq!(krawtchouk(i, n, 0).unwrap(), binomial(n as u64, i as u64));
            }
        }
    }

    #[test]
    fn row_matches_known_values() {
        let row = krawtchouk_row(4, 0, 4).unwrap();
        let want: Vec<BigInt> = [1, 4, 6, 4, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, want);

        let row = krawtchouk_row(4, 2, 2).unwrap();
        let want: Vec<BigInt> = [1, 0, -2].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, want);
    }

    #[test]
    fn domain_violations_error() {
        assert!(krawtchouk(5, 4, 0).is_err());
        assert!(krawtchouk(0, 4, 5).is_err());
        assert!(krawtchouk_row(4, 0, 5).is_err());
    }

    #[test]
    fn double_factorial_conventions() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(0).unwrap(), BigInt::one());
        assert_eq!(double_factorial(1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(6).unwrap(), BigInt::from(48));
        assert!(double_factorial(-3).is_err());
    }

    #[test]
    fn orth_bound_example() {
        let b = orth_bound(0, 2, 1);
        assert!((b - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(b >= 1.0);
    }

    #[test]
    fn derksen_bound_edge_cases() {
        assert_eq!(derksen_bound(0, 7, 3), 1.0);
        // i = N at the central point: bound is exactly 1, matched by |K_N^N(N/2)| = 1.
        let b = derksen_bound(6, 6, 3);
        assert!((b - 1.0).abs() < 1e-12);
        let k = krawtchouk(6, 6, 3).unwrap();
        assert_eq!(k.magnitude().to_string(), "1");
        // At t = N the distance term is maximal: bound 2^{N/2}, value 1.
        let b = derksen_bound(6, 6, 6);
        assert!((b - 8.0).abs() < 1e-12);
        let k = krawtchouk(6, 6, 6).unwrap();
        assert_eq!(k.magnitude().to_string(), "1");
    }

    #[test]
    fn abs_to_f64_roundtrip() {
        assert_eq!(abs_to_f64(&BigInt::from(-12345)), 12345.0);
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let approx = abs_to_f64(&big);
        assert!((approx - 2f64.powi(124)).abs() / 2f64.powi(124) < 1e-12);
    }
}
