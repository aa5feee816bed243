//! Brute-force enumeration oracles. Every closed-form quantity in this crate
//! is re-derived here by direct enumeration over matchings, half-edge
//! pairings, or basis states, and the two routes must agree exactly.

use graph_core::{simplify, Graph, Multigraph};
use moments::{
    avg_matching_parity, exact_avg_m2_matching, exact_avg_m2_pairing, graph_state_distribution,
    m2_statmech, AngleVector, ExactRational,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

/// All perfect matchings of the given items, each as a list of pairs.
fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let partner = items[k];
        let rest: Vec<usize> = items[1..].iter().copied().filter(|&x| x != partner).collect();
        for mut m in perfect_matchings(&rest) {
            m.push((first, partner));
            out.push(m);
        }
    }
    out
}

/// (−1)^{#edges between the first a items and the next b items}.
fn crossing_sign(m: &[(usize, usize)], a: usize, b: usize) -> i64 {
    let in_l = |x: usize| x < a;
    let in_r = |x: usize| a <= x && x < a + b;
    let cross = m
        .iter()
        .filter(|&&(u, v)| (in_l(u) && in_r(v)) || (in_l(v) && in_r(u)))
        .count();
    if cross % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn matching_parity_certified_by_enumeration() {
    // Every size pair (a, b) with a + b <= n, including the regions that the
    // closed form only reaches through the exchange and complement
    // identities, must match the exhaustive average exactly.
    for n in [2usize, 4, 6, 8, 10] {
        let items: Vec<usize> = (0..n).collect();
        let all = perfect_matchings(&items);
        for a in 0..=n {
            for b in 0..=(n - a) {
                let signed: i64 = all.iter().map(|m| crossing_sign(m, a, b)).sum();
                let expected =
                    BigRational::new(BigInt::from(signed), BigInt::from(all.len() as u64));
                assert_eq!(
                    avg_matching_parity(n, a, b).unwrap(),
                    expected,
                    "n={n} a={a} b={b}"
                );
            }
        }
    }
}

fn pairing_average_by_enumeration(n: usize, d: usize) -> ExactRational {
    let half_edges: Vec<usize> = (0..n * d).collect();
    let all = perfect_matchings(&half_edges);
    let mut total = ExactRational::zero();
    for m in &all {
        let mut mg = Multigraph::new(n);
        for &(x, y) in m {
            mg.add_edge(x / d, y / d);
        }
        total += m2_statmech(&simplify(&mg)).unwrap();
    }
    total / BigRational::from(BigInt::from(all.len() as u64))
}

#[test]
fn pairing_average_certified_by_enumeration() {
    for (n, d) in [(2, 1), (2, 2), (2, 3), (3, 2), (4, 1), (4, 2), (4, 3), (6, 1), (6, 2)] {
        assert_eq!(
            exact_avg_m2_pairing(n, d).unwrap(),
            pairing_average_by_enumeration(n, d),
            "n={n} d={d}"
        );
    }
}

fn matching_average_by_enumeration(n: usize, d: usize) -> ExactRational {
    let items: Vec<usize> = (0..n).collect();
    let single = perfect_matchings(&items);
    let count = single.len().pow(d as u32);
    let mut idx = vec![0usize; d];
    let mut total = ExactRational::zero();
    for _ in 0..count {
        let mut mg = Multigraph::new(n);
        for &i in &idx {
            for &(x, y) in &single[i] {
                mg.add_edge(x, y);
            }
        }
        total += m2_statmech(&simplify(&mg)).unwrap();
        for pos in 0..d {
            idx[pos] += 1;
            if idx[pos] < single.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    total / BigRational::from(BigInt::from(count as u64))
}

#[test]
fn matching_average_certified_by_enumeration() {
    for (n, d) in [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (4, 3), (6, 1), (6, 2), (6, 3)] {
        assert_eq!(
            exact_avg_m2_matching(n, d).unwrap(),
            matching_average_by_enumeration(n, d),
            "n={n} d={d}"
        );
    }
}

/// Outcome distribution by direct O(4ⁿ) evaluation of the amplitude sum, with
/// the edge parity recounted per basis state. No shared code with the
/// transform-based implementation.
fn naive_distribution(g: &Graph, theta: &AngleVector) -> Vec<f64> {
    let n = g.n();
    let size = 1usize << n;
    let edges = g.edges();
    let angles = theta.angles();
    (0..size)
        .map(|x| {
            let mut amp = Complex64::new(0.0, 0.0);
            for z in 0..size {
                let mut sign = (x & z).count_ones();
                for &(u, v) in &edges {
                    sign += ((z >> u) & (z >> v) & 1) as u32;
                }
                let phase: f64 = (0..n)
                    .filter(|&j| (z >> j) & 1 == 1)
                    .map(|j| angles[j])
                    .sum();
                let term = Complex64::from_polar(1.0, -phase);
                amp += if sign % 2 == 0 { term } else { -term };
            }
            (amp / size as f64).norm_sqr()
        })
        .collect()
}

#[test]
fn distribution_certified_by_naive_sum() {
    let cases: Vec<Graph> = vec![
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap(),
        Graph::complete(4),
        Graph::empty(3),
    ];
    for g in &cases {
        let n = g.n();
        let theta = AngleVector::new((0..n).map(|j| 0.3 + 0.7 * j as f64).collect());
        let fast = graph_state_distribution(g, &theta).unwrap();
        let slow = naive_distribution(g, &theta);
        for (x, (&p, &q)) in fast.probs().iter().zip(slow.iter()).enumerate() {
            assert!(
                (p - q).abs() < 1e-12,
                "graph {:?} outcome {x}: {p} vs {q}",
                g.edges()
            );
        }
    }
}
