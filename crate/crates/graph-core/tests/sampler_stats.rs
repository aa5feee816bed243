//! Distributional checks on the samplers: uniformity over pairings and
//! matchings, simplicity rates, and agreement of rejection sampling with
//! exhaustive enumeration.

use graph_core::{
    is_simple, sample_matching_model_with, sample_pairing, sample_pairing_with,
    sample_perfect_matching_with, sample_uniform_regular_with, Graph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;

fn chi2_p_value(stat: f64, dof: usize) -> f64 {
    let dist = ChiSquared::new(dof as f64).unwrap();
    1.0 - dist.cdf(stat)
}

fn chi2_uniform<K: std::hash::Hash + Eq>(counts: &HashMap<K, usize>, cells: usize, total: usize) -> f64 {
    let expected = total as f64 / cells as f64;
    let mut stat = 0.0;
    let mut seen = 0usize;
    for &c in counts.values() {
        stat += (c as f64 - expected).powi(2) / expected;
        seen += c;
    }
    assert_eq!(seen, total);
    // Cells that never showed up still contribute their expectation.
    stat += (cells - counts.len()) as f64 * expected;
    chi2_p_value(stat, cells - 1)
}

#[test]
fn perfect_matchings_are_uniform() {
    // 8 items have 7!! = 105 perfect matchings.
    let samples = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    for _ in 0..samples {
        let mut m = sample_perfect_matching_with(8, &mut rng);
        m.sort_unstable();
        *counts.entry(m).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 105);
    let p = chi2_uniform(&counts, 105, samples);
    assert!(p > 1e-3, "chi-square p-value too small: {p}");
}

#[test]
fn pairing_n2_d2_double_edge_has_frequency_two_thirds() {
    let samples = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut double_edges = 0usize;
    for _ in 0..samples {
        let g = sample_pairing_with(2, 2, &mut rng).unwrap();
        match g.multiplicity(0, 1) {
            2 => double_edges += 1,
            0 => assert_eq!((g.multiplicity(0, 0), g.multiplicity(1, 1)), (1, 1)),
            m => panic!("impossible multiplicity {m}"),
        }
    }
    let freq = double_edges as f64 / samples as f64;
    let p = 2.0 / 3.0;
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    assert!((freq - p).abs() < 3.0 * sigma, "freq {freq}");
}

#[test]
fn matching_model_n4_d1_uniform_over_three_matchings() {
    let samples = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    for _ in 0..samples {
        let g = sample_matching_model_with(4, 1, &mut rng).unwrap();
        let mut key: Vec<(usize, usize)> = g.edge_multiplicities().map(|(e, _)| e).collect();
        key.sort_unstable();
        *counts.entry(key).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 3);
    let p = chi2_uniform(&counts, 3, samples);
    assert!(p > 1e-3, "chi-square p-value too small: {p}");
}

#[test]
fn pairing_acceptance_rate_at_n100_d3() {
    let attempts = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut simple = 0usize;
    for _ in 0..attempts {
        if is_simple(&sample_pairing_with(100, 3, &mut rng).unwrap()) {
            simple += 1;
        }
    }
    let rate = simple as f64 / attempts as f64;
    assert!(rate >= 2f64.powi(-9), "acceptance rate {rate} below floor");
}

#[test]
fn erdos_renyi_edge_mean() {
    let samples = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut total = 0usize;
    for _ in 0..samples {
        total += graph_core::sample_erdos_renyi_with(20, 0.5, &mut rng)
            .unwrap()
            .edge_count();
    }
    let mean = total as f64 / samples as f64;
    // Per-sample variance of Binomial(190, 1/2) is 47.5.
    let sigma = (47.5f64 / samples as f64).sqrt();
    assert!((mean - 95.0).abs() < 3.0 * sigma, "mean {mean}");
}

/// All labelled 3-regular graphs on 6 vertices, keyed by their 15-bit edge code.
fn all_cubic_graphs_on_six() -> Vec<u32> {
    let pairs: Vec<(usize, usize)> = (0..6)
        .flat_map(|u| ((u + 1)..6).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for code in 0u32..(1 << 15) {
        if code.count_ones() != 9 {
            continue;
        }
        let mut deg = [0usize; 6];
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if (code >> k) & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        if deg.iter().all(|&d| d == 3) {
            out.push(code);
        }
    }
    out
}

fn edge_code(g: &Graph) -> u32 {
    let mut code = 0u32;
    let mut k = 0;
    for u in 0..6 {
        for v in (u + 1)..6 {
            if g.has_edge(u, v) {
                code |= 1 << k;
            }
            k += 1;
        }
    }
    code
}

#[test]
fn rejection_sampling_matches_exhaustive_enumeration() {
    let universe = all_cubic_graphs_on_six();
    assert_eq!(universe.len(), 70);

    let samples = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for _ in 0..samples {
        let g = sample_uniform_regular_with(6, 3, &mut rng, 100_000).unwrap();
        *counts.entry(edge_code(&g)).or_insert(0) += 1;
    }
    for code in counts.keys() {
        assert!(universe.contains(code), "sampled a non-cubic labelled graph");
    }
    let p = chi2_uniform(&counts, 70, samples);
    assert!(p > 1e-3, "chi-square p-value too small: {p}");
}

#[test]
fn pairing_multigraph_parity_equals_simplified_parity() {
    // The mod-2 simplification preserves every crossing parity, so downstream
    // parity sums may use either the raw multigraph or the simple graph.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let mg = sample_pairing_with(8, 3, &mut rng).unwrap();
        let g = graph_core::simplify(&mg);
        for (l_mask, r_mask) in [(0b0011u32, 0b1100u32), (0b0101, 0b1010), (0b1, 0b110)] {
            let mut raw = 0usize;
            for ((u, v), m) in mg.edge_multiplicities() {
                if u == v {
                    continue;
                }
                let cross = ((l_mask >> u) & 1 == 1 && (r_mask >> v) & 1 == 1)
                    || ((l_mask >> v) & 1 == 1 && (r_mask >> u) & 1 == 1);
                if cross {
                    raw += m;
                }
            }
            let mut simple = 0usize;
            for (u, v) in g.edges() {
                let cross = ((l_mask >> u) & 1 == 1 && (r_mask >> v) & 1 == 1)
                    || ((l_mask >> v) & 1 == 1 && (r_mask >> u) & 1 == 1);
                if cross {
                    simple += 1;
                }
            }
            assert_eq!(raw % 2, simple % 2);
        }
    }
}

#[test]
fn pairing_sampler_is_seed_deterministic() {
    let a = sample_pairing(10, 3, 1234).unwrap();
    let b = sample_pairing(10, 3, 1234).unwrap();
    assert_eq!(a, b);
}
