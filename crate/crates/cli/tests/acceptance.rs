//! End-to-end acceptance: each test pins one headline guarantee of the
//! workspace at its stated tolerance, so `cargo test --test acceptance`
//! prints one pass/fail line per guarantee. Failing tests print the measured
//! values they were gating.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cli::crosscheck::chi2_p_value;
use entanglement::{
    als_product_overlap, deficiency_marginal_f64, markov_evolve_vs_growth, markov_step,
    max_rank_deficiency, rank_distribution_exact, rank_distribution_gaussian_bounds,
    stationary_deficiency, AlsInit, DeficiencyMethod, Parity,
};
use gf2_linalg::{rank_gf2, sample_adjacency_with, BitMatrix};
use graph_core::{
    grid_graph, is_simple, reduce_sparsified_grid, sample_erdos_renyi, sample_matching_model,
    sample_pairing, EnsembleSpec, Graph, Model,
};
use krawtchouk::{abs_to_f64, binomial, derksen_bound, krawtchouk, krawtchouk_row, orth_bound};
use moments::{
    avg_matching_parity, exact_avg_m2_matching, exact_avg_m2_pairing, graph_state_distribution,
    m2_of_distribution, m2_statmech, mc_avg_m2, rational_to_f64, AngleVector, ExactRational,
    McMode, MomentEstimate,
};
use subgraphs::{count_induced, expected_induced_count, mc_induced_count, pattern_by_name};

fn rational(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// Mean and standard error of m2 over uniform random angle vectors on one
/// fixed graph, one RNG stream per draw.
fn angle_mc(g: &Graph, samples: usize, seed: u64) -> MomentEstimate {
    let n = g.n();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let theta = AngleVector::uniform(n, &mut rng);
            let dist = graph_state_distribution(g, &theta).expect("n is within range");
            m2_of_distribution(&dist)
        })
        .collect();
    MomentEstimate::from_values(&values, seed)
}

/// The exact ensemble-averaged collision moments approach their large-n
/// limits: 2 for odd degree, 3 for even degree. Gate: value at n = 64 within
/// 0.25 of the limit, and |value - limit| non-increasing for n >= 16.
#[test]
fn exact_moment_curves_approach_their_limits() {
    let mut violations = Vec::new();
    for (model, d) in [("pairing", 3), ("pairing", 4), ("matching", 3), ("matching", 4)] {
        let exact = match model {
            "pairing" => exact_avg_m2_pairing,
            _ => exact_avg_m2_matching,
        };
        let limit = if d % 2 == 1 { 2.0 } else { 3.0 };
        let mut gaps: Vec<(usize, f64)> = Vec::new();
        for n in 4..=64 {
            if let Ok(v) = exact(n, d) {
                gaps.push((n, (rational_to_f64(&v) - limit).abs()));
            }
        }
        let (n_last, final_gap) = *gaps.last().unwrap();
        assert_eq!(n_last, 64);
        println!("{model} d={d}: final gap {final_gap:.5} (limit {limit})");
        if final_gap > 0.25 {
            violations.push(format!(
                "{model} d={d}: |value - {limit}| = {final_gap:.5} at n = 64 exceeds 0.25"
            ));
        }
        for w in gaps.windows(2) {
            let ((n0, g0), (n1, g1)) = (w[0], w[1]);
            if n0 >= 16 && g1 > g0 + 1e-12 {
                violations.push(format!(
                    "{model} d={d}: gap rises {g0:.5} -> {g1:.5} from n = {n0} to n = {n1}"
                ));
            }
        }
    }
    assert!(
        violations.is_empty(),
        "limit-approach gate failed; the d=3 gap in fact peaks at n = 22 for both \
         models (the exact curve crosses its limit from below near n = 7 and \
         overshoots), so strict decrease from n = 16 does not hold:\n{}",
        violations.join("\n")
    );
}

/// Two independent routes to the same moment agree everywhere we can afford
/// to run both: per-graph transfer-matrix values match direct state
/// construction, ensemble means match the closed forms, and the
/// hand-computed anchors hold exactly.
#[test]
fn moment_oracles_triangulate() {
    // Hand-checked anchors, exact.
    assert_eq!(m2_statmech(&Graph::empty(1)).unwrap(), rational(3, 2));
    assert_eq!(m2_statmech(&Graph::complete(2)).unwrap(), rational(5, 4));
    assert_eq!(exact_avg_m2_pairing(2, 2).unwrap(), rational(9, 4));
    assert_eq!(avg_matching_parity(4, 1, 1).unwrap(), rational(1, 3));
    assert_eq!(avg_matching_parity(6, 2, 2).unwrap(), rational(-1, 15));

    // Per-graph: exact transfer-matrix value vs angle Monte Carlo at 1e5
    // samples, 4 stderr, 100 graphs per model (50 each at n = 4 and n = 6).
    let models = [
        Model::Pairing { d: 3 },
        Model::Matching { d: 3 },
        Model::UniformRegular { d: 3 },
        Model::ErdosRenyi { p: 0.5 },
    ];
    let mut worst_z = 0.0f64;
    for (mi, model) in models.into_iter().enumerate() {
        for (ni, n) in [4usize, 6].into_iter().enumerate() {
            let spec = EnsembleSpec {
                model,
                n,
                seed: 7000 + 10 * mi as u64 + ni as u64,
            };
            for index in 0..50u64 {
                let g = spec.sample_graph(index).unwrap();
                let target = rational_to_f64(&m2_statmech(&g).unwrap());
                let est = angle_mc(&g, 100_000, spec.seed.wrapping_add(index));
                let z = (est.mean - target).abs() / est.stderr;
                worst_z = worst_z.max(z);
                assert!(
                    z <= 4.0,
                    "graph {index} of model {mi} at n = {n}: exact {target:.6} vs \
                     sampled {:.6} +- {:.6} (z = {z:.2})",
                    est.mean,
                    est.stderr
                );
            }
        }
    }
    println!("per-graph oracle: worst z over 400 graphs = {worst_z:.2}");

    // Ensemble means: closed forms vs sampled statmech means, 1e5 samples.
    for (n, d) in [(2usize, 2usize), (4, 2), (4, 3), (6, 3)] {
        for pairing in [true, false] {
            let (model, target) = if pairing {
                (
                    Model::Pairing { d },
                    rational_to_f64(&exact_avg_m2_pairing(n, d).unwrap()),
                )
            } else {
                (
                    Model::Matching { d },
                    rational_to_f64(&exact_avg_m2_matching(n, d).unwrap()),
                )
            };
            let spec = EnsembleSpec {
                model,
                n,
                seed: 8000 + 2 * n as u64 + d as u64 + pairing as u64,
            };
            let est = mc_avg_m2(&spec, 100_000, McMode::Statmech, 1).unwrap();
            // Epsilon floor: at n = 2 the ensemble is a single graph, so the
            // sampled mean is exact and the standard error is zero.
            let diff = (est.mean - target).abs();
            assert!(
                diff <= 4.0 * est.stderr + 1e-9,
                "ensemble (n={n}, d={d}, pairing={pairing}): closed form {target:.6} vs \
                 sampled {:.6} +- {:.6}",
                est.mean,
                est.stderr
            );
        }
    }
}

/// Krawtchouk certificates: the binomial-weighted orthogonality identity
/// exactly for all N <= 24, both pointwise bounds exhaustively for N <= 20,
/// and recurrence = defining sum for all N <= 30.
#[test]
fn krawtchouk_identities_hold() {
    for n in 0..=24usize {
        // values[x][i] = K_i^N(x), computed by the defining sum.
        let values: Vec<Vec<BigInt>> = (0..=n)
            .map(|x| (0..=n).map(|i| krawtchouk(i, n, x).unwrap()).collect())
            .collect();
        for i in 0..=n {
            for j in i..=n {
                let mut acc = BigInt::from(0);
                for x in 0..=n {
                    acc += binomial(n as u64, x as u64) * &values[x][i] * &values[x][j];
                }
                let expected = if i == j {
                    (BigInt::from(1) << n) * binomial(n as u64, i as u64)
                } else {
                    BigInt::from(0)
                };
                assert_eq!(acc, expected, "orthogonality fails at N={n}, i={i}, j={j}");
            }
        }
    }

    for n in 0..=20usize {
        for t in 0..=n {
            for i in 0..=n {
                let v = abs_to_f64(&krawtchouk(i, n, t).unwrap());
                let ob = orth_bound(i, n, t);
                let db = derksen_bound(i, n, t);
                assert!(v <= ob * (1.0 + 1e-12), "bound 1 fails at N={n}, i={i}, t={t}");
                assert!(v <= db * (1.0 + 1e-12), "bound 2 fails at N={n}, i={i}, t={t}");
            }
        }
    }

    for n in 0..=30usize {
        for x in 0..=n {
            let row = krawtchouk_row(n, x, n).unwrap();
            for (i, value) in row.iter().enumerate() {
                assert_eq!(
                    *value,
                    krawtchouk(i, n, x).unwrap(),
                    "recurrence deviates at N={n}, x={x}, i={i}"
                );
            }
        }
    }
}

/// The symmetric GF(2) rank law: product formula = exhaustive enumeration
/// for n <= 5 (exact), chi-squared agreement with 1e5 sampled matrices at
/// n in {4, 8, 16} (p > 1e-3), and the Gaussian sandwich for all n <= 30.
#[test]
fn rank_distribution_certificates() {
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        let mut counts = vec![0u64; n / 2 + 1];
        for mask in 0u64..(1 << pairs) {
            let mut m = BitMatrix::zero(n);
            let mut bit = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    m.set_sym(i, j, mask >> bit & 1 == 1);
                    bit += 1;
                }
            }
            counts[rank_gf2(&m) / 2] += 1;
        }
        let dist = rank_distribution_exact(n).unwrap();
        for (h, &count) in counts.iter().enumerate() {
            let expected = ExactRational::new(BigInt::from(count), BigInt::from(1u64) << pairs);
            assert_eq!(
                dist.prob_rank(2 * h),
                expected,
                "exact law differs from enumeration at n={n}, rank={}",
                2 * h
            );
        }
    }

    for (n, seed) in [(4usize, 21u64), (8, 22), (16, 23)] {
        let samples = 100_000usize;
        let dist = rank_distribution_exact(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut observed = vec![0u64; n / 2 + 1];
        for _ in 0..samples {
            observed[rank_gf2(&sample_adjacency_with(n, &mut rng)) / 2] += 1;
        }
        let expected: Vec<f64> = (0..=n / 2)
            .map(|h| rational_to_f64(&dist.prob_rank(2 * h)) * samples as f64)
            .collect();
        let p = chi2_p_value(&observed, &expected);
        println!("chi-squared at n={n}: p = {p:.4}");
        assert!(p > 1e-3, "sampled ranks at n={n} reject the exact law (p = {p:.2e})");
    }

    for n in 1..=30usize {
        let dist = rank_distribution_exact(n).unwrap();
        for h in 0..=n / 2 {
            let p = rational_to_f64(&dist.prob_rank(2 * h));
            let (lo, hi) = rank_distribution_gaussian_bounds(n, h);
            assert!(
                (lo..=hi).contains(&p),
                "sandwich fails at n={n}, h={h}: {lo:.3e} <= {p:.3e} <= {hi:.3e}"
            );
        }
    }
}

/// The rank-deficiency chain: prediction within TV 0.02 of direct matrix
/// growth at 1e5 samples (k = 10), stationary fixed-point residual below
/// 1e-10, and stationary law within 1e-6 of the exact marginal at n = 120.
#[test]
fn markov_chain_convergence() {
    let cmp = markov_evolve_vs_growth(0, 0, 10, 100_000, 31).unwrap();
    println!("chain vs growth: tv = {:.5}", cmp.tv);
    assert!(cmp.tv <= 0.02, "TV distance {:.5} exceeds 0.02", cmp.tv);

    for parity in [Parity::Even, Parity::Odd] {
        let pi = stationary_deficiency(parity, 64).unwrap();
        let stepped = markov_step(&markov_step(&pi));
        let residual: f64 = pi
            .probs()
            .iter()
            .zip(stepped.probs())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            + stepped.leak();
        assert!(
            residual <= 1e-10,
            "stationary residual {residual:.2e} exceeds 1e-10 on {parity:?}"
        );
    }

    let marginal = deficiency_marginal_f64(120).unwrap();
    let pi = stationary_deficiency(Parity::Even, 64).unwrap();
    for (d, p) in marginal {
        if d <= 64 {
            let gap = (p - pi.probs()[d]).abs();
            assert!(
                gap <= 1e-6,
                "stationary law off by {gap:.2e} at deficiency {d} vs the n = 120 marginal"
            );
        }
    }
}

/// The product-state search never beats its certificate: alternating
/// optimization seeded at the best real-stabilizer product state reaches at
/// least overlap 2^-(n - D_max), so -log2(overlap) <= n - D_max. Anchors:
/// the two-vertex complete graph scores exactly 1, stars have deficiency
/// n - 1 (their product overlap is exactly 1/2), complete graphs have
/// deficiency exactly 1, all certified exhaustively.
#[test]
fn entanglement_bound_coherence() {
    for n in [6usize, 8, 10] {
        for trial in 0..100u64 {
            let g = sample_erdos_renyi(n, 0.5, 1000 * n as u64 + trial).unwrap();
            let d = max_rank_deficiency(&g, DeficiencyMethod::Exhaustive, 0, 0)
                .unwrap()
                .deficiency;
            let (_, overlap) =
                als_product_overlap(&g, 1, AlsInit::RealStabilizer, 1e-12, trial).unwrap();
            let eg = -overlap.log2();
            assert!(
                eg <= (n - d) as f64 + 1e-9,
                "n={n}, trial {trial}: -log2(overlap) = {eg:.9} exceeds n - D = {}",
                n - d
            );
        }
    }

    let bell = Graph::complete(2);
    let (_, overlap) = als_product_overlap(&bell, 1, AlsInit::RealStabilizer, 1e-12, 0).unwrap();
    assert!(
        (-overlap.log2() - 1.0).abs() <= 1e-9,
        "two-vertex graph state must score exactly 1, got {}",
        -overlap.log2()
    );

    for n in 2..=8usize {
        let star_edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        let star = Graph::from_edges(n, &star_edges).unwrap();
        let d_star = max_rank_deficiency(&star, DeficiencyMethod::Exhaustive, 0, 0)
            .unwrap()
            .deficiency;
        assert_eq!(d_star, n - 1, "star on {n} vertices");
        let (_, overlap) =
            als_product_overlap(&star, 1, AlsInit::RealStabilizer, 1e-12, 0).unwrap();
        assert!(
            (overlap - 0.5).abs() <= 1e-9,
            "star product overlap at n={n}: {overlap}"
        );

        let d_complete = max_rank_deficiency(&Graph::complete(n), DeficiencyMethod::Exhaustive, 0, 0)
            .unwrap()
            .deficiency;
        assert_eq!(d_complete, 1, "complete graph on {n} vertices");
    }
}

/// Measuring out the inserted path vertices of a sparsified grid recovers
/// the plain grid exactly, with an explicit isomorphism witness. The
/// construction subdivides edges, so it starts at side length 2.
#[test]
fn sparsified_grid_reduction_recovers_grid() {
    for l in 2..=5usize {
        let report = reduce_sparsified_grid(l);
        assert!(
            report.matches_grid,
            "reduction at side {l} did not recover the grid"
        );
        assert_eq!(report.final_graph.n(), l * l);
        assert_eq!(report.grid_vertex_map.len(), l * l);
    }
}

/// Induced-subgraph counting: the 3x3 grid has exactly its 4 faces as
/// induced 4-cycles; sampled non-edge frequency over random 3-regular
/// graphs matches 1 - d/(n-1); and the sampled mean 4-cycle count at
/// (n=60, d=3) is gated to factor [0.5, 2.0] of the dense-regime
/// leading-order prediction.
#[test]
fn induced_subgraph_counts() {
    let c4 = pattern_by_name("c4").unwrap();
    assert_eq!(count_induced(&grid_graph(3), &c4).unwrap(), 4);

    let (n, d, samples, seed) = (60usize, 3usize, 1000usize, 41u64);
    let nonedge = pattern_by_name("nonedge").unwrap();
    let est = mc_induced_count(n, d, &nonedge, samples, seed).unwrap();
    let pairs = (n * (n - 1) / 2) as f64;
    let target = 1.0 - d as f64 / (n - 1) as f64;
    let diff = (est.mean / pairs - target).abs();
    let tol = 3.0 * est.stderr / pairs + 1e-12;
    assert!(
        diff <= tol,
        "non-edge frequency off by {diff:.2e} (tolerance {tol:.2e})"
    );

    let est = mc_induced_count(n, d, &c4, samples, seed).unwrap();
    let expected = expected_induced_count(n, d, &c4).unwrap();
    let ratio = est.mean / expected;
    println!(
        "4-cycles at (n={n}, d={d}): sampled mean {:.3} +- {:.3}, \
         dense-regime prediction {expected:.3}, ratio {ratio:.3}",
        est.mean, est.stderr
    );
    assert!(
        (0.5..=2.0).contains(&ratio),
        "sampled mean {:.3} is factor {ratio:.3} of the dense-regime prediction \
         {expected:.3}; at constant degree the true mean converges to the Poisson \
         value (d-1)^4/8 = 2 instead, so the dense-regime band cannot hold here",
        est.mean
    );
}

/// Sampled simplicity frequencies stay above their floors: 2^(-d^2) for the
/// half-edge pairing model and 2^(-d) for unions of perfect matchings, with
/// one-sided 3-sigma slack, for d in {2, 3} and n in {20, 50}.
#[test]
fn simplicity_frequency_bounds() {
    let samples = 2000usize;
    for d in [2usize, 3] {
        for n in [20usize, 50] {
            let mut simple = 0usize;
            for i in 0..samples {
                let mg = sample_pairing(n, d, 9100 + i as u64).unwrap();
                simple += is_simple(&mg) as usize;
            }
            let freq = simple as f64 / samples as f64;
            let sigma = (freq * (1.0 - freq) / samples as f64).sqrt();
            let floor = 2f64.powi(-((d * d) as i32));
            println!("pairing (n={n}, d={d}): simple frequency {freq:.4}, floor {floor:.4}");
            assert!(
                freq >= floor - 3.0 * sigma,
                "pairing simplicity {freq:.4} below floor {floor:.4} at (n={n}, d={d})"
            );

            let mut simple = 0usize;
            for i in 0..samples {
                let mg = sample_matching_model(n, d, 9300 + i as u64).unwrap();
                simple += is_simple(&mg) as usize;
            }
            let freq = simple as f64 / samples as f64;
            let sigma = (freq * (1.0 - freq) / samples as f64).sqrt();
            let floor = 2f64.powi(-(d as i32));
            println!("matching (n={n}, d={d}): simple frequency {freq:.4}, floor {floor:.4}");
            assert!(
                freq >= floor - 3.0 * sigma,
                "matching simplicity {freq:.4} below floor {floor:.4} at (n={n}, d={d})"
            );
        }
    }
}
