//! Cross-validation suites: every check pits two independent routes to the
//! same quantity against each other (exact formula vs enumeration, exact vs
//! Monte Carlo, chain prediction vs direct simulation).
//!
//! Stochastic checks use a three-way verdict. A comparison within four
//! standard errors passes if the standard error is small enough to be
//! informative (at most 5% of the target scale) and is reported as
//! inconclusive otherwise; a comparison beyond four standard errors fails.
//! Deterministic checks pass or fail outright.

use num_bigint::BigInt;
use serde_json::Value;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use entanglement::{
    deficiency_marginal_f64, markov_evolve_vs_growth, markov_step, rank_distribution_exact,
    rank_distribution_gaussian_bounds, stationary_deficiency, Parity,
};
use gf2_linalg::{rank_gf2, sample_adjacency_with, BitMatrix};
use graph_core::{grid_graph, sample_erdos_renyi, EnsembleSpec, Graph, Model};
use moments::{
    avg_matching_parity, exact_avg_m2_matching, exact_avg_m2_pairing, m2_statmech, mc_avg_m2,
    rational_to_f64, ExactRational, McMode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subgraphs::{count_induced, expected_induced_count, mc_induced_count, pattern_by_name};

use crate::cmds::angle_average_m2;
use crate::report::{render, Doc, Format, Meta, Rendered};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

fn check(name: &'static str, status: Status, detail: String) -> Check {
    Check {
        name,
        status,
        detail,
    }
}

/// Three-way verdict for a Monte Carlo estimate against an exact target.
fn gate(name: &'static str, target: f64, mean: f64, stderr: f64) -> Check {
    let diff = (mean - target).abs();
    let scale = target.abs().max(1.0);
    let status = if stderr > 0.0 && diff > 4.0 * stderr {
        Status::Fail
    } else if stderr > 0.05 * scale {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let detail = format!("target {target:.6}, estimate {mean:.6} +- {stderr:.6}");
    check(name, status, detail)
}

fn exact(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// Upper-tail chi-squared p-value, merging low-expectation cells (below 10)
/// into one tail cell so the asymptotic distribution applies.
pub fn chi2_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    let mut obs = Vec::new();
    let mut exp = Vec::new();
    let (mut tail_o, mut tail_e) = (0.0f64, 0.0f64);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 10.0 {
            tail_o += o as f64;
            tail_e += e;
        } else {
            obs.push(o as f64);
            exp.push(e);
        }
    }
    if tail_e > 0.0 {
        obs.push(tail_o);
        exp.push(tail_e);
    }
    if obs.len() < 2 {
        return 0.0; // too few informative cells to test
    }
    let stat: f64 = obs
        .iter()
        .zip(&exp)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = (obs.len() - 1) as f64;
    let dist = ChiSquared::new(dof).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

fn moments_suite(samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    // Closed forms against hand-computed values.
    let single = m2_statmech(&Graph::empty(1))?;
    let edge = m2_statmech(&Graph::complete(2))?;
    let pairing22 = exact_avg_m2_pairing(2, 2)?;
    let parity411 = avg_matching_parity(4, 1, 1)?;
    let parity622 = avg_matching_parity(6, 2, 2)?;
    let anchors_ok = single == exact(3, 2)
        && edge == exact(5, 4)
        && pairing22 == exact(9, 4)
        && parity411 == exact(1, 3)
        && parity622 == exact(-1, 15);
    checks.push(check(
        "moment_exact_anchors",
        if anchors_ok { Status::Pass } else { Status::Fail },
        format!(
            "single {single}, edge {edge}, pairing(2,2) {pairing22}, parities {parity411}, {parity622}"
        ),
    ));

    // Transfer-matrix value vs direct state construction on a 5-cycle.
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])?;
    let target = rational_to_f64(&m2_statmech(&c5)?);
    let est = angle_average_m2(&c5, samples, seed)?;
    checks.push(gate(
        "statevector_matches_statmech_c5",
        target,
        est.mean,
        est.stderr,
    ));

    // Closed-form ensemble averages vs sampled ensembles.
    let spec = EnsembleSpec {
        model: Model::Pairing { d: 2 },
        n: 2,
        seed,
    };
    let est = mc_avg_m2(&spec, samples, McMode::Statmech, 1)?;
    checks.push(gate(
        "pairing_mean_matches_formula",
        rational_to_f64(&pairing22),
        est.mean,
        est.stderr,
    ));

    let spec = EnsembleSpec {
        model: Model::Matching { d: 2 },
        n: 4,
        seed: seed.wrapping_add(1),
    };
    let target = rational_to_f64(&exact_avg_m2_matching(4, 2)?);
    let est = mc_avg_m2(&spec, samples, McMode::Statmech, 1)?;
    checks.push(gate(
        "matching_mean_matches_formula",
        target,
        est.mean,
        est.stderr,
    ));

    Ok(checks)
}

fn ranks_suite(samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    // Product formula vs full enumeration of 4x4 symmetric matrices.
    let n = 4;
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
    let dist = rank_distribution_exact(n)?;
    let total = BigInt::from(1u64 << pairs);
    let enum_ok = (0..=n / 2).all(|h| {
        dist.prob_rank(2 * h) == ExactRational::new(BigInt::from(counts[h]), total.clone())
    });
    checks.push(check(
        "rank_formula_matches_enumeration",
        if enum_ok { Status::Pass } else { Status::Fail },
        format!("counts {counts:?} over 2^{pairs} matrices"),
    ));

    // Sampled ranks vs the exact law.
    if samples < 1_000 {
        checks.push(check(
            "sampled_ranks_chi2",
            Status::Inconclusive,
            format!("{samples} samples is below the 1000 needed for the test"),
        ));
    } else {
        let n = 8;
        let dist = rank_distribution_exact(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut observed = vec![0u64; n / 2 + 1];
        for _ in 0..samples {
            let m = sample_adjacency_with(n, &mut rng);
            observed[rank_gf2(&m) / 2] += 1;
        }
        let expected: Vec<f64> = (0..=n / 2)
            .map(|h| rational_to_f64(&dist.prob_rank(2 * h)) * samples as f64)
            .collect();
        let p = chi2_p_value(&observed, &expected);
        checks.push(check(
            "sampled_ranks_chi2",
            if p > 1e-3 { Status::Pass } else { Status::Fail },
            format!("chi-squared p = {p:.4} over {samples} samples at n = {n}"),
        ));
    }

    // Gaussian sandwich on every probability up to n = 20.
    let mut sandwich_ok = true;
    for n in 1..=20 {
        let dist = rank_distribution_exact(n)?;
        for h in 0..=n / 2 {
            let p = rational_to_f64(&dist.prob_rank(2 * h));
            let (lo, hi) = rank_distribution_gaussian_bounds(n, h);
            if p < lo || p > hi {
                sandwich_ok = false;
            }
        }
    }
    checks.push(check(
        "gaussian_sandwich",
        if sandwich_ok { Status::Pass } else { Status::Fail },
        "bounds checked for every rank at n = 1..=20".into(),
    ));

    Ok(checks)
}

fn markov_suite(samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    // Chain prediction vs direct matrix growth.
    if samples < 1_000 {
        checks.push(check(
            "growth_matches_chain",
            Status::Inconclusive,
            format!("{samples} samples is below the 1000 needed for the test"),
        ));
    } else {
        let cmp = markov_evolve_vs_growth(0, 0, 10, samples, seed)?;
        let threshold = (6.3 / (samples as f64).sqrt()).max(0.02);
        checks.push(check(
            "growth_matches_chain",
            if cmp.tv <= threshold {
                Status::Pass
            } else {
                Status::Fail
            },
            format!("tv = {:.5} (threshold {threshold:.5})", cmp.tv),
        ));
    }

    // The stationary law is fixed by two steps, on both parity classes.
    let mut residual_max = 0.0f64;
    for parity in [Parity::Even, Parity::Odd] {
        let pi = stationary_deficiency(parity, 64)?;
        let stepped = markov_step(&markov_step(&pi));
        let residual: f64 = pi
            .probs()
            .iter()
            .zip(stepped.probs())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            + stepped.leak();
        residual_max = residual_max.max(residual);
    }
    checks.push(check(
        "stationary_fixed_point",
        if residual_max <= 1e-10 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("two-step residual {residual_max:.2e} (tolerance 1e-10)"),
    ));

    // The stationary law matches the exact finite marginal at n = 120.
    let marginal = deficiency_marginal_f64(120)?;
    let pi = stationary_deficiency(Parity::Even, 64)?;
    let mut gap_max = 0.0f64;
    for (d, p) in marginal {
        if d <= 64 {
            gap_max = gap_max.max((p - pi.probs()[d]).abs());
        }
    }
    checks.push(check(
        "stationary_matches_marginal",
        if gap_max <= 1e-6 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("max entry gap {gap_max:.2e} against the n = 120 law"),
    ));

    Ok(checks)
}

fn subgraphs_suite(samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    // A 3x3 grid has exactly its four faces as induced 4-cycles and no
    // triangles at all.
    let grid = grid_graph(3);
    let c4 = pattern_by_name("c4")?;
    let k3 = pattern_by_name("k3")?;
    let faces = count_induced(&grid, &c4)?;
    let triangles = count_induced(&grid, &k3)?;
    checks.push(check(
        "grid_face_count",
        if faces == 4 && triangles == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("4-cycles {faces} (want 4), triangles {triangles} (want 0)"),
    ));

    // Non-edge counts in a d-regular graph are forced by the degree sum, so
    // the sampled mean must hit the closed form to machine precision.
    let nonedge = pattern_by_name("nonedge")?;
    let (n, d) = (30usize, 3usize);
    let est = mc_induced_count(n, d, &nonedge, samples.clamp(1, 500), seed)?;
    let pairs = (n * (n - 1) / 2) as f64;
    let target = 1.0 - d as f64 / (n - 1) as f64;
    let gap = (est.mean / pairs - target).abs();
    checks.push(check(
        "nonedge_frequency_exact",
        if gap <= 1e-12 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("sampled non-edge frequency off by {gap:.2e}"),
    ));

    // Sampled triangle counts in dense random graphs vs the closed-form
    // mean: an independent Monte Carlo route through the exact counter.
    let er_samples = samples.clamp(1, 2_000);
    if er_samples < 100 {
        checks.push(check(
            "er_triangle_mean",
            Status::Inconclusive,
            format!("{er_samples} samples is below the 100 needed for the test"),
        ));
    } else {
        let n = 12;
        let p = 0.5;
        let values: Vec<f64> = (0..er_samples)
            .map(|i| {
                let host = sample_erdos_renyi(n, p, seed.wrapping_add(i as u64))?;
                Ok(count_induced(&host, &k3)? as f64)
            })
            .collect::<Result<_, CliError>>()?;
        let est = moments::MomentEstimate::from_values(&values, seed);
        let choose3 = (n * (n - 1) * (n - 2) / 6) as f64;
        let target = choose3 * p.powi(3);
        checks.push(gate("er_triangle_mean", target, est.mean, est.stderr));
    }

    // Dense-regime leading-order count against its explicit product form.
    let grid2 = pattern_by_name("grid:2")?;
    let (n, d) = (10_000usize, 200usize);
    let expected = expected_induced_count(n, d, &grid2)?;
    let (v, e) = (grid2.v() as i32, grid2.e() as i32);
    let explicit = (n as f64).powi(v - e)
        * (d as f64).powi(e)
        * (1.0 - d as f64 / n as f64).powi(v * (v - 1) / 2 - e);
    let ratio = expected * grid2.aut() as f64 / explicit;
    checks.push(check(
        "leading_order_product_form",
        if (ratio - 1.0).abs() <= 0.01 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("ratio {ratio:.5} (want 1 within 1%)"),
    ));

    Ok(checks)
}

/// Run one suite (or all of them) and render the report. The second return
/// value is the number of failed checks; the caller turns it into the exit
/// code after emitting the report.
pub fn run(
    suite: &str,
    samples: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<(Rendered, usize), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let checks = match suite {
        "moments" => moments_suite(samples, seed)?,
        "ranks" => ranks_suite(samples, seed)?,
        "markov" => markov_suite(samples, seed)?,
        "subgraphs" => subgraphs_suite(samples, seed)?,
        "all" => {
            let mut all = moments_suite(samples, seed)?;
            all.extend(ranks_suite(samples, seed)?);
            all.extend(markov_suite(samples, seed)?);
            all.extend(subgraphs_suite(samples, seed)?);
            all
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected moments, ranks, markov, subgraphs, or all)"
            )))
        }
    };

    let failures = checks.iter().filter(|c| c.status == Status::Fail).count();
    let inconclusive = checks
        .iter()
        .filter(|c| c.status == Status::Inconclusive)
        .count();
    let meta = Meta::new(
        "crosscheck",
        seed,
        &[
            ("suite", suite.to_string()),
            ("samples", samples.to_string()),
        ],
    );
    let check_values: Vec<Value> = checks
        .iter()
        .map(|c| {
            let mut obj = serde_json::Map::new();
            obj.insert("name".into(), Value::String(c.name.into()));
            obj.insert("status".into(), Value::String(c.status.as_str().into()));
            obj.insert("detail".into(), Value::String(c.detail.clone()));
            Value::Object(obj)
        })
        .collect();
    let doc = Doc::Object {
        fields: vec![
            ("suite", Value::String(suite.into())),
            ("samples", Value::from(samples)),
            ("checks", Value::Array(check_values)),
            ("failures", Value::from(failures)),
            ("inconclusive", Value::from(inconclusive)),
            ("passed", Value::from(failures == 0)),
        ],
    };
    let rendered = render(&meta, doc, format.unwrap_or(Format::Json))?;
    Ok((rendered, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_helper_behaves() {
        // Perfect agreement: p-value 1 up to rounding.
        let expected = [500.0, 300.0, 200.0];
        let observed = [500u64, 300, 200];
        assert!(chi2_p_value(&observed, &expected) > 0.99);
        // Gross disagreement: p-value essentially zero.
        let observed = [200u64, 300, 500];
        assert!(chi2_p_value(&observed, &expected) < 1e-6);
    }

    #[test]
    fn gate_verdicts() {
        assert_eq!(gate("x", 1.0, 1.01, 0.01).status, Status::Pass);
        assert_eq!(gate("x", 1.0, 2.0, 0.01).status, Status::Fail);
        assert_eq!(gate("x", 1.0, 1.1, 0.3).status, Status::Inconclusive);
    }
}
