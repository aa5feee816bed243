//! One function per subcommand. Each returns a [`Rendered`] document so
//! tests can inspect output without spawning the binary.

use std::path::Path;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use entanglement::{
    markov_evolve_vs_growth, max_rank_deficiency, rank_distribution_exact, DeficiencyMethod,
};
use gf2_linalg::{rank_gf2, sample_adjacency_with};
use graph_core::{reduce_sparsified_grid, EnsembleSpec, Model};
use moments::{
    exact_avg_m2_matching, exact_avg_m2_pairing, graph_state_distribution, m2_of_distribution,
    mc_avg_m2, rational_to_f64, AngleVector, McMode, MomentEstimate,
};
use subgraphs::{
    count_induced, expected_induced_count, mc_induced_count, pattern_by_name, PatternGraph,
    SubgraphError,
};

use crate::graph_io::{load_graph, GraphJson};
use crate::report::{render, Doc, Format, Meta, Rendered};
use crate::CliError;

/// Build a [`Model`] from the command-line pieces. `d` and `p` are mutually
/// exclusive and which one is required depends on the model name.
pub fn parse_model(name: &str, d: Option<usize>, p: Option<f64>) -> Result<Model, CliError> {
    let need_d = || d.ok_or_else(|| CliError::Usage(format!("model '{name}' requires --d")));
    match name {
        "pairing" => Ok(Model::Pairing { d: need_d()? }),
        "matching" => Ok(Model::Matching { d: need_d()? }),
        "uniform-regular" | "regular" => Ok(Model::UniformRegular { d: need_d()? }),
        "er" | "erdos-renyi" => {
            let p = p.ok_or_else(|| CliError::Usage(format!("model '{name}' requires --p")))?;
            Ok(Model::ErdosRenyi { p })
        }
        other => Err(CliError::Usage(format!(
            "unknown model '{other}' (expected pairing, matching, uniform-regular, or er)"
        ))),
    }
}

/// Canonical short form used in config hashes and output fields.
pub fn model_tag(model: &Model) -> String {
    match model {
        Model::Pairing { d } => format!("pairing(d={d})"),
        Model::Matching { d } => format!("matching(d={d})"),
        Model::UniformRegular { d } => format!("uniform-regular(d={d})"),
        Model::ErdosRenyi { p } => format!("er(p={p})"),
    }
}

/// Parse an inclusive `lo..hi` range.
pub fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("range '{s}' is not of the form lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().strip_prefix('=').unwrap_or(hi.trim()).trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(CliError::Usage(format!("range '{s}' is empty")));
    }
    Ok((lo, hi))
}

/// A pattern argument is either a built-in name (`c4`, `triangle`,
/// `grid:3`, ...) or a path to a graph JSON file.
pub fn resolve_pattern(arg: &str) -> Result<PatternGraph, CliError> {
    match pattern_by_name(arg) {
        Ok(p) => Ok(p),
        Err(SubgraphError::UnknownPattern { .. }) if Path::new(arg).exists() => {
            let g = load_graph(Path::new(arg))?;
            Ok(PatternGraph::new(g)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn pattern_summary(p: &PatternGraph) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("vertices".into(), Value::from(p.v()));
    obj.insert("edges".into(), Value::from(p.e()));
    obj.insert("automorphisms".into(), Value::from(p.aut()));
    obj.insert(
        "density".into(),
        Value::String(format!("{}/{}", p.density().numer(), p.density().denom())),
    );
    Value::Object(obj)
}

/// Draw one graph from an ensemble and print it in the interchange format.
pub fn sample(
    model: Model,
    n: usize,
    index: u64,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let spec = EnsembleSpec { model, n, seed };
    let g = spec.sample_graph(index)?;
    let j = GraphJson::from_graph(&g);
    let meta = Meta::new(
        "sample",
        seed,
        &[
            ("model", model_tag(&model)),
            ("n", n.to_string()),
            ("index", index.to_string()),
        ],
    );
    let doc = Doc::Object {
        fields: vec![
            ("model", Value::String(model_tag(&model))),
            ("index", Value::from(index)),
            ("n", Value::from(j.n)),
            ("edges", serde_json::to_value(&j.edges)?),
            ("edge_count", Value::from(g.edge_count())),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Exact ensemble-averaged collision moment over an inclusive range of n.
/// Sizes whose parity the model cannot realize are skipped.
pub fn m2_exact(
    model: &str,
    d: usize,
    n_range: &str,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let exact: fn(usize, usize) -> Result<moments::ExactRational, moments::MomentsError> =
        match model {
            "pairing" => exact_avg_m2_pairing,
            "matching" => exact_avg_m2_matching,
            other => {
                return Err(CliError::Usage(format!(
                    "m2-exact supports models pairing and matching, not '{other}'"
                )))
            }
        };
    if d == 0 || d > 8 {
        return Err(CliError::Usage(format!("--d must be in 1..=8, got {d}")));
    }
    let (lo, hi) = parse_range(n_range)?;
    if lo == 0 || hi > 64 {
        return Err(CliError::Usage(format!(
            "--n-range must lie within 1..64, got {n_range}"
        )));
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        let Ok(value) = exact(n, d) else {
            continue; // parity-invalid n for this model
        };
        rows.push(vec![
            model.to_string(),
            n.to_string(),
            d.to_string(),
            value.numer().to_string(),
            value.denom().to_string(),
            rational_to_f64(&value).to_string(),
        ]);
    }
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "no valid sizes for model {model} in {n_range}"
        )));
    }
    let meta = Meta::new(
        "m2-exact",
        seed,
        &[
            ("model", model.to_string()),
            ("d", d.to_string()),
            ("n_range", format!("{lo}..{hi}")),
        ],
    );
    let doc = Doc::Table {
        columns: &["model", "n", "d", "num", "den", "float_value"],
        rows,
        extra_meta: vec![],
    };
    render(&meta, doc, format.unwrap_or(Format::Csv))
}

/// Monte Carlo estimate of the ensemble-averaged collision moment.
pub fn m2_mc(
    model: Model,
    n: usize,
    samples: usize,
    mode: McMode,
    angle_samples: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let spec = EnsembleSpec { model, n, seed };
    let est = mc_avg_m2(&spec, samples, mode, angle_samples)?;
    let mode_str = match mode {
        McMode::Statmech => "statmech",
        McMode::Statevector => "statevector",
    };
    let meta = Meta::new(
        "m2-mc",
        seed,
        &[
            ("model", model_tag(&model)),
            ("n", n.to_string()),
            ("samples", samples.to_string()),
            ("mode", mode_str.to_string()),
            ("angle_samples", angle_samples.to_string()),
        ],
    );
    let doc = Doc::Object {
        fields: vec![
            ("model", Value::String(model_tag(&model))),
            ("n", Value::from(n)),
            ("mode", Value::String(mode_str.into())),
            ("samples", Value::from(est.samples)),
            ("angle_samples", Value::from(angle_samples)),
            ("mean", Value::from(est.mean)),
            ("stderr", Value::from(est.stderr)),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Mean collision moment of one fixed graph over uniform random angle
/// vectors, one stream per draw so the result is reproducible in parallel.
pub(crate) fn angle_average_m2(
    g: &graph_core::Graph,
    angle_samples: usize,
    seed: u64,
) -> Result<MomentEstimate, CliError> {
    let n = g.n();
    let values: Result<Vec<f64>, CliError> = (0..angle_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let theta = AngleVector::uniform(n, &mut rng);
            let dist = graph_state_distribution(g, &theta)?;
            Ok(m2_of_distribution(&dist))
        })
        .collect();
    Ok(MomentEstimate::from_values(&values?, seed))
}

/// Collision moment of one fixed graph by direct state construction, either
/// at explicitly given angles or averaged over uniform random angles.
pub fn m2_brute(
    host: &Path,
    angles: Option<&str>,
    angle_samples: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let g = load_graph(host)?;
    let n = g.n();
    let host_str = host.display().to_string();
    let meta_parts = |angle_desc: String| {
        vec![
            ("host", host_str.clone()),
            ("angles", angle_desc),
            ("angle_samples", angle_samples.to_string()),
        ]
    };
    let mut fields: Vec<(&'static str, Value)> = vec![
        ("n", Value::from(n)),
        ("edge_count", Value::from(g.edge_count())),
    ];
    let meta;
    if let Some(list) = angles {
        let parsed: Result<Vec<f64>, _> = list.split(',').map(|t| t.trim().parse()).collect();
        let theta =
            parsed.map_err(|_| CliError::Usage(format!("could not parse angles '{list}'")))?;
        if theta.len() != n {
            return Err(CliError::Usage(format!(
                "got {} angles for a graph on {n} vertices",
                theta.len()
            )));
        }
        let dist = graph_state_distribution(&g, &AngleVector::new(theta))?;
        fields.push(("m2", Value::from(m2_of_distribution(&dist))));
        meta = Meta::new("m2-brute", seed, &meta_parts(list.to_string()));
    } else {
        if angle_samples == 0 {
            return Err(CliError::Usage(
                "--angle-samples must be positive when --angles is not given".into(),
            ));
        }
        let est = angle_average_m2(&g, angle_samples, seed)?;
        fields.push(("mean", Value::from(est.mean)));
        fields.push(("stderr", Value::from(est.stderr)));
        fields.push(("angle_samples", Value::from(est.samples)));
        meta = Meta::new("m2-brute", seed, &meta_parts("uniform".into()));
    }
    render(&meta, Doc::Object { fields }, format.unwrap_or(Format::Json))
}

/// One binary Krawtchouk polynomial value, exact.
pub fn krawtchouk_value(
    i: usize,
    n: usize,
    x: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let value = krawtchouk::krawtchouk(i, n, x)?;
    let meta = Meta::new(
        "krawtchouk",
        seed,
        &[
            ("i", i.to_string()),
            ("n", n.to_string()),
            ("x", x.to_string()),
        ],
    );
    let doc = Doc::Object {
        fields: vec![
            ("i", Value::from(i)),
            ("n", Value::from(n)),
            ("x", Value::from(x)),
            ("value", Value::String(value.to_string())),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Exact GF(2) symmetric-matrix rank distribution, optionally with an
/// empirical column from sampled matrices.
pub fn rank_dist(
    n: usize,
    mc: Option<usize>,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let dist = rank_distribution_exact(n)?;
    let empirical = match mc {
        Some(0) => return Err(CliError::Usage("--mc must be positive".into())),
        Some(samples) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = vec![0usize; n / 2 + 1];
            for _ in 0..samples {
                let m = sample_adjacency_with(n, &mut rng);
                counts[rank_gf2(&m) / 2] += 1;
            }
            Some(
                counts
                    .into_iter()
                    .map(|c| c as f64 / samples as f64)
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    let mut rows = Vec::new();
    for h in 0..=(n / 2) {
        let rank = 2 * h;
        let prob = dist.prob_rank(rank);
        if prob.is_zero() {
            continue;
        }
        let mut row = vec![
            rank.to_string(),
            prob.numer().to_string(),
            prob.denom().to_string(),
            rational_to_f64(&prob).to_string(),
        ];
        if let Some(freqs) = &empirical {
            row.push(freqs[h].to_string());
        }
        rows.push(row);
    }
    let meta = Meta::new(
        "rank-dist",
        seed,
        &[
            ("n", n.to_string()),
            ("mc", mc.map_or("none".into(), |s| s.to_string())),
        ],
    );
    let columns: &'static [&'static str] = if empirical.is_some() {
        &["rank", "num", "den", "float", "empirical"]
    } else {
        &["rank", "num", "den", "float"]
    };
    let doc = Doc::Table {
        columns,
        rows,
        extra_meta: vec![],
    };
    render(&meta, doc, format.unwrap_or(Format::Csv))
}

/// Sampled distribution of the maximum principal-submatrix rank deficiency
/// over an ensemble.
#[allow(clippy::too_many_arguments)]
pub fn deficiency(
    model: Model,
    n: usize,
    samples: usize,
    method: DeficiencyMethod,
    budget: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let spec = EnsembleSpec { model, n, seed };
    spec.validate()?;
    let results: Result<Vec<usize>, CliError> = (0..samples as u64)
        .into_par_iter()
        .map(|index| {
            let g = spec.sample_graph(index)?;
            let res = max_rank_deficiency(&g, method, budget, seed.wrapping_add(index))?;
            Ok(res.deficiency)
        })
        .collect();
    let deficiencies = results?;
    let mut histogram = std::collections::BTreeMap::new();
    for &d in &deficiencies {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    let values: Vec<f64> = deficiencies.iter().map(|&d| d as f64).collect();
    let est = MomentEstimate::from_values(&values, seed);
    let method_str = match method {
        DeficiencyMethod::Exhaustive => "exhaustive",
        DeficiencyMethod::Heuristic => "heuristic",
    };
    let meta = Meta::new(
        "deficiency",
        seed,
        &[
            ("model", model_tag(&model)),
            ("n", n.to_string()),
            ("samples", samples.to_string()),
            ("method", method_str.to_string()),
            ("budget", budget.to_string()),
        ],
    );
    let hist_value = Value::Array(
        histogram
            .into_iter()
            .map(|(d, c)| Value::Array(vec![Value::from(d), Value::from(c)]))
            .collect(),
    );
    let doc = Doc::Object {
        fields: vec![
            ("model", Value::String(model_tag(&model))),
            ("n", Value::from(n)),
            ("samples", Value::from(samples)),
            ("method", Value::String(method_str.into())),
            ("budget", Value::from(budget)),
            ("mean", Value::from(est.mean)),
            ("stderr", Value::from(est.stderr)),
            ("histogram", hist_value),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Rank-deficiency Markov chain prediction versus direct matrix growth.
pub fn markov(
    k: usize,
    samples: usize,
    r0: usize,
    m0: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let cmp = markov_evolve_vs_growth(r0, m0, k, samples, seed)?;
    let d_max = m0 + k;
    let mut rows = Vec::new();
    for d in 0..=d_max {
        let chain_p = cmp.chain.probs().get(d).copied().unwrap_or(0.0);
        let emp = cmp.empirical.get(d).copied().unwrap_or(0.0);
        if chain_p == 0.0 && emp == 0.0 {
            continue;
        }
        rows.push(vec![d.to_string(), chain_p.to_string(), emp.to_string()]);
    }
    let meta = Meta::new(
        "markov",
        seed,
        &[
            ("k", k.to_string()),
            ("samples", samples.to_string()),
            ("r0", r0.to_string()),
            ("m0", m0.to_string()),
        ],
    );
    let doc = Doc::Table {
        columns: &["d", "chain_prob", "empirical_freq"],
        rows,
        extra_meta: vec![
            ("tv", cmp.tv.to_string()),
            ("leak", cmp.chain.leak().to_string()),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Csv))
}

/// Exact induced-subgraph count of a pattern inside a host graph.
pub fn induced_count(
    host: &Path,
    pattern_arg: &str,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let g = load_graph(host)?;
    let pattern = resolve_pattern(pattern_arg)?;
    let count = count_induced(&g, &pattern)?;
    let meta = Meta::new(
        "induced-count",
        seed,
        &[
            ("host", host.display().to_string()),
            ("pattern", pattern_arg.to_string()),
        ],
    );
    let doc = Doc::Object {
        fields: vec![
            ("host_n", Value::from(g.n())),
            ("host_edges", Value::from(g.edge_count())),
            ("pattern", pattern_summary(&pattern)),
            ("count", Value::from(count)),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Monte Carlo mean induced count over uniform random regular graphs, next
/// to the dense-regime leading-order prediction.
pub fn induced_mc(
    n: usize,
    d: usize,
    pattern_arg: &str,
    samples: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let pattern = resolve_pattern(pattern_arg)?;
    let est = mc_induced_count(n, d, &pattern, samples, seed)?;
    let expected = expected_induced_count(n, d, &pattern)?;
    let meta = Meta::new(
        "induced-mc",
        seed,
        &[
            ("n", n.to_string()),
            ("d", d.to_string()),
            ("pattern", pattern_arg.to_string()),
            ("samples", samples.to_string()),
        ],
    );
    let doc = Doc::Object {
        fields: vec![
            ("n", Value::from(n)),
            ("d", Value::from(d)),
            ("pattern", pattern_summary(&pattern)),
            ("samples", Value::from(est.samples)),
            ("mean", Value::from(est.mean)),
            ("stderr", Value::from(est.stderr)),
            ("expected_leading", Value::from(expected)),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}

/// Exact moment curves against their large-n limits, for plotting.
pub fn fig1(
    d_list: &str,
    n_max: usize,
    model: &str,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let models: Vec<&str> = match model {
        "pairing" => vec!["pairing"],
        "matching" => vec!["matching"],
        "both" => vec!["pairing", "matching"],
        other => {
            return Err(CliError::Usage(format!(
                "fig1 model must be pairing, matching, or both, not '{other}'"
            )))
        }
    };
    let ds: Result<Vec<usize>, _> = d_list.split(',').map(|t| t.trim().parse()).collect();
    let ds = ds.map_err(|_| CliError::Usage(format!("could not parse --d-list '{d_list}'")))?;
    if ds.is_empty() || ds.iter().any(|&d| d == 0 || d > 8) {
        return Err(CliError::Usage(format!(
            "--d-list entries must be in 1..=8, got '{d_list}'"
        )));
    }
    if !(4..=64).contains(&n_max) {
        return Err(CliError::Usage(format!(
            "--n-max must be in 4..=64, got {n_max}"
        )));
    }
    let mut rows = Vec::new();
    for m in &models {
        let exact: fn(usize, usize) -> Result<moments::ExactRational, moments::MomentsError> =
            match *m {
                "pairing" => exact_avg_m2_pairing,
                _ => exact_avg_m2_matching,
            };
        for &d in &ds {
            let asymptote = if d % 2 == 1 { 2.0 } else { 3.0 };
            for n in 4..=n_max {
                let Ok(value) = exact(n, d) else {
                    continue; // parity-invalid n for this model
                };
                rows.push(vec![
                    m.to_string(),
                    n.to_string(),
                    d.to_string(),
                    value.numer().to_string(),
                    value.denom().to_string(),
                    rational_to_f64(&value).to_string(),
                    asymptote.to_string(),
                ]);
            }
        }
    }
    let meta = Meta::new(
        "fig1",
        seed,
        &[
            ("d_list", d_list.to_string()),
            ("n_max", n_max.to_string()),
            ("model", model.to_string()),
        ],
    );
    let doc = Doc::Table {
        columns: &["model", "n", "d", "num", "den", "float_value", "asymptote"],
        rows,
        extra_meta: vec![],
    };
    render(&meta, doc, format.unwrap_or(Format::Csv))
}

/// Measure out the inserted path vertices of a sparsified grid and report
/// the reduction back to the plain grid.
pub fn reduce_sparsegrid(
    l: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    if !(2..=6).contains(&l) {
        return Err(CliError::Usage(format!("--l must be in 2..=6, got {l}")));
    }
    let report = reduce_sparsified_grid(l);
    let meta = Meta::new("reduce-sparsegrid", seed, &[("l", l.to_string())]);
    let doc = Doc::Object {
        fields: vec![
            ("l", Value::from(l)),
            ("isomorphic_to_grid", Value::from(report.matches_grid)),
            ("final_n", Value::from(report.final_graph.n())),
            ("measurements", Value::from(report.measurements)),
            (
                "measurement_sequence",
                serde_json::to_value(&report.measurement_sequence)?,
            ),
            (
                "grid_vertex_map",
                serde_json::to_value(&report.grid_vertex_map)?,
            ),
        ],
    };
    render(&meta, doc, format.unwrap_or(Format::Json))
}
