//! Alternating optimization of the product-state overlap with a graph state.
//! Serves as an independent oracle: the rank-deficiency bound promises a
//! product state with squared overlap exactly 2^{−(n−D_max)}, and seeding the
//! optimizer from that state must never end below it.

use crate::{DeficiencyMethod, EntanglementError};
use gf2_linalg::principal_submatrix;
use graph_core::Graph;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unnormalized product state, one unit two-vector per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    qubits: Vec<[Complex64; 2]>,
}

impl ProductState {
    pub fn new(qubits: Vec<[Complex64; 2]>) -> ProductState {
        for q in &qubits {
            let norm = q[0].norm_sqr() + q[1].norm_sqr();
            assert!(
                (norm - 1.0).abs() < 1e-12,
                "qubit vectors must be unit norm, got {norm}"
            );
        }
        ProductState { qubits }
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[[Complex64; 2]] {
        &self.qubits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlsInit {
    /// Haar-random qubit states on the first restart.
    Random,
    /// First restart seeded from the optimal real-stabilizer product state
    /// (computed from an exhaustive deficiency scan); later restarts random.
    RealStabilizer,
}

/// sign[z] = (−1)^{#edges inside z}, from adjacency rows as bit masks.
fn quadratic_signs(rows: &[u64]) -> Vec<f64> {
    let n = rows.len();
    let size = 1usize << n;
    let mut parity = vec![0u8; size];
    for z in 1..size {
        let j = (usize::BITS - 1 - z.leading_zeros()) as usize;
        let rest = z & !(1 << j);
        parity[z] = parity[rest] ^ ((rows[j] & rest as u64).count_ones() as u8 & 1);
    }
    parity
        .into_iter()
        .map(|p| if p == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// In-place unnormalized Walsh-Hadamard transform.
fn wht(values: &mut [f64]) {
    let size = values.len();
    let mut half = 1;
    while half < size {
        for block in (0..size).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (values[i], values[i + half]);
                values[i] = a + b;
                values[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

const RT2_INV: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The optimal real-stabilizer product state for a witness set S: qubits
/// outside S pinned to |0⟩, qubits in S set to (|0⟩ + (−1)^{x_j}|1⟩)/√2 with
/// the sign pattern x maximizing |Σ_{z⊆S} (−1)^{x·z + #edges inside z}|.
/// Its squared overlap with the graph state is 2^{−(n − deficiency(S))}.
fn real_stabilizer_qubits(g: &Graph, set: &[usize]) -> Vec<[Complex64; 2]> {
    let sub = principal_submatrix(g.adjacency(), set);
    let rows: Vec<u64> = (0..sub.n()).map(|i| sub.row_mask(i)).collect();
    let mut w = quadratic_signs(&rows);
    wht(&mut w);
    let best_x = (0..w.len())
        .max_by(|&a, &b| {
            w[a].abs()
                .partial_cmp(&w[b].abs())
                .unwrap()
                .then(b.cmp(&a))
        })
        .unwrap();

    let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut qubits = vec![zero; g.n()];
    for (pos, &v) in set.iter().enumerate() {
        let sign = if (best_x >> pos) & 1 == 0 { 1.0 } else { -1.0 };
        qubits[v] = [
            Complex64::new(RT2_INV, 0.0),
            Complex64::new(sign * RT2_INV, 0.0),
        ];
    }
    qubits
}

fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 2] {
    // Four standard normals via Box-Muller, then normalize.
    let mut gauss = [0.0f64; 4];
    for pair in gauss.chunks_mut(2) {
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        pair[0] = r * (std::f64::consts::TAU * u2).cos();
        pair[1] = r * (std::f64::consts::TAU * u2).sin();
    }
    let a = Complex64::new(gauss[0], gauss[1]);
    let b = Complex64::new(gauss[2], gauss[3]);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / norm, b / norm]
}

fn overlap_sq(qubits: &[[Complex64; 2]], amps: &[f64]) -> f64 {
    let n = qubits.len();
    let mut inner = Complex64::new(0.0, 0.0);
    for (z, &a) in amps.iter().enumerate() {
        let mut prod = Complex64::new(a, 0.0);
        for (k, q) in qubits.iter().enumerate() {
            prod *= q[(z >> k) & 1].conj();
        }
        inner += prod;
    }
    let _ = n;
    inner.norm_sqr()
}

const MAX_SWEEPS: usize = 10_000;

/// Maximize |⟨α|ψ_G⟩|² over product states α by alternating single-qubit
/// updates: with every other qubit fixed, the optimal qubit-j state is the
/// normalized environment vector, so the overlap never decreases. Stops when
/// a full sweep improves by less than `tol`. Returns the best state and its
/// squared overlap across restarts.
pub fn als_product_overlap(
    g: &Graph,
    restarts: usize,
    init: AlsInit,
    tol: f64,
    seed: u64,
) -> Result<(ProductState, f64), EntanglementError> {
    let n = g.n();
    if n > 12 {
        return Err(EntanglementError::AlsTooLarge { n, max: 12 });
    }
    let size = 1usize << n;
    let rows: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let scale = (size as f64).sqrt().recip();
    let amps: Vec<f64> = quadratic_signs(&rows)
        .into_iter()
        .map(|s| s * scale)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<[Complex64; 2]>, f64)> = None;
    for restart in 0..restarts.max(1) {
        let mut qubits = match init {
            AlsInit::RealStabilizer if restart == 0 => {
                let d = crate::max_rank_deficiency(g, DeficiencyMethod::Exhaustive, 0, 0)?;
                real_stabilizer_qubits(g, &d.best_set)
            }
            _ => (0..n).map(|_| haar_qubit(&mut rng)).collect(),
        };

        let mut prev = overlap_sq(&qubits, &amps);
        for _ in 0..MAX_SWEEPS {
            for j in 0..n {
                let mut env = [Complex64::new(0.0, 0.0); 2];
                for (z, &a) in amps.iter().enumerate() {
                    let mut prod = Complex64::new(a, 0.0);
                    for (k, q) in qubits.iter().enumerate() {
                        if k != j {
                            prod *= q[(z >> k) & 1].conj();
                        }
                    }
                    env[(z >> j) & 1] += prod;
                }
                // ⟨α|ψ⟩ = ⟨α_j, env⟩ is conjugate-linear in α_j, so by
                // Cauchy-Schwarz the maximizer is env itself, normalized.
                let norm = (env[0].norm_sqr() + env[1].norm_sqr()).sqrt();
                if norm > 1e-15 {
                    qubits[j] = [env[0] / norm, env[1] / norm];
                }
            }
            let cur = overlap_sq(&qubits, &amps);
            debug_assert!(cur >= prev - 1e-12, "sweep decreased overlap");
            let gain = cur - prev;
            prev = cur;
            if gain < tol {
                break;
            }
        }

        if best.as_ref().is_none_or(|(_, b)| prev > *b) {
            best = Some((qubits, prev));
        }
    }
    let (qubits, overlap) = best.expect("at least one restart runs");
    Ok((ProductState::new(qubits), overlap))
}
