//! Maximum rank deficiency over principal submatrices of a graph's adjacency
//! matrix: D_max = max_S (|S| − rank A[S]). The real-stabilizer product
//! overlap of the graph state is exactly 2^{−(n − D_max)}.

use crate::EntanglementError;
use gf2_linalg::{principal_submatrix, principal_submatrix_mask, rank_gf2};
use graph_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficiencyMethod {
    /// Scan all 2ⁿ vertex subsets (n ≤ 22).
    Exhaustive,
    /// Random-restart hill climbing; reported value is a certified lower
    /// bound on the true maximum.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyResult {
    pub best_set: Vec<usize>,
    pub deficiency: usize,
    pub method: DeficiencyMethod,
}

impl DeficiencyResult {
    /// Recompute |S| − rank A[S] on the stored witness set.
    pub fn recheck(&self, g: &Graph) -> usize {
        let sub = principal_submatrix(g.adjacency(), &self.best_set);
        self.best_set.len() - rank_gf2(&sub)
    }
}

fn deficiency_of_mask(g: &Graph, mask: u64) -> usize {
    let sub = principal_submatrix_mask(g.adjacency(), mask);
    mask.count_ones() as usize - rank_gf2(&sub)
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| (mask >> v) & 1 == 1).collect()
}

fn exhaustive_max(g: &Graph) -> (u64, usize) {
    let n = g.n();
    let size = 1u64 << n;
    let (deficiency, mask) = (0..size)
        .into_par_iter()
        .map(|mask| (deficiency_of_mask(g, mask), mask))
        .reduce(
            || (0, 0),
            // Highest deficiency wins; ties go to the smaller mask so the
            // witness is deterministic.
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    (mask, deficiency)
}

fn deficiency_of_set(g: &Graph, members: &[bool]) -> usize {
    let set: Vec<usize> = members
        .iter()
        .enumerate()
        .filter_map(|(v, &m)| m.then_some(v))
        .collect();
    let sub = principal_submatrix(g.adjacency(), &set);
    set.len() - rank_gf2(&sub)
}

/// Hill climbing with plateau moves from random and interval-structured
/// starts; 2n² single-vertex toggles per restart.
fn heuristic_max(g: &Graph, restarts: usize, seed: u64) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (n as f64).sqrt().ceil() as usize;
    let mut best_set: Vec<usize> = Vec::new();
    let mut best = 0usize;
    for restart in 0..restarts.max(1) {
        let mut members = vec![false; n];
        if restart % 2 == 0 {
            for m in members.iter_mut() {
                *m = rng.random::<bool>();
            }
        } else {
            // Union of a random half of the ⌈√n⌉-wide intervals.
            for chunk in 0..n.div_ceil(width) {
                if rng.random::<bool>() {
                    for v in (chunk * width)..((chunk + 1) * width).min(n) {
                        members[v] = true;
                    }
                }
            }
        }
        let mut cur = deficiency_of_set(g, &members);
        for _ in 0..(2 * n * n) {
            let v = rng.random_range(0..n);
            members[v] = !members[v];
            let cand = deficiency_of_set(g, &members);
            if cand >= cur {
                cur = cand;
            } else {
                members[v] = !members[v];
            }
            if cur > best {
                best = cur;
                best_set = members
                    .iter()
                    .enumerate()
                    .filter_map(|(u, &m)| m.then_some(u))
                    .collect();
            }
        }
    }
    (best_set, best)
}

/// Maximum of |S| − rank A[S] over vertex subsets S. `budget` is the restart
/// count in heuristic mode and ignored otherwise.
pub fn max_rank_deficiency(
    g: &Graph,
    mode: DeficiencyMethod,
    budget: usize,
    seed: u64,
) -> Result<DeficiencyResult, EntanglementError> {
    match mode {
        DeficiencyMethod::Exhaustive => {
            let n = g.n();
            if n > 22 {
                return Err(EntanglementError::ExhaustiveTooLarge { n, max: 22 });
            }
            let (mask, deficiency) = exhaustive_max(g);
            Ok(DeficiencyResult {
                best_set: mask_to_set(mask),
                deficiency,
                method: mode,
            })
        }
        DeficiencyMethod::Heuristic => {
            let (best_set, deficiency) = heuristic_max(g, budget, seed);
            Ok(DeficiencyResult {
                best_set,
                deficiency,
                method: mode,
            })
        }
    }
}

/// n − D_max: an upper bound on the geometric entanglement of the graph
/// state, and −log₂ of its best real-stabilizer product overlap.
pub fn real_stab_entanglement_bound(
    g: &Graph,
    mode: DeficiencyMethod,
    budget: usize,
    seed: u64,
) -> Result<f64, EntanglementError> {
    let res = max_rank_deficiency(g, mode, budget, seed)?;
    Ok((g.n() - res.deficiency) as f64)
}
