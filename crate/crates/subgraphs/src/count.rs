//! Exact induced-subgraph counting by vertex-subset enumeration.

use crate::{for_each_permutation, PatternGraph, SubgraphError};
use graph_core::Graph;
use rayon::prelude::*;

/// Cap on C(n, v): the v=4 sweet spot reaches hosts of ~300 vertices.
pub const ENUMERATION_BUDGET: u64 = 350_000_000;

/// C(n, k) with an early exit once it can no longer fit the budget check.
fn binomial_capped(n: usize, k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u128::from(u64::MAX) {
            return c;
        }
    }
    c
}

/// Pair slot of (i, j), i < j, in lexicographic order over v vertices.
fn pair_index(v: usize, i: usize, j: usize) -> usize {
    i * (2 * v - i - 1) / 2 + (j - i - 1)
}

/// All adjacency codes of labeled graphs isomorphic to the pattern: the orbit
/// of its code under S_v, as a lookup table over the 2^C(v,2) codes.
fn isomorphism_table(pattern: &PatternGraph) -> Vec<bool> {
    let v = pattern.v();
    let edges = pattern.graph().edges();
    let mut table = vec![false; 1 << (v * (v - 1) / 2)];
    for_each_permutation(v, &mut |perm| {
        let mut code = 0usize;
        for &(a, b) in &edges {
            let (i, j) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            code |= 1 << pair_index(v, i, j);
        }
        table[code] = true;
    });
    table
}

/// Number of vertex subsets of the host whose induced subgraph is isomorphic
/// to the pattern (the unlabelled count).
pub fn count_induced(host: &Graph, pattern: &PatternGraph) -> Result<u64, SubgraphError> {
    let v = pattern.v();
    let n = host.n();
    if v > 6 {
        return Err(SubgraphError::PatternTooLarge { v, max: 6 });
    }
    if n < v {
        return Ok(0);
    }
    if binomial_capped(n, v) > u128::from(ENUMERATION_BUDGET) {
        return Err(SubgraphError::EnumerationBudget {
            n,
            v,
            budget: ENUMERATION_BUDGET,
        });
    }
    let table = isomorphism_table(pattern);
    let words = n.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; n];
    for (a, b) in host.edges() {
        rows[a][b / 64] |= 1 << (b % 64);
        rows[b][a / 64] |= 1 << (a % 64);
    }
    let adj = |a: usize, b: usize| (rows[a][b / 64] >> (b % 64)) & 1 == 1;

    let count = (0..=(n - v))
        .into_par_iter()
        .map(|first| {
            let mut local = 0u64;
            // Odometer over the remaining v-1 indices, all above `first`.
            let mut idx = vec![0usize; v];
            idx[0] = first;
            for (slot, cell) in idx.iter_mut().enumerate().skip(1) {
                *cell = first + slot;
            }
            loop {
                let mut code = 0usize;
                for p in 0..v {
                    for q in (p + 1)..v {
                        if adj(idx[p], idx[q]) {
                            code |= 1 << pair_index(v, p, q);
                        }
                    }
                }
                local += table[code] as u64;
                // Advance the tail combination; `first` stays put.
                let mut slot = v - 1;
                loop {
                    if slot == 0 {
                        return local;
                    }
                    if idx[slot] < n - v + slot {
                        idx[slot] += 1;
                        for s in (slot + 1)..v {
                            idx[s] = idx[s - 1] + 1;
                        }
                        break;
                    }
                    slot -= 1;
                }
            }
        })
        .sum();
    Ok(count)
}
