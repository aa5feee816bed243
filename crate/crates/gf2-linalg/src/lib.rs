//! Bit-packed square matrices over GF(2).
//!
//! The only kernels needed upstream are rank computation, principal-submatrix
//! extraction, and sampling of uniform symmetric zero-diagonal matrices
//! (random graph adjacencies). Rows are packed into `u64` words so rank runs
//! word-parallel, O(n³/64).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Square bit matrix over GF(2), row-major, `u64`-packed.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    /// All-zero n×n matrix.
    pub fn zero(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "index out of range");
        (self.rows[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i < self.n && j < self.n, "index out of range");
        let w = i * self.words + j / 64;
        let mask = 1u64 << (j % 64);
        if bit {
            self.rows[w] |= mask;
        } else {
            self.rows[w] &= !mask;
        }
    }

    /// Sets both (i,j) and (j,i); refuses the diagonal.
    pub fn set_sym(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i != j, "diagonal must stay zero for adjacency use");
        self.set(i, j, bit);
        self.set(j, i, bit);
    }

    /// Flips both (i,j) and (j,i); refuses the diagonal.
    pub fn flip_sym(&mut self, i: usize, j: usize) {
        let b = self.get(i, j);
        self.set_sym(i, j, !b);
    }

    /// The packed words of row `i`.
    pub fn row(&self, i: usize) -> &[u64] {
        assert!(i < self.n, "row out of range");
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// Row `i` as a single word; requires n ≤ 64.
    pub fn row_mask(&self, i: usize) -> u64 {
        assert!(self.n <= 64, "row_mask needs n <= 64");
        if self.words == 0 {
            0
        } else {
            self.rows[i * self.words]
        }
    }

    pub fn is_symmetric_zero_diag(&self) -> bool {
        for i in 0..self.n {
            if self.get(i, i) {
                return false;
            }
            for j in i + 1..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix(n={})", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", if self.get(i, j) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// GF(2) row rank. Works on a copy; the input is untouched.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    let n = m.n;
    let w = m.words;
    let mut a = m.rows.clone();
    let mut pivot_buf = vec![0u64; w];
    let mut rank = 0;
    for col in 0..n {
        let word = col / 64;
        let bit = col % 64;
        let mut piv = None;
        for r in rank..n {
            if (a[r * w + word] >> bit) & 1 == 1 {
                piv = Some(r);
                break;
            }
        }
        let Some(p) = piv else { continue };
        if p != rank {
            for k in 0..w {
                a.swap(p * w + k, rank * w + k);
            }
        }
        pivot_buf.copy_from_slice(&a[rank * w..(rank + 1) * w]);
        for r in rank + 1..n {
            if (a[r * w + word] >> bit) & 1 == 1 {
                for k in 0..w {
                    a[r * w + k] ^= pivot_buf[k];
                }
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

/// The |s|×|s| submatrix on rows and columns `s`, taken in ascending order.
/// Duplicate indices are ignored; indices must lie in [0, n).
pub fn principal_submatrix(m: &BitMatrix, s: &[usize]) -> BitMatrix {
    let mut idx: Vec<usize> = s.to_vec();
    idx.sort_unstable();
    idx.dedup();
    assert!(
        idx.last().is_none_or(|&v| v < m.n),
        "submatrix index out of range"
    );
    let mut out = BitMatrix::zero(idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            if m.get(i, j) {
                out.set(a, b, true);
            }
        }
    }
    out
}

/// Principal submatrix on the vertex set encoded as a bitmask; requires n ≤ 64.
pub fn principal_submatrix_mask(m: &BitMatrix, mask: u64) -> BitMatrix {
    assert!(m.n <= 64, "mask form needs n <= 64");
    let idx: Vec<usize> = (0..m.n).filter(|&v| (mask >> v) & 1 == 1).collect();
    principal_submatrix(m, &idx)
}

/// Uniform symmetric zero-diagonal n×n matrix: each entry above the diagonal
/// an independent fair bit, mirrored below.
pub fn sample_adjacency(n: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_adjacency_with(n, &mut rng)
}

/// Same as [`sample_adjacency`] but drawing from a caller-supplied generator.
pub fn sample_adjacency_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut m = BitMatrix::zero(n);
    let mut buf: u64 = 0;
    let mut left = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if left == 0 {
                buf = rng.random();
                left = 64;
            }
            let bit = buf & 1 == 1;
            buf >>= 1;
            left -= 1;
            if bit {
                m.set_sym(i, j, true);
            }
        }
    }
    m
}
