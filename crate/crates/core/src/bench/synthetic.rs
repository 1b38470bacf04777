//! Seeded random matrices and vectors.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sparse::CsrMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-zero value in `[-bound, bound]`.
pub fn nonzero_value<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// `rows x cols` matrix with exactly `nnz` non-zeros at uniformly random
/// distinct positions, values in `[-100, 100] \ {0}`.
pub fn random_matrix(rows: usize, cols: usize, nnz: usize, seed: u64) -> CsrMatrix {
    let mut rng = rng(seed);
    let cells = rows * cols;
    assert!(nnz <= cells, "{nnz} non-zeros do not fit in {rows}x{cols}");
    // index::sample is exact without replacement; for very sparse shapes a
    // rejection set avoids materializing the whole index range.
    let mut positions: Vec<usize> = if cells <= 1 << 22 {
        index::sample(&mut rng, cells, nnz).into_vec()
    } else {
        let mut seen = HashSet::with_capacity(nnz);
        while seen.len() < nnz {
            seen.insert(rng.gen_range(0..cells));
        }
        seen.into_iter().collect()
    };
    positions.sort_unstable();

    let mut row_ptrs = vec![0; rows + 1];
    let mut col_indices = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    for p in positions {
        row_ptrs[p / cols + 1] += 1;
        col_indices.push(p % cols);
        values.push(nonzero_value(&mut rng, 100));
    }
    for i in 0..rows {
        row_ptrs[i + 1] += row_ptrs[i];
    }
    CsrMatrix::new(rows, cols, values, col_indices, row_ptrs).expect("generated CSR is valid")
}

/// Random matrix whose number of non-zeros is `round(density * rows * cols)`.
pub fn random_matrix_with_density(rows: usize, cols: usize, density: f64, seed: u64) -> CsrMatrix {
    let nnz = (density * (rows * cols) as f64).round() as usize;
    random_matrix(rows, cols, nnz.min(rows * cols), seed)
}

/// Vector with entries in `[-bound, bound]`.
pub fn random_vector(len: usize, bound: i64, seed: u64) -> Vec<i64> {
    let mut rng = rng(seed);
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Matrices with geometrically spaced non-zero counts and a fixed average
/// number of non-zeros per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSuite {
    pub points: usize,
    pub min_nnz: usize,
    pub max_nnz: usize,
    pub nnz_per_row: usize,
    pub cols: usize,
    /// Slot count and chunk size used for every suite run.
    pub slots: usize,
    pub seed: u64,
}

impl Default for ScalingSuite {
    fn default() -> Self {
        ScalingSuite {
            points: 10,
            min_nnz: 100,
            max_nnz: 100_000,
            nnz_per_row: 8,
            cols: 1024,
            slots: 64,
            seed: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn generate(&self) -> CsrMatrix {
        random_matrix(self.rows, self.cols, self.nnz, self.seed)
    }
}

impl ScalingSuite {
    pub fn specs(&self) -> Vec<SyntheticSpec> {
        let n = self.points.max(1);
        let (lo, hi) = ((self.min_nnz.max(1)) as f64, (self.max_nnz.max(1)) as f64);
        (0..n)
            .map(|i| {
                let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                let nnz = (lo * (hi / lo).powf(f)).round() as usize;
                let rows = nnz.div_ceil(self.nnz_per_row.max(1)).max(1);
                SyntheticSpec {
                    rows,
                    cols: self.cols,
                    nnz: nnz.min(rows * self.cols),
                    seed: self.seed.wrapping_add(i as u64),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_nnz_and_value_range() {
        for (rows, cols, nnz) in [(5, 7, 0), (5, 7, 35), (40, 30, 100), (3000, 2000, 500)] {
            let m = random_matrix(rows, cols, nnz, 3);
            assert_eq!(m.nnz(), nnz);
            assert!(m.values().iter().all(|&v| v != 0 && (-100..=100).contains(&v)));
        }
    }

    #[test]
    fn seeded() {
        assert_eq!(random_matrix(20, 20, 50, 1), random_matrix(20, 20, 50, 1));
        assert_ne!(random_matrix(20, 20, 50, 1), random_matrix(20, 20, 50, 2));
        assert_eq!(random_vector(10, 5, 4), random_vector(10, 5, 4));
    }

    #[test]
    fn suite_spans_range() {
        let specs = ScalingSuite::default().specs();
        assert_eq!(specs.len(), 10);
        assert_eq!(specs[0].nnz, 100);
        assert_eq!(specs[9].nnz, 100_000);
        assert!(specs.windows(2).all(|w| w[0].nnz < w[1].nnz));
    }
}
