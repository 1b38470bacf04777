use serde::{Deserialize, Serialize};

use super::{CsrMatrix, Scalar};
use crate::error::{Error, Result};

/// Coordinate-list matrix: `(row, col, value)` triples in any order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooMatrix<T = i64> {
    rows: usize,
    cols: usize,
    triples: Vec<(usize, usize, T)>,
}

impl<T: Scalar> CooMatrix<T> {
    pub fn new(rows: usize, cols: usize, triples: Vec<(usize, usize, T)>) -> Result<Self> {
        if let Some(&(row, col, _)) = triples.iter().find(|&&(i, j, _)| i >= rows || j >= cols) {
            return Err(Error::EntryOutOfRange {
                row,
                col,
                rows,
                cols,
            });
        }
        Ok(CooMatrix {
            rows,
            cols,
            triples,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn triples(&self) -> &[(usize, usize, T)] {
        &self.triples
    }

    pub fn into_triples(self) -> Vec<(usize, usize, T)> {
        self.triples
    }

    /// Apply `f` to every value, dropping entries that map to zero.
    pub fn map_values<U: Scalar>(&self, f: impl Fn(T) -> U) -> CooMatrix<U> {
        CooMatrix {
            rows: self.rows,
            cols: self.cols,
            triples: self
                .triples
                .iter()
                .map(|&(i, j, v)| (i, j, f(v)))
                .filter(|(_, _, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Canonical CSR: column indices sorted within each row, explicit zeros
    /// dropped. Duplicate coordinates are rejected rather than summed.
    pub fn to_csr(&self) -> Result<CsrMatrix<T>> {
        let mut coords: Vec<(usize, usize)> =
            self.triples.iter().map(|&(i, j, _)| (i, j)).collect();
        coords.sort_unstable();
        if let Some(w) = coords.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEntry {
                row: w[0].0,
                col: w[0].1,
            });
        }
        let mut entries: Vec<(usize, usize, T)> = self
            .triples
            .iter()
            .copied()
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut row_ptrs = vec![0usize; self.rows + 1];
        for &(i, _, _) in &entries {
            row_ptrs[i + 1] += 1;
        }
        for i in 0..self.rows {
            row_ptrs[i + 1] += row_ptrs[i];
        }
        let (col_indices, values) = entries.into_iter().map(|(_, j, v)| (j, v)).unzip();
        CsrMatrix::new(self.rows, self.cols, values, col_indices, row_ptrs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry() {
        let coo = CooMatrix::new(1, 1, vec![(0, 0, 1i64)]).unwrap();
        assert_eq!(coo.to_csr().unwrap().to_dense(), vec![vec![1]]);
    }

    #[test]
    fn unsorted_input_canonicalizes() {
        let sorted = CooMatrix::new(2, 3, vec![(0, 1, 4i64), (1, 0, 2), (1, 2, 7)]).unwrap();
        let shuffled = CooMatrix::new(2, 3, vec![(1, 2, 7i64), (0, 1, 4), (1, 0, 2)]).unwrap();
        assert_eq!(sorted.to_csr().unwrap(), shuffled.to_csr().unwrap());
    }

    #[test]
    fn duplicates_rejected() {
        let coo = CooMatrix::new(2, 2, vec![(1, 1, 1i64), (0, 0, 2), (1, 1, 3)]).unwrap();
        assert!(matches!(
            coo.to_csr(),
            Err(Error::DuplicateEntry { row: 1, col: 1 })
        ));
        let with_zero = CooMatrix::new(2, 2, vec![(1, 1, 0i64), (1, 1, 3)]).unwrap();
        assert!(with_zero.to_csr().is_err());
    }

    #[test]
    fn explicit_zeros_dropped() {
        let coo = CooMatrix::new(2, 2, vec![(0, 0, 0i64), (1, 1, 5)]).unwrap();
        let csr = coo.to_csr().unwrap();
        assert_eq!(csr.nnz(), 1);
        assert_eq!(csr.to_dense(), vec![vec![0, 0], vec![0, 5]]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            CooMatrix::new(2, 2, vec![(2, 0, 1i64)]),
            Err(Error::EntryOutOfRange { row: 2, .. })
        ));
    }
}
