use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{CooMatrix, CsscMatrix, Scalar};
use crate::error::{Error, Result};

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix<T = i64> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    col_indices: Vec<usize>,
    row_ptrs: Vec<usize>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn new(
        rows: usize,
        cols: usize,
        values: Vec<T>,
        col_indices: Vec<usize>,
        row_ptrs: Vec<usize>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCsr(msg));
        if row_ptrs.len() != rows + 1 {
            return bad(format!(
                "row_ptrs has length {}, expected {}",
                row_ptrs.len(),
                rows + 1
            ));
        }
        if row_ptrs[0] != 0 {
            return bad("row_ptrs[0] must be 0".into());
        }
        if values.len() != col_indices.len() || row_ptrs[rows] != values.len() {
            return bad(format!(
                "{} values, {} column indices, row_ptrs ends at {}",
                values.len(),
                col_indices.len(),
                row_ptrs[rows]
            ));
        }
        for i in 0..rows {
            if row_ptrs[i + 1] < row_ptrs[i] {
                return bad(format!("row_ptrs decreases at row {i}"));
            }
            let row = &col_indices[row_ptrs[i]..row_ptrs[i + 1]];
            if let Some(&j) = row.iter().find(|&&j| j >= cols) {
                return bad(format!("column index {j} out of range in row {i}"));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("column indices not strictly increasing in row {i}"));
            }
        }
        Ok(CsrMatrix {
            rows,
            cols,
            values,
            col_indices,
            row_ptrs,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CsrMatrix {
            rows,
            cols,
            values: Vec::new(),
            col_indices: Vec::new(),
            row_ptrs: vec![0; rows + 1],
        }
    }

    /// Build from a dense row-major matrix, keeping only non-zero entries.
    /// All rows must have length `cols`.
    pub fn from_dense(cols: usize, dense: &[Vec<T>]) -> Result<Self> {
        let mut values = Vec::new();
        let mut col_indices = Vec::new();
        let mut row_ptrs = vec![0];
        for (i, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidCsr(format!(
                    "dense row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_zero() {
                    values.push(v);
                    col_indices.push(j);
                }
            }
            row_ptrs.push(values.len());
        }
        CsrMatrix::new(dense.len(), cols, values, col_indices, row_ptrs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn row_ptrs(&self) -> &[usize] {
        &self.row_ptrs
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptrs[i + 1] - self.row_ptrs[i]
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let span = self.row_ptrs[i]..self.row_ptrs[i + 1];
        (&self.col_indices[span.clone()], &self.values[span])
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| {
                let mut row = vec![T::zero(); self.cols];
                let (cols, vals) = self.row(i);
                for (&j, &v) in cols.iter().zip(vals) {
                    row[j] = v;
                }
                row
            })
            .collect()
    }

    pub fn to_coo(&self) -> CooMatrix<T> {
        let triples = (0..self.rows)
            .flat_map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
            })
            .collect();
        CooMatrix::new(self.rows, self.cols, triples).expect("CSR indices are in range")
    }

    /// Rows `range` as a standalone matrix with the same column count.
    pub fn slice_rows(&self, range: Range<usize>) -> CsrMatrix<T> {
        assert!(range.end <= self.rows, "row range out of bounds");
        let lo = self.row_ptrs[range.start];
        let hi = self.row_ptrs[range.end];
        CsrMatrix {
            rows: range.len(),
            cols: self.cols,
            values: self.values[lo..hi].to_vec(),
            col_indices: self.col_indices[lo..hi].to_vec(),
            row_ptrs: self.row_ptrs[range.start..=range.end]
                .iter()
                .map(|p| p - lo)
                .collect(),
        }
    }

    pub fn to_cssc(&self) -> CsscMatrix<T> {
        CsscMatrix::from_csr(self)
    }
}
