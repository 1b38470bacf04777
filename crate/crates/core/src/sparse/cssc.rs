use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CsrMatrix, Scalar};

/// Compressed Sparse Sorted Column matrix.
///
/// Rows are sorted by descending non-zero count (ties keep their original
/// order), each row's non-zeros are shifted to the left, and the resulting
/// staircase is read column by column. Aligned column `j` holds the `j`-th
/// non-zero of every row that has more than `j` of them, so its height is
/// `col_ptrs[j + 1] - col_ptrs[j]` and heights never increase with `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsscMatrix<T = i64> {
    pub rows: usize,
    pub cols: usize,
    /// Non-zero values in aligned-column-major order.
    pub values: Vec<T>,
    /// Original column index of each entry of `values`.
    pub col_indices: Vec<usize>,
    /// `row_map[p]` is the original index of sorted row `p`.
    pub row_map: Vec<usize>,
    /// Prefix sums of aligned-column heights; length is max row nnz + 1.
    pub col_ptrs: Vec<usize>,
}

/// A broken [`CsscMatrix`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch { values: usize, col_indices: usize },
    RowMapLength { expected: usize, found: usize },
    ColPtrsEmpty,
    ColPtrsStart { first: usize },
    ColPtrsDecreasing { j: usize },
    ColPtrsEnd { last: usize, nnz: usize },
    HeightIncreasing { j: usize },
    HeightExceedsRows { j: usize, height: usize, rows: usize },
    RowMapNotPermutation,
    ColumnOutOfRange { position: usize, index: usize },
    RowNotIncreasing { row: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch {
                values,
                col_indices,
            } => write!(f, "VA has {values} entries but CI has {col_indices}"),
            Violation::RowMapLength { expected, found } => {
                write!(f, "RM has length {found}, expected {expected}")
            }
            Violation::ColPtrsEmpty => write!(f, "CP is empty"),
            Violation::ColPtrsStart { first } => write!(f, "CP[0] is {first}, expected 0"),
            Violation::ColPtrsDecreasing { j } => write!(f, "CP not non-decreasing at j={j}"),
            Violation::ColPtrsEnd { last, nnz } => {
                write!(f, "CP ends at {last} but there are {nnz} non-zeros")
            }
            Violation::HeightIncreasing { j } => {
                write!(f, "aligned-column height increases at j={j}")
            }
            Violation::HeightExceedsRows { j, height, rows } => write!(
                f,
                "aligned column j={j} has height {height}, more than {rows} rows"
            ),
            Violation::RowMapNotPermutation => write!(f, "RM not a permutation"),
            Violation::ColumnOutOfRange { position, index } => {
                write!(f, "CI[{position}]={index} out of column range")
            }
            Violation::RowNotIncreasing { row, j } => write!(
                f,
                "column indices of sorted row {row} not increasing at j={j}"
            ),
        }
    }
}

impl<T: Scalar> CsscMatrix<T> {
    /// Convert from CSR. Rows are ordered by descending nnz with ties broken
    /// by ascending original row index; within an aligned column, entries
    /// follow that row order.
    pub fn from_csr(m: &CsrMatrix<T>) -> Self {
        let mut row_map: Vec<usize> = (0..m.rows()).collect();
        row_map.sort_by_key(|&i| Reverse(m.row_nnz(i)));

        let max_row_nnz = row_map.first().map_or(0, |&i| m.row_nnz(i));
        let mut values = Vec::with_capacity(m.nnz());
        let mut col_indices = Vec::with_capacity(m.nnz());
        let mut col_ptrs = Vec::with_capacity(max_row_nnz + 1);
        col_ptrs.push(0);
        for j in 0..max_row_nnz {
            for &row in row_map.iter().take_while(|&&i| m.row_nnz(i) > j) {
                let (cols, vals) = m.row(row);
                values.push(vals[j]);
                col_indices.push(cols[j]);
            }
            col_ptrs.push(values.len());
        }

        CsscMatrix {
            rows: m.rows(),
            cols: m.cols(),
            values,
            col_indices,
            row_map,
            col_ptrs,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Number of aligned columns, i.e. the largest row nnz.
    pub fn aligned_columns(&self) -> usize {
        self.col_ptrs.len().saturating_sub(1)
    }

    pub fn column_heights(&self) -> Vec<usize> {
        self.col_ptrs.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Dense `rows x cols` matrix in sorted-row order: row `p` is original
    /// row `row_map[p]`.
    pub fn expand_sorted(&self) -> Vec<Vec<T>> {
        let mut dense = vec![vec![T::zero(); self.cols]; self.rows];
        for w in self.col_ptrs.windows(2) {
            for (p, k) in (w[0]..w[1]).enumerate() {
                dense[p][self.col_indices[k]] = self.values[k];
            }
        }
        dense
    }

    /// Dense matrix in original row order.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let sorted = self.expand_sorted();
        let mut dense = vec![Vec::new(); self.rows];
        for (row, &orig) in sorted.into_iter().zip(&self.row_map) {
            dense[orig] = row;
        }
        dense
    }

    /// Every broken invariant, empty when the matrix is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let nnz = self.values.len();
        if self.col_indices.len() != nnz {
            out.push(Violation::LengthMismatch {
                values: nnz,
                col_indices: self.col_indices.len(),
            });
        }
        if self.row_map.len() != self.rows {
            out.push(Violation::RowMapLength {
                expected: self.rows,
                found: self.row_map.len(),
            });
        }
        let mut seen = vec![false; self.rows];
        let is_perm = self.row_map.len() == self.rows
            && self
                .row_map
                .iter()
                .all(|&i| i < self.rows && !std::mem::replace(&mut seen[i], true));
        if !is_perm {
            out.push(Violation::RowMapNotPermutation);
        }
        for (position, &index) in self.col_indices.iter().enumerate() {
            if index >= self.cols {
                out.push(Violation::ColumnOutOfRange { position, index });
            }
        }

        let Some(&first) = self.col_ptrs.first() else {
            out.push(Violation::ColPtrsEmpty);
            return out;
        };
        if first != 0 {
            out.push(Violation::ColPtrsStart { first });
        }
        let mut monotone = true;
        for (j, w) in self.col_ptrs.windows(2).enumerate() {
            if w[1] < w[0] {
                out.push(Violation::ColPtrsDecreasing { j });
                monotone = false;
            }
        }
        let last = *self.col_ptrs.last().unwrap();
        if last != nnz {
            out.push(Violation::ColPtrsEnd { last, nnz });
        }
        // Height checks only make sense on a well-formed prefix sum.
        if !monotone || first != 0 || last != nnz || self.col_indices.len() != nnz {
            return out;
        }

        let heights = self.column_heights();
        for (j, w) in heights.windows(2).enumerate() {
            if w[1] > w[0] {
                out.push(Violation::HeightIncreasing { j: j + 1 });
            }
        }
        for (j, &height) in heights.iter().enumerate() {
            if height > self.rows {
                out.push(Violation::HeightExceedsRows {
                    j,
                    height,
                    rows: self.rows,
                });
            }
        }
        if out.is_empty() {
            // Walk each sorted row left to right: original column indices
            // must keep their CSR order.
            for row in 0..heights.first().copied().unwrap_or(0) {
                let mut prev: Option<usize> = None;
                for (j, _) in heights.iter().enumerate().take_while(|(_, &h)| h > row) {
                    let col = self.col_indices[self.col_ptrs[j] + row];
                    if prev.is_some_and(|p| p >= col) {
                        out.push(Violation::RowNotIncreasing { row, j });
                    }
                    prev = Some(col);
                }
            }
        }
        out
    }
}
