//! Packing of CSSC aligned columns into ciphertext-sized chunks.
//!
//! Columns are taken greedily from left to right. A chunk's height `h` is
//! the height of its first (tallest) column, every column in it is padded to
//! `h` with value 0 and column index -1, and a column joins the chunk while
//! the padded area `h * (k + 1)` still fits in `s` slots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, CsscMatrix, Scalar};

/// Column-index sentinel for padding slots.
pub const PAD_INDEX: i64 = -1;

/// One ciphertext's worth of aligned columns, flattened column-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chunk<T = i64> {
    pub value_flat: Vec<T>,
    pub colidx_flat: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
}

impl<T> Chunk<T> {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn padding(&self) -> usize {
        self.colidx_flat.iter().filter(|&&c| c == PAD_INDEX).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkSet<T = i64> {
    pub chunks: Vec<Chunk<T>>,
    pub r_list: Vec<usize>,
    pub c_list: Vec<usize>,
    pub source_rows: usize,
    pub source_cols: usize,
    pub row_map: Vec<usize>,
}

impl<T> ChunkSet<T> {
    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn max_cols(&self) -> usize {
        self.c_list.iter().copied().max().unwrap_or(0)
    }
}

/// Greedy split of `heights` into `(first_column, column_count)` ranges.
pub fn plan_chunks(heights: &[usize], chunk_size: usize) -> Result<Vec<(usize, usize)>> {
    if let Some((column, &height)) = heights.iter().enumerate().find(|(_, &h)| h > chunk_size) {
        return Err(Error::ColumnTooTall {
            column,
            height,
            chunk_size,
        });
    }
    let mut plan = Vec::new();
    let mut start = 0;
    while start < heights.len() {
        let h = heights[start];
        let mut k = 1;
        while start + k < heights.len() && h * (k + 1) <= chunk_size {
            k += 1;
        }
        plan.push((start, k));
        start += k;
    }
    Ok(plan)
}

/// Split `m` into chunks of at most `chunk_size` slots each.
pub fn generate_chunks<T: Scalar>(m: &CsscMatrix<T>, chunk_size: usize) -> Result<ChunkSet<T>> {
    let heights = m.column_heights();
    let plan = plan_chunks(&heights, chunk_size)?;

    let mut chunks = Vec::with_capacity(plan.len());
    for &(start, k) in &plan {
        let h = heights[start];
        let mut value_flat = Vec::with_capacity(h * k);
        let mut colidx_flat = Vec::with_capacity(h * k);
        for j in start..start + k {
            let span = m.col_ptrs[j]..m.col_ptrs[j + 1];
            value_flat.extend_from_slice(&m.values[span.clone()]);
            colidx_flat.extend(m.col_indices[span].iter().map(|&c| c as i64));
            let pad = h - heights[j];
            value_flat.extend(std::iter::repeat_n(T::zero(), pad));
            colidx_flat.extend(std::iter::repeat_n(PAD_INDEX, pad));
        }
        chunks.push(Chunk {
            value_flat,
            colidx_flat,
            rows: h,
            cols: k,
        });
    }

    Ok(ChunkSet {
        r_list: chunks.iter().map(|c| c.rows).collect(),
        c_list: chunks.iter().map(|c| c.cols).collect(),
        chunks,
        source_rows: m.rows,
        source_cols: m.cols,
        row_map: m.row_map.clone(),
    })
}

/// Split `m` into consecutive row blocks of at most `chunk_size` rows, so
/// that no aligned column of any block is taller than a chunk.
pub fn partition_rows<T: Scalar>(m: &CsrMatrix<T>, chunk_size: usize) -> Vec<CsrMatrix<T>> {
    assert!(chunk_size > 0, "chunk size must be positive");
    if m.rows() <= chunk_size {
        return vec![m.clone()];
    }
    (0..m.rows())
        .step_by(chunk_size)
        .map(|lo| m.slice_rows(lo..(lo + chunk_size).min(m.rows())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Matrix whose aligned-column heights are exactly `heights`.
    fn staircase(heights: &[usize], cols: usize) -> CsrMatrix<i64> {
        let rows = heights.first().copied().unwrap_or(0);
        let dense: Vec<Vec<i64>> = (0..rows)
            .map(|i| {
                let n = heights.iter().filter(|&&h| h > i).count();
                (0..cols)
                    .map(|j| if j < n { (10 * i + j + 1) as i64 } else { 0 })
                    .collect()
            })
            .collect();
        CsrMatrix::from_dense(cols, &dense).unwrap()
    }

    #[test]
    fn greedy_by_padded_area() {
        let m = staircase(&[4, 2, 1], 3).to_cssc();
        assert_eq!(m.column_heights(), vec![4, 2, 1]);
        let set = generate_chunks(&m, 8).unwrap();
        assert_eq!(set.r_list, vec![4, 1]);
        assert_eq!(set.c_list, vec![2, 1]);
        let first = &set.chunks[0];
        assert_eq!(first.value_flat.len(), 8);
        assert_eq!(&first.colidx_flat[4..], &[1, 1, -1, -1]);
        assert_eq!(&first.value_flat[6..], &[0, 0]);
        assert_eq!(first.padding(), 2);
        assert_eq!(set.chunks[1].padding(), 0);
    }

    #[test]
    fn raw_count_rule_would_overflow() {
        // heights [3,2,1] with s=6 sum to 6 but need 9 padded slots
        let plan = plan_chunks(&[3, 2, 1], 6).unwrap();
        assert_eq!(plan, vec![(0, 2), (2, 1)]);
    }

    #[test]
    fn single_column_has_no_padding() {
        let m = staircase(&[5], 1).to_cssc();
        let set = generate_chunks(&m, 8).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.chunks[0].padding(), 0);
        assert_eq!((set.r_list[0], set.c_list[0]), (5, 1));
    }

    #[test]
    fn empty_matrix_has_no_chunks() {
        let m = CsrMatrix::<i64>::zeros(0, 0).to_cssc();
        assert!(generate_chunks(&m, 8).unwrap().is_empty());
        let m = CsrMatrix::<i64>::zeros(4, 4).to_cssc();
        assert!(generate_chunks(&m, 8).unwrap().is_empty());
    }

    #[test]
    fn too_tall_column_rejected() {
        let m = staircase(&[9, 1], 2).to_cssc();
        assert!(matches!(
            generate_chunks(&m, 8),
            Err(Error::ColumnTooTall {
                column: 0,
                height: 9,
                chunk_size: 8
            })
        ));
    }

    #[test]
    fn partition_counts() {
        let m = CsrMatrix::<i64>::zeros(10_000, 3);
        let parts = partition_rows(&m, 8192);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.rows() <= 8192));
        assert_eq!(parts.iter().map(|p| p.rows()).sum::<usize>(), 10_000);

        let small = CsrMatrix::<i64>::zeros(5, 3);
        assert_eq!(partition_rows(&small, 8), vec![small.clone()]);
        assert_eq!(partition_rows(&CsrMatrix::<i64>::zeros(100, 40), 30).len(), 4);
    }

    #[test]
    fn partition_preserves_rows() {
        let m = staircase(&[7, 5, 2], 4);
        let parts = partition_rows(&m, 3);
        let stacked: Vec<Vec<i64>> = parts.iter().flat_map(|p| p.to_dense()).collect();
        assert_eq!(stacked, m.to_dense());
    }
}
