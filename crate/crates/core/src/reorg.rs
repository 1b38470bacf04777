//! Client B's side: lay the dense vector out so that slot `k` of each chunk
//! holds the vector entry matching the chunk's column index at `k`.

use crate::chunker::PAD_INDEX;
use crate::error::{Error, Result};

/// Per-chunk aligned copies of the vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReorgVector {
    pub segments: Vec<Vec<i64>>,
}

/// Gather `vector[idx]` for every column index; padding (-1) becomes 0.
pub fn reorg_segment(vector: &[i64], colidx: &[i64]) -> Result<Vec<i64>> {
    colidx
        .iter()
        .map(|&idx| match idx {
            PAD_INDEX => Ok(0),
            i if i >= 0 && (i as usize) < vector.len() => Ok(vector[i as usize]),
            i => Err(Error::IndexOutOfRange {
                index: i,
                len: vector.len(),
            }),
        })
        .collect()
}

pub fn reorg_vector<'a, I>(vector: &[i64], colidx_per_chunk: I) -> Result<ReorgVector>
where
    I: IntoIterator<Item = &'a [i64]>,
{
    let segments = colidx_per_chunk
        .into_iter()
        .map(|idx| reorg_segment(vector, idx))
        .collect::<Result<_>>()?;
    Ok(ReorgVector { segments })
}
