//! End-to-end encrypted SpMV between three parties.
//!
//! Client A owns the matrix, Client B owns the vector and the cloud does the
//! homomorphic work:
//!
//! 1. A converts the matrix to CSSC, chunks it, encrypts every chunk's
//!    values and uploads them with the chunk shapes. The chunk column
//!    indices go to B in the clear.
//! 2. B gathers its vector along those indices and uploads one encrypted
//!    segment per chunk.
//! 3. The cloud multiplies matching ciphertexts, sums each chunk's columns
//!    and adds the masked chunk results into one ciphertext, which it sends
//!    to the secret-key holder.
//! 4. The key holder decrypts and undoes the CSSC row permutation.
//!
//! Matrices taller than the chunk size go through [`Pipeline::run_partitioned`],
//! which runs the protocol once per row block and stacks the results.

mod protocol;

use serde::{Deserialize, Serialize};

pub use protocol::{
    audit_leakage, AuditReport, AuditRule, AuditViolation, Message, MessageKind, MessageLedger,
    PartyRole,
};

use crate::aggregator::aggregate;
use crate::chunker::{generate_chunks, partition_rows, ChunkSet};
use crate::error::{Error, Result};
use crate::he::{to_signed, HeBackend, HeParams, OpLedger, Simulator};
use crate::reorg::reorg_segment;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpmvResult {
    /// `M * v` in original row order, as centered residues modulo `t`.
    pub values: Vec<i64>,
    pub op_ledger: OpLedger,
    pub message_ledger: MessageLedger,
    pub n_ct: usize,
    /// `(r_i, c_i)` of every chunk, across all row blocks.
    pub chunk_shapes: Vec<(usize, usize)>,
    /// Lowest remaining budget over the decrypted results; `None` when the
    /// matrix had no non-zeros and nothing was encrypted.
    pub noise_budget_remaining_bits: Option<u32>,
}

impl SpmvResult {
    fn empty(rows: usize, key_holder: PartyRole) -> Self {
        SpmvResult {
            values: vec![0; rows],
            op_ledger: OpLedger::new(),
            message_ledger: MessageLedger::new(key_holder),
            n_ct: 0,
            chunk_shapes: Vec::new(),
            noise_budget_remaining_bits: None,
        }
    }

    /// Append the result of the next row block.
    fn stack(&mut self, next: SpmvResult) {
        self.values.extend(next.values);
        self.op_ledger += next.op_ledger;
        self.message_ledger.extend(&next.message_ledger);
        self.n_ct += next.n_ct;
        self.chunk_shapes.extend(next.chunk_shapes);
        self.noise_budget_remaining_bits = match (
            self.noise_budget_remaining_bits,
            next.noise_budget_remaining_bits,
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

/// Serialized size of the chunk shape list: a u32 count plus two u32s per
/// chunk.
fn shape_meta_bytes(n_chunks: usize) -> u64 {
    4 + 8 * n_chunks as u64
}

/// Serialized size of the per-chunk column index arrays: a u32 chunk count,
/// then per chunk a `(h, k)` header and `h * k` 4-byte indices.
fn column_index_bytes<T>(chunks: &ChunkSet<T>) -> u64 {
    4 + chunks
        .chunks
        .iter()
        .map(|c| 8 + 4 * c.colidx_flat.len() as u64)
        .sum::<u64>()
}

fn row_map_bytes(rows: usize) -> u64 {
    4 + 4 * rows as u64
}

/// Client A: encrypt every chunk's values.
pub fn encrypt_chunks<B: HeBackend>(
    backend: &B,
    chunks: &ChunkSet,
    ledger: &mut OpLedger,
) -> Result<Vec<B::Ciphertext>> {
    chunks
        .chunks
        .iter()
        .map(|c| Ok(backend.encrypt(&backend.encode(&c.value_flat)?, ledger)))
        .collect()
}

/// Client B: gather the vector along each chunk's column indices and
/// encrypt the segments.
pub fn encrypt_reorganized<B: HeBackend>(
    backend: &B,
    vector: &[i64],
    colidx_per_chunk: &[Vec<i64>],
    ledger: &mut OpLedger,
) -> Result<Vec<B::Ciphertext>> {
    colidx_per_chunk
        .iter()
        .map(|idx| {
            let segment = reorg_segment(vector, idx)?;
            Ok(backend.encrypt(&backend.encode(&segment)?, ledger))
        })
        .collect()
}

/// Cloud: one ciphertext product per chunk, then aggregation.
pub fn cloud_evaluate<B: HeBackend>(
    backend: &B,
    matrix_cts: &[B::Ciphertext],
    vector_cts: &[B::Ciphertext],
    r_list: &[usize],
    c_list: &[usize],
    ledger: &mut OpLedger,
) -> Result<B::Ciphertext> {
    assert_eq!(matrix_cts.len(), vector_cts.len());
    let products: Vec<B::Ciphertext> = matrix_cts
        .iter()
        .zip(vector_cts)
        .map(|(a, b)| backend.mult(a, b, ledger))
        .collect();
    aggregate(backend, &products, r_list, c_list, ledger)
}

/// Key holder: decrypt and place sorted row `p` at `row_map[p]`.
pub fn decrypt_result<B: HeBackend>(
    backend: &B,
    ct: &B::Ciphertext,
    row_map: &[usize],
    ledger: &mut OpLedger,
) -> Result<Vec<i64>> {
    let t = backend.params().plaintext_modulus;
    let mid = backend.decrypt(ct, ledger)?;
    let mut out = vec![0; row_map.len()];
    // Sorted rows past the slot count have no non-zeros.
    for (&orig, &slot) in row_map.iter().zip(mid.as_slice()) {
        out[orig] = to_signed(slot, t);
    }
    Ok(out)
}

/// Runs the three-party protocol on one backend.
#[derive(Debug, Clone)]
pub struct Pipeline<'a, B> {
    backend: &'a B,
    chunk_size: usize,
    key_holder: PartyRole,
}

impl<'a, B: HeBackend> Pipeline<'a, B> {
    /// Chunk size defaults to the backend's slot count; the key holder to A.
    pub fn new(backend: &'a B) -> Self {
        Pipeline {
            backend,
            chunk_size: backend.params().slot_count,
            key_holder: PartyRole::ClientA,
        }
    }

    pub fn chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    pub fn key_holder(mut self, holder: PartyRole) -> Self {
        self.key_holder = holder;
        self
    }

    fn check(&self, matrix: &CsrMatrix, vector: &[i64]) -> Result<()> {
        let slots = self.backend.params().slot_count;
        if self.chunk_size == 0 || self.chunk_size > slots {
            return Err(Error::InvalidParams(format!(
                "chunk size {} must be in [1, {slots}]",
                self.chunk_size
            )));
        }
        if self.key_holder == PartyRole::Cloud {
            return Err(Error::InvalidParams(
                "the cloud cannot hold the secret key".into(),
            ));
        }
        if matrix.cols() != vector.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.cols(),
                found: vector.len(),
            });
        }
        Ok(())
    }

    /// Single-block run. Fails with [`Error::ColumnTooTall`] when more rows
    /// share an aligned column than fit in one chunk.
    pub fn run(&self, matrix: &CsrMatrix, vector: &[i64]) -> Result<SpmvResult> {
        use MessageKind::*;
        use PartyRole::*;

        self.check(matrix, vector)?;
        let backend = self.backend;
        let params = backend.params();

        // Client A
        let cssc = matrix.to_cssc();
        let chunks = generate_chunks(&cssc, self.chunk_size)?;
        if chunks.is_empty() {
            return Ok(SpmvResult::empty(matrix.rows(), self.key_holder));
        }
        let n_ct = chunks.len();
        let mut ops = OpLedger::new();
        let mut wire = MessageLedger::new(self.key_holder);

        let matrix_cts = encrypt_chunks(backend, &chunks, &mut ops)?;
        wire.send(Message {
            from: ClientA,
            to: Cloud,
            kind: CiphertextBatch,
            payload_bytes: params.ciphertext_bytes(n_ct),
            ciphertext_count: n_ct,
        });
        wire.send(Message {
            from: ClientA,
            to: Cloud,
            kind: ChunkShapeMeta,
            payload_bytes: shape_meta_bytes(n_ct),
            ciphertext_count: 0,
        });
        let colidx: Vec<Vec<i64>> = chunks.chunks.iter().map(|c| c.colidx_flat.clone()).collect();
        wire.send(Message {
            from: ClientA,
            to: ClientB,
            kind: ColumnIndexPlain,
            payload_bytes: column_index_bytes(&chunks),
            ciphertext_count: 0,
        });
        if self.key_holder == ClientB {
            wire.send(Message {
                from: ClientA,
                to: ClientB,
                kind: RowMapPlain,
                payload_bytes: row_map_bytes(cssc.row_map.len()),
                ciphertext_count: 0,
            });
        }

        // Client B
        let vector_cts = encrypt_reorganized(backend, vector, &colidx, &mut ops)?;
        wire.send(Message {
            from: ClientB,
            to: Cloud,
            kind: CiphertextBatch,
            payload_bytes: params.ciphertext_bytes(n_ct),
            ciphertext_count: n_ct,
        });

        // Cloud
        let result_ct = cloud_evaluate(
            backend,
            &matrix_cts,
            &vector_cts,
            &chunks.r_list,
            &chunks.c_list,
            &mut ops,
        )?;
        wire.send(Message {
            from: Cloud,
            to: self.key_holder,
            kind: ResultCiphertext,
            payload_bytes: params.ciphertext_bytes(1),
            ciphertext_count: 1,
        });

        // Key holder
        let values = decrypt_result(backend, &result_ct, &chunks.row_map, &mut ops)?;

        Ok(SpmvResult {
            values,
            op_ledger: ops,
            message_ledger: wire,
            n_ct,
            chunk_shapes: chunks.r_list.iter().copied().zip(chunks.c_list.iter().copied()).collect(),
            noise_budget_remaining_bits: Some(backend.noise_budget_bits(&result_ct)),
        })
    }

    /// Run on row blocks of at most `chunk_size` rows and stack the results.
    /// Identical to [`Pipeline::run`] when the matrix fits in one block.
    pub fn run_partitioned(&self, matrix: &CsrMatrix, vector: &[i64]) -> Result<SpmvResult> {
        self.check(matrix, vector)?;
        let mut out = SpmvResult::empty(0, self.key_holder);
        for block in partition_rows(matrix, self.chunk_size) {
            out.stack(self.run(&block, vector)?);
        }
        Ok(out)
    }
}

/// Run on the simulator with default key holder A.
pub fn spmv(
    matrix: &CsrMatrix,
    vector: &[i64],
    params: &HeParams,
    chunk_size: usize,
) -> Result<SpmvResult> {
    let sim = Simulator::new(params.clone())?;
    Pipeline::new(&sim).chunk_size(chunk_size).run(matrix, vector)
}

/// Partitioned run on the simulator with default key holder A.
pub fn spmv_partitioned(
    matrix: &CsrMatrix,
    vector: &[i64],
    params: &HeParams,
    chunk_size: usize,
) -> Result<SpmvResult> {
    let sim = Simulator::new(params.clone())?;
    Pipeline::new(&sim)
        .chunk_size(chunk_size)
        .run_partitioned(matrix, vector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregator::rotation_count;

    fn dense_oracle(m: &[Vec<i64>], v: &[i64], t: i64) -> Vec<i64> {
        m.iter()
            .map(|row| {
                let s: i64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                let r = s.rem_euclid(t);
                if r > t / 2 {
                    r - t
                } else {
                    r
                }
            })
            .collect()
    }

    fn small_params(slots: usize) -> HeParams {
        HeParams::new(slots, 65537).unwrap()
    }

    #[test]
    fn identity_times_vector() {
        let m = CsrMatrix::from_dense(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let r = spmv(&m, &[5, 7], &HeParams::default(), 8192).unwrap();
        assert_eq!(r.values, vec![5, 7]);
        assert_eq!(r.n_ct, 1);
        assert_eq!(r.noise_budget_remaining_bits, Some(87));
    }

    #[test]
    fn one_by_one() {
        let m = CsrMatrix::from_dense(1, &[vec![3]]).unwrap();
        let r = spmv(&m, &[4], &HeParams::default(), 8192).unwrap();
        assert_eq!(r.values, vec![12]);
    }

    #[test]
    fn figure_shaped_chunks() {
        // Aligned heights 10, 7, 7, 3, 3, 3, 3 packed with s = 14 give
        // chunks (10,1), (7,2), (3,4).
        let heights = [10usize, 7, 7, 3, 3, 3, 3];
        let dense: Vec<Vec<i64>> = (0..10)
            .map(|i| {
                let n = heights.iter().filter(|&&h| h > i).count();
                (0..9)
                    .map(|j| if j < n { (i * 3 + j) as i64 - 11 } else { 0 })
                    .collect()
            })
            .collect();
        let m = CsrMatrix::from_dense(9, &dense).unwrap();
        let v: Vec<i64> = (1..=9).collect();
        let r = spmv(&m, &v, &small_params(16), 14).unwrap();
        assert_eq!(r.chunk_shapes, vec![(10, 1), (7, 2), (3, 4)]);
        assert_eq!(r.values, dense_oracle(&dense, &v, 65537));
        assert_eq!(r.op_ledger.n_rot, 0 + 1 + 2);
        assert_eq!(r.op_ledger.n_add, 3 + 3);
    }

    #[test]
    fn op_count_identities() {
        let dense = vec![
            vec![1, 2, 0, 3, 0],
            vec![0, 4, 0, 0, 0],
            vec![5, 0, 6, 7, 8],
            vec![0, 0, 0, 0, 9],
        ];
        let m = CsrMatrix::from_dense(5, &dense).unwrap();
        let v = [1, -2, 3, -4, 5];
        let r = spmv(&m, &v, &small_params(8), 8).unwrap();
        let l = r.op_ledger;
        assert_eq!(r.values, dense_oracle(&dense, &v, 65537));
        assert_eq!(l.n_mult_cc as usize, r.n_ct);
        assert_eq!(l.n_mult_cp as usize, r.n_ct);
        let rots: usize = r.chunk_shapes.iter().map(|&(_, c)| rotation_count(c)).sum();
        assert_eq!(l.n_rot as usize, rots);
        assert_eq!(l.n_add, l.n_rot + r.n_ct as u64);
        assert_eq!(l.n_enc as usize, 2 * r.n_ct);
        assert_eq!(l.n_dec, 1);
    }

    #[test]
    fn transcript_and_audit() {
        let m = CsrMatrix::from_dense(3, &[vec![1, 0, 2], vec![0, 3, 0]]).unwrap();
        let r = spmv(&m, &[1, 1, 1], &HeParams::default(), 8192).unwrap();
        let kinds: Vec<_> = r.message_ledger.messages().iter().map(|m| m.kind).collect();
        use MessageKind::*;
        assert_eq!(
            kinds,
            vec![CiphertextBatch, ChunkShapeMeta, ColumnIndexPlain, CiphertextBatch, ResultCiphertext]
        );
        assert!(audit_leakage(&r.message_ledger).passed);
        let ml = &r.message_ledger;
        assert_eq!(ml.ciphertexts(PartyRole::ClientA, PartyRole::Cloud), r.n_ct);
        assert_eq!(
            ml.bytes(PartyRole::ClientB, PartyRole::Cloud),
            HeParams::default().ciphertext_bytes(r.n_ct)
        );
    }

    #[test]
    fn key_holder_b_gets_row_map_and_result() {
        let m = CsrMatrix::from_dense(2, &[vec![0, 2], vec![3, 4]]).unwrap();
        let sim = Simulator::new(small_params(8)).unwrap();
        let r = Pipeline::new(&sim)
            .key_holder(PartyRole::ClientB)
            .run(&m, &[1, 10])
            .unwrap();
        assert_eq!(r.values, vec![20, 43]);
        let last = r.message_ledger.messages().last().unwrap();
        assert_eq!(last.to, PartyRole::ClientB);
        assert!(r
            .message_ledger
            .messages()
            .iter()
            .any(|m| m.kind == MessageKind::RowMapPlain));
        assert!(audit_leakage(&r.message_ledger).passed);
    }

    #[test]
    fn dimension_mismatch() {
        let m = CsrMatrix::<i64>::zeros(2, 3);
        assert!(matches!(
            spmv(&m, &[1, 2], &small_params(8), 8),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn chunk_size_must_fit_slots() {
        let m = CsrMatrix::<i64>::zeros(2, 2);
        assert!(matches!(
            spmv(&m, &[1, 2], &small_params(8), 9),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn too_tall_requires_partitioning() {
        let dense: Vec<Vec<i64>> = (0..20).map(|i| vec![i + 1, 0]).collect();
        let m = CsrMatrix::from_dense(2, &dense).unwrap();
        let p = small_params(8);
        assert!(matches!(spmv(&m, &[2, 0], &p, 8), Err(Error::ColumnTooTall { .. })));
        let r = spmv_partitioned(&m, &[2, 0], &p, 8).unwrap();
        assert_eq!(r.values, dense_oracle(&dense, &[2, 0], 65537));
        assert_eq!(r.message_ledger.messages().iter().filter(|m| m.kind == MessageKind::ResultCiphertext).count(), 3);
    }

    #[test]
    fn all_zero_matrix() {
        let m = CsrMatrix::<i64>::zeros(4, 3);
        let r = spmv_partitioned(&m, &[1, 2, 3], &small_params(8), 8).unwrap();
        assert_eq!(r.values, vec![0; 4]);
        assert_eq!(r.op_ledger, OpLedger::new());
        assert!(r.message_ledger.messages().is_empty());
        assert_eq!(r.noise_budget_remaining_bits, None);
    }

    #[test]
    fn partitioned_matches_single_block_when_small() {
        let m = CsrMatrix::from_dense(3, &[vec![1, 0, 2], vec![0, 3, 0]]).unwrap();
        let p = HeParams::default();
        let a = spmv(&m, &[4, 5, 6], &p, 8192).unwrap();
        let b = spmv_partitioned(&m, &[4, 5, 6], &p, 8192).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.op_ledger, b.op_ledger);
        assert_eq!(a.message_ledger, b.message_ledger);
    }

    #[test]
    fn many_zero_rows_beyond_slot_count() {
        let mut dense = vec![vec![0i64; 2]; 12];
        dense[9] = vec![3, 4];
        let m = CsrMatrix::from_dense(2, &dense).unwrap();
        let r = spmv(&m, &[1, 1], &small_params(8), 8).unwrap();
        assert_eq!(r.values[9], 7);
        assert_eq!(r.values.iter().sum::<i64>(), 7);
    }
}
