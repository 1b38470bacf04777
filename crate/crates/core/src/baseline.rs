//! Diagonal-method baseline for square matrices.
//!
//! Generalized diagonal `d` holds entries `(i, (i + d) mod n)`. Client A
//! encrypts every non-empty diagonal as its own ciphertext, Client B
//! encrypts the vector once, and the cloud computes
//! `sum_d diag_d * Rot(v, d)`.
//!
//! Rotating a length-`n` vector inside `slots > n` slots is not cyclic
//! modulo `n`. When `2n - 1 <= slots` the vector is uploaded replicated
//! (`v || v[..n-1]`), so a single left rotation by `d` lines up
//! `v[(i + d) mod n]` in slot `i`. Otherwise the rotated vector is stitched
//! from `Rot(v, d)` and `Rot(v, d - n)` with two masks, which costs two
//! rotations per offset.

use serde::{Deserialize, Serialize};

use crate::cost::{estimate_time, CostTable};
use crate::error::{Error, Result};
use crate::he::{to_signed, HeBackend, OpLedger};
use crate::pipeline::{Message, MessageKind, MessageLedger, PartyRole, SpmvResult};
use crate::sparse::CsrMatrix;

/// Non-empty generalized diagonals of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagPlan {
    pub n: usize,
    pub diagonal_offsets: Vec<usize>,
    pub diagonals: Vec<Vec<i64>>,
}

impl DiagPlan {
    pub fn new(matrix: &CsrMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        let mut by_offset: Vec<Option<Vec<i64>>> = vec![None; n];
        for i in 0..n {
            let (cols, vals) = matrix.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let d = (j + n - i) % n;
                by_offset[d].get_or_insert_with(|| vec![0; n])[i] = v;
            }
        }
        let (diagonal_offsets, diagonals) = by_offset
            .into_iter()
            .enumerate()
            .filter_map(|(d, diag)| diag.map(|diag| (d, diag)))
            .unzip();
        Ok(DiagPlan {
            n,
            diagonal_offsets,
            diagonals,
        })
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }
}

/// Encrypted `M * v` with the diagonal method.
pub fn diag_spmv<B: HeBackend>(
    backend: &B,
    matrix: &CsrMatrix,
    vector: &[i64],
    key_holder: PartyRole,
) -> Result<SpmvResult> {
    use MessageKind::*;
    use PartyRole::*;

    let plan = DiagPlan::new(matrix)?;
    let n = plan.n;
    if vector.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: vector.len(),
        });
    }
    let params = backend.params();
    let slots = params.slot_count;
    if n > slots {
        return Err(Error::InvalidParams(format!(
            "{n}x{n} matrix does not fit in {slots} slots"
        )));
    }
    let mut ops = OpLedger::new();
    let mut wire = MessageLedger::new(key_holder);
    if plan.is_empty() {
        return Ok(SpmvResult {
            values: vec![0; n],
            op_ledger: ops,
            message_ledger: wire,
            n_ct: 0,
            chunk_shapes: Vec::new(),
            noise_budget_remaining_bits: None,
        });
    }

    // Client A
    let diag_cts = plan
        .diagonals
        .iter()
        .map(|d| Ok(backend.encrypt(&backend.encode(d)?, &mut ops)))
        .collect::<Result<Vec<_>>>()?;
    wire.send(Message {
        from: ClientA,
        to: Cloud,
        kind: CiphertextBatch,
        payload_bytes: params.ciphertext_bytes(plan.len()),
        ciphertext_count: plan.len(),
    });
    wire.send(Message {
        from: ClientA,
        to: Cloud,
        kind: ChunkShapeMeta,
        payload_bytes: 4 + 4 * plan.len() as u64,
        ciphertext_count: 0,
    });

    // Client B
    let replicated = n == slots || 2 * n - 1 <= slots;
    let layout: Vec<i64> = if replicated && n < slots {
        vector.iter().chain(&vector[..n - 1]).copied().collect()
    } else {
        vector.to_vec()
    };
    let vct = backend.encrypt(&backend.encode(&layout)?, &mut ops);
    wire.send(Message {
        from: ClientB,
        to: Cloud,
        kind: CiphertextBatch,
        payload_bytes: params.ciphertext_bytes(1),
        ciphertext_count: 1,
    });

    // Cloud
    let mut acc = backend.zero();
    for (&d, dct) in plan.diagonal_offsets.iter().zip(&diag_cts) {
        let aligned = if d == 0 {
            vct.clone()
        } else if replicated {
            backend.rotate(&vct, d as i64, &mut ops)
        } else {
            let head = backend.rotate(&vct, d as i64, &mut ops);
            let tail = backend.rotate(&vct, d as i64 - n as i64, &mut ops);
            let lo: Vec<i64> = (0..n).map(|i| i64::from(i + d < n)).collect();
            let hi: Vec<i64> = (0..n).map(|i| i64::from(i + d >= n)).collect();
            let head = backend.mult_plain(&head, &backend.encode(&lo)?, &mut ops);
            let tail = backend.mult_plain(&tail, &backend.encode(&hi)?, &mut ops);
            backend.add(&head, &tail, &mut ops)
        };
        let prod = backend.mult(dct, &aligned, &mut ops);
        acc = backend.add(&acc, &prod, &mut ops);
    }
    wire.send(Message {
        from: Cloud,
        to: key_holder,
        kind: ResultCiphertext,
        payload_bytes: params.ciphertext_bytes(1),
        ciphertext_count: 1,
    });

    // Key holder
    let t = params.plaintext_modulus;
    let mid = backend.decrypt(&acc, &mut ops)?;
    let values = mid.as_slice()[..n].iter().map(|&x| to_signed(x, t)).collect();

    Ok(SpmvResult {
        values,
        op_ledger: ops,
        message_ledger: wire,
        n_ct: plan.len(),
        chunk_shapes: Vec::new(),
        noise_budget_remaining_bits: Some(backend.noise_budget_bits(&acc)),
    })
}

/// Side-by-side operation counts and estimated times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerComparison {
    pub ours: OpLedger,
    pub baseline: OpLedger,
    pub ours_time_ms: f64,
    pub baseline_time_ms: f64,
    /// Baseline time over ours; above 1 means ours is cheaper.
    pub time_ratio: f64,
    pub mult_ratio: f64,
}

pub fn compare_ledgers(ours: &SpmvResult, baseline: &SpmvResult, table: &CostTable) -> LedgerComparison {
    let ours_time_ms = estimate_time(&ours.op_ledger, table);
    let baseline_time_ms = estimate_time(&baseline.op_ledger, table);
    let ratio = |a: f64, b: f64| if b == 0.0 { f64::NAN } else { a / b };
    LedgerComparison {
        ours: ours.op_ledger,
        baseline: baseline.op_ledger,
        ours_time_ms,
        baseline_time_ms,
        time_ratio: ratio(baseline_time_ms, ours_time_ms),
        mult_ratio: ratio(
            baseline.op_ledger.n_mult_cc as f64,
            ours.op_ledger.n_mult_cc as f64,
        ),
    }
}
