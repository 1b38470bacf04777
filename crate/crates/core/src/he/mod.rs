//! Slot-vector homomorphic encryption model.
//!
//! A backend packs `slot_count` residues modulo the plaintext modulus `t`
//! into one ciphertext and exposes the four batched operations the SpMV
//! pipeline needs: slotwise addition, ciphertext-ciphertext multiplication,
//! ciphertext-plaintext multiplication and cyclic left rotation.
//!
//! [`Simulator`] is the reference backend. It keeps the slot payload in the
//! clear, does exact modular arithmetic, and tracks a linear noise budget so
//! that depth and decryption failure can be reasoned about without lattice
//! arithmetic. Any other scheme plugs in by implementing [`HeBackend`].

mod ledger;
mod simulator;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ledger::OpLedger;
pub use simulator::{MultDepth, SimCiphertext, Simulator};

/// Linear bit-budget noise model. Every operation subtracts a fixed cost from
/// the running budget; the budget never goes below zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub initial_budget_bits: u32,
    pub cost_ct_ct_mult_bits: u32,
    pub cost_ct_pt_mult_bits: u32,
    pub cost_add_bits: u32,
    pub cost_rot_bits: u32,
}

impl Default for NoiseModel {
    /// BFV at N = 8192, t = 65537, log2 Q = 200: a fresh ciphertext starts
    /// at 146 bits, a ct x ct product costs 33 and a ct x pt product 26.
    fn default() -> Self {
        NoiseModel {
            initial_budget_bits: 146,
            cost_ct_ct_mult_bits: 33,
            cost_ct_pt_mult_bits: 26,
            cost_add_bits: 0,
            cost_rot_bits: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeParams {
    pub slot_count: usize,
    pub plaintext_modulus: u64,
    /// Size of one serialized ciphertext, used for communication and memory
    /// accounting.
    pub ciphertext_size_mb: f64,
    pub noise_model: NoiseModel,
}

impl Default for HeParams {
    fn default() -> Self {
        HeParams {
            slot_count: 8192,
            plaintext_modulus: 65537,
            ciphertext_size_mb: 0.52,
            noise_model: NoiseModel::default(),
        }
    }
}

impl HeParams {
    pub fn new(slot_count: usize, plaintext_modulus: u64) -> Result<Self> {
        let params = HeParams {
            slot_count,
            plaintext_modulus,
            ..HeParams::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slot_count == 0 {
            return Err(Error::InvalidParams("slot_count must be at least 1".into()));
        }
        // Products of two residues must fit in a u64.
        if self.plaintext_modulus < 2 || self.plaintext_modulus > u32::MAX as u64 {
            return Err(Error::InvalidParams(format!(
                "plaintext_modulus {} outside [2, 2^32)",
                self.plaintext_modulus
            )));
        }
        if !(self.ciphertext_size_mb.is_finite() && self.ciphertext_size_mb >= 0.0) {
            return Err(Error::InvalidParams(
                "ciphertext_size_mb must be a non-negative number".into(),
            ));
        }
        Ok(())
    }

    /// Serialized size of `count` ciphertexts in bytes, rounded to the
    /// nearest byte.
    pub fn ciphertext_bytes(&self, count: usize) -> u64 {
        (count as f64 * self.ciphertext_size_mb * (1u64 << 20) as f64).round() as u64
    }
}

/// Reduce a signed integer into `[0, t)`.
pub fn reduce(value: i64, t: u64) -> u64 {
    value.rem_euclid(t as i64) as u64
}

/// Centered representative of a residue, in `(-t/2, t/2]`.
pub fn to_signed(value: u64, t: u64) -> i64 {
    let v = value % t;
    if v > t / 2 {
        v as i64 - t as i64
    } else {
        v as i64
    }
}

/// Fixed-length vector of residues modulo `t`; the unit of SIMD packing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotVector {
    values: Arc<[u64]>,
}

impl SlotVector {
    /// Wrap already-reduced residues. Callers guarantee every value is in
    /// `[0, t)`.
    pub(crate) fn from_reduced(values: Vec<u64>) -> Self {
        SlotVector {
            values: values.into(),
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Signed interpretation of every slot.
    pub fn to_signed(&self, t: u64) -> Vec<i64> {
        self.values.iter().map(|&v| to_signed(v, t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext {
    pub encoded: SlotVector,
}

impl Plaintext {
    pub fn decode(&self) -> &[u64] {
        self.encoded.as_slice()
    }
}

/// Reduce `values` modulo `t` and zero-pad to `slot_count`.
pub fn encode(values: &[i64], params: &HeParams) -> Result<Plaintext> {
    if values.len() > params.slot_count {
        return Err(Error::OverLength {
            len: values.len(),
            slots: params.slot_count,
        });
    }
    let t = params.plaintext_modulus;
    let mut slots = vec![0u64; params.slot_count];
    for (slot, &v) in slots.iter_mut().zip(values) {
        *slot = reduce(v, t);
    }
    Ok(Plaintext {
        encoded: SlotVector::from_reduced(slots),
    })
}

/// Contract every homomorphic backend fulfils for the SpMV pipeline.
///
/// Operations take the caller's [`OpLedger`] so that independent runs can
/// count operations without shared state.
pub trait HeBackend: Sync {
    type Plaintext: Clone + Send + Sync;
    type Ciphertext: Clone + Send + Sync;

    fn params(&self) -> &HeParams;

    fn encode(&self, values: &[i64]) -> Result<Self::Plaintext>;

    fn encrypt(&self, pt: &Self::Plaintext, ledger: &mut OpLedger) -> Self::Ciphertext;

    /// Fails with [`Error::NoiseExhausted`] once the ciphertext has no noise
    /// budget left.
    fn decrypt(&self, ct: &Self::Ciphertext, ledger: &mut OpLedger) -> Result<SlotVector>;

    /// Noise-free encryption of the all-zero vector, used to seed
    /// accumulators. Not counted as an encryption.
    fn zero(&self) -> Self::Ciphertext;

    fn add(&self, a: &Self::Ciphertext, b: &Self::Ciphertext, ledger: &mut OpLedger)
        -> Self::Ciphertext;

    fn mult(&self, a: &Self::Ciphertext, b: &Self::Ciphertext, ledger: &mut OpLedger)
        -> Self::Ciphertext;

    fn mult_plain(
        &self,
        a: &Self::Ciphertext,
        p: &Self::Plaintext,
        ledger: &mut OpLedger,
    ) -> Self::Ciphertext;

    /// Cyclic left rotation by `k` slots; negative `k` rotates right.
    fn rotate(&self, a: &Self::Ciphertext, k: i64, ledger: &mut OpLedger) -> Self::Ciphertext;

    fn noise_budget_bits(&self, ct: &Self::Ciphertext) -> u32;
}
