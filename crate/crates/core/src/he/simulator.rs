use std::sync::atomic::{AtomicU64, Ordering};

use super::{encode, HeBackend, HeParams, OpLedger, Plaintext, SlotVector};
use crate::error::{Error, Result};

/// Multiplicative depth consumed so far, split by multiplication kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultDepth {
    pub ct_ct: u32,
    pub ct_pt: u32,
}

impl MultDepth {
    fn max(self, other: MultDepth) -> MultDepth {
        MultDepth {
            ct_ct: self.ct_ct.max(other.ct_ct),
            ct_pt: self.ct_pt.max(other.ct_pt),
        }
    }
}

/// Simulated ciphertext: the slot payload in the clear plus the bookkeeping
/// a real ciphertext would imply.
#[derive(Debug, Clone)]
pub struct SimCiphertext {
    payload: SlotVector,
    noise_budget_bits: u32,
    depth: MultDepth,
    id: u64,
}

impl SimCiphertext {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn noise_budget_bits(&self) -> u32 {
        self.noise_budget_bits
    }

    pub fn depth(&self) -> MultDepth {
        self.depth
    }

    /// Slot payload, readable without a key. Only meant for tests and
    /// diagnostics; protocol code decrypts through the backend.
    pub fn peek(&self) -> &SlotVector {
        &self.payload
    }
}

/// Reference backend with exact arithmetic modulo `t`.
#[derive(Debug)]
pub struct Simulator {
    params: HeParams,
    next_id: AtomicU64,
}

impl Simulator {
    pub fn new(params: HeParams) -> Result<Self> {
        params.validate()?;
        Ok(Simulator {
            params,
            next_id: AtomicU64::new(1),
        })
    }

    fn fresh_id(&self) -> u64 {
        self.next_id.fetch_add(1, Ordering::Relaxed)
    }

    fn derive(&self, payload: Vec<u64>, budget: u32, depth: MultDepth) -> SimCiphertext {
        SimCiphertext {
            payload: SlotVector::from_reduced(payload),
            noise_budget_bits: budget,
            depth,
            id: self.fresh_id(),
        }
    }

    fn zip_with(
        &self,
        a: &SlotVector,
        b: &SlotVector,
        f: impl Fn(u64, u64) -> u64,
    ) -> Vec<u64> {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(&x, &y)| f(x, y))
            .collect()
    }
}

impl HeBackend for Simulator {
    type Plaintext = Plaintext;
    type Ciphertext = SimCiphertext;

    fn params(&self) -> &HeParams {
        &self.params
    }

    fn encode(&self, values: &[i64]) -> Result<Plaintext> {
        encode(values, &self.params)
    }

    fn encrypt(&self, pt: &Plaintext, ledger: &mut OpLedger) -> SimCiphertext {
        ledger.n_enc += 1;
        SimCiphertext {
            payload: pt.encoded.clone(),
            noise_budget_bits: self.params.noise_model.initial_budget_bits,
            depth: MultDepth::default(),
            id: self.fresh_id(),
        }
    }

    fn decrypt(&self, ct: &SimCiphertext, ledger: &mut OpLedger) -> Result<SlotVector> {
        if ct.noise_budget_bits == 0 {
            return Err(Error::NoiseExhausted);
        }
        ledger.n_dec += 1;
        Ok(ct.payload.clone())
    }

    fn zero(&self) -> SimCiphertext {
        self.derive(
            vec![0; self.params.slot_count],
            self.params.noise_model.initial_budget_bits,
            MultDepth::default(),
        )
    }

    fn add(&self, a: &SimCiphertext, b: &SimCiphertext, ledger: &mut OpLedger) -> SimCiphertext {
        ledger.n_add += 1;
        let t = self.params.plaintext_modulus;
        let payload = self.zip_with(&a.payload, &b.payload, |x, y| (x + y) % t);
        let budget = a
            .noise_budget_bits
            .min(b.noise_budget_bits)
            .saturating_sub(self.params.noise_model.cost_add_bits);
        self.derive(payload, budget, a.depth.max(b.depth))
    }

    fn mult(&self, a: &SimCiphertext, b: &SimCiphertext, ledger: &mut OpLedger) -> SimCiphertext {
        ledger.n_mult_cc += 1;
        let t = self.params.plaintext_modulus;
        let payload = self.zip_with(&a.payload, &b.payload, |x, y| x * y % t);
        let budget = a
            .noise_budget_bits
            .min(b.noise_budget_bits)
            .saturating_sub(self.params.noise_model.cost_ct_ct_mult_bits);
        let mut depth = a.depth.max(b.depth);
        depth.ct_ct += 1;
        self.derive(payload, budget, depth)
    }

    fn mult_plain(&self, a: &SimCiphertext, p: &Plaintext, ledger: &mut OpLedger) -> SimCiphertext {
        ledger.n_mult_cp += 1;
        let t = self.params.plaintext_modulus;
        let payload = self.zip_with(&a.payload, &p.encoded, |x, y| x * y % t);
        let budget = a
            .noise_budget_bits
            .saturating_sub(self.params.noise_model.cost_ct_pt_mult_bits);
        let mut depth = a.depth;
        depth.ct_pt += 1;
        self.derive(payload, budget, depth)
    }

    fn rotate(&self, a: &SimCiphertext, k: i64, ledger: &mut OpLedger) -> SimCiphertext {
        ledger.n_rot += 1;
        let n = self.params.slot_count;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut payload = a.payload.as_slice().to_vec();
        payload.rotate_left(shift);
        let budget = a
            .noise_budget_bits
            .saturating_sub(self.params.noise_model.cost_rot_bits);
        self.derive(payload, budget, a.depth)
    }

    fn noise_budget_bits(&self, ct: &SimCiphertext) -> u32 {
        ct.noise_budget_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::he::NoiseModel;

    fn sim(slots: usize) -> Simulator {
        Simulator::new(HeParams::new(slots, 65537).unwrap()).unwrap()
    }

    fn enc(s: &Simulator, v: &[i64], l: &mut OpLedger) -> SimCiphertext {
        let pt = s.encode(v).unwrap();
        s.encrypt(&pt, l)
    }

    #[test]
    fn fresh_encryption_has_full_budget() {
        let s = sim(8);
        let mut l = OpLedger::new();
        let ct = enc(&s, &[5], &mut l);
        assert_eq!(ct.noise_budget_bits(), 146);
        assert_eq!(l.n_enc, 1);
        assert_eq!(s.decrypt(&ct, &mut l).unwrap().as_slice()[..2], [5, 0]);
        assert_eq!(l.n_dec, 1);
    }

    #[test]
    fn handles_are_unique() {
        let s = sim(4);
        let mut l = OpLedger::new();
        let a = enc(&s, &[3], &mut l);
        let b = enc(&s, &[3], &mut l);
        assert_ne!(a.id(), b.id());
        assert_eq!(
            s.decrypt(&a, &mut l).unwrap(),
            s.decrypt(&b, &mut l).unwrap()
        );
    }

    #[test]
    fn add_is_slotwise_with_wraparound() {
        let s = sim(2);
        let mut l = OpLedger::new();
        let a = enc(&s, &[1, 2], &mut l);
        let b = enc(&s, &[3, 4], &mut l);
        assert_eq!(s.add(&a, &b, &mut l).peek().as_slice(), &[4, 6]);
        let c = enc(&s, &[65536], &mut l);
        let d = enc(&s, &[1], &mut l);
        assert_eq!(s.add(&c, &d, &mut l).peek().as_slice(), &[0, 0]);
        let z = enc(&s, &[0, 0], &mut l);
        assert_eq!(s.add(&a, &z, &mut l).peek(), a.peek());
        assert_eq!(l.n_add, 3);
    }

    #[test]
    fn mult_is_slotwise() {
        let s = sim(2);
        let mut l = OpLedger::new();
        let a = enc(&s, &[2, 3], &mut l);
        let b = enc(&s, &[5, 7], &mut l);
        let p = s.mult(&a, &b, &mut l);
        assert_eq!(p.peek().as_slice(), &[10, 21]);
        assert_eq!(p.noise_budget_bits(), 113);
        assert_eq!(p.depth(), MultDepth { ct_ct: 1, ct_pt: 0 });
        let ones = enc(&s, &[1, 1], &mut l);
        assert_eq!(s.mult(&a, &ones, &mut l).peek(), a.peek());
        assert_eq!(l.n_mult_cc, 2);
    }

    #[test]
    fn plain_mult_masks() {
        let s = sim(2);
        let mut l = OpLedger::new();
        let a = enc(&s, &[4, 5], &mut l);
        let mask = s.encode(&[2, 0]).unwrap();
        assert_eq!(s.mult_plain(&a, &mask, &mut l).peek().as_slice(), &[8, 0]);
        let ones = s.encode(&[1, 1]).unwrap();
        assert_eq!(s.mult_plain(&a, &ones, &mut l).peek(), a.peek());
        let zeros = s.encode(&[0, 0]).unwrap();
        assert_eq!(s.mult_plain(&a, &zeros, &mut l).peek().as_slice(), &[0, 0]);
        assert_eq!(l.n_mult_cp, 3);
    }

    #[test]
    fn rotation_is_cyclic_left() {
        let s = sim(4);
        let mut l = OpLedger::new();
        let a = enc(&s, &[1, 2, 3, 4], &mut l);
        assert_eq!(s.rotate(&a, 1, &mut l).peek().as_slice(), &[2, 3, 4, 1]);
        assert_eq!(s.rotate(&a, -1, &mut l).peek().as_slice(), &[4, 1, 2, 3]);
        assert_eq!(s.rotate(&a, 0, &mut l).peek(), a.peek());
        let r = s.rotate(&a, 3, &mut l);
        assert_eq!(s.rotate(&r, 1, &mut l).peek(), a.peek());
        assert_eq!(s.rotate(&a, 9, &mut l).peek().as_slice(), &[2, 3, 4, 1]);
        assert_eq!(l.n_rot, 6);
    }

    #[test]
    fn decrypt_fails_after_five_ct_ct_mults() {
        let s = sim(4);
        let mut l = OpLedger::new();
        let mut ct = enc(&s, &[2], &mut l);
        for _ in 0..5 {
            ct = s.mult(&ct, &ct, &mut l);
        }
        assert_eq!(ct.noise_budget_bits(), 0);
        assert!(matches!(s.decrypt(&ct, &mut l), Err(Error::NoiseExhausted)));
        assert_eq!(l.n_dec, 0);
    }

    #[test]
    fn one_of_each_mult_leaves_87_bits() {
        let s = sim(4);
        let mut l = OpLedger::new();
        let a = enc(&s, &[3], &mut l);
        let b = enc(&s, &[4], &mut l);
        let p = s.mult(&a, &b, &mut l);
        let m = s.mult_plain(&p, &s.encode(&[1]).unwrap(), &mut l);
        assert_eq!(m.noise_budget_bits(), 87);
        assert_eq!(s.decrypt(&m, &mut l).unwrap().as_slice()[0], 12);
    }

    #[test]
    fn add_and_rot_costs_apply_when_configured() {
        let params = HeParams {
            noise_model: NoiseModel {
                cost_add_bits: 2,
                cost_rot_bits: 3,
                ..NoiseModel::default()
            },
            ..HeParams::new(4, 17).unwrap()
        };
        let s = Simulator::new(params).unwrap();
        let mut l = OpLedger::new();
        let a = enc(&s, &[1], &mut l);
        let r = s.rotate(&a, 1, &mut l);
        assert_eq!(r.noise_budget_bits(), 143);
        assert_eq!(s.add(&a, &r, &mut l).noise_budget_bits(), 141);
    }

    #[test]
    fn zero_is_not_counted() {
        let s = sim(4);
        let z = s.zero();
        assert_eq!(z.peek().as_slice(), &[0, 0, 0, 0]);
        assert_eq!(z.noise_budget_bits(), 146);
    }
}
