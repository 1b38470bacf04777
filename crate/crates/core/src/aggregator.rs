//! Cloud-side reduction of per-chunk products.
//!
//! A product ciphertext packs an `r x c` chunk column-major, so column `b`
//! occupies slots `[b*r, (b+1)*r)`. [`intra_chunk_sum`] folds the `c` column
//! blocks onto block 0 with a logarithmic rotate-and-add walk over the bits
//! of `c`, most significant first:
//!
//! ```text
//! w <- ct, e <- 1
//! for j = numBits(c)-2 down to 0:
//!     w <- w + Rot(w, e*r);  e <- 2e
//!     if bit_j(c) = 1:
//!         w <- ct + Rot(w, r);  e <- e + 1
//! ```
//!
//! Invariant: block `b` of `w` holds the sum of columns `b..b+e`. On a set
//! bit the fresh `ct` is added to `w` shifted by one block, which extends
//! the window by exactly one column; adding `w` to itself there would count
//! the middle columns twice (for `c = 3` block 0 would hold
//! `c0 + 2*c1 + c2`).
//!
//! Slots outside block 0 end up holding partial sums and are zeroed by the
//! plaintext mask in [`inter_chunk_sum`] before chunks are accumulated.

use std::collections::HashMap;

use crate::error::Result;
use crate::he::{HeBackend, OpLedger};

/// Bit length of `c`; `num_bits(0) == 0`.
pub fn num_bits(c: usize) -> u32 {
    usize::BITS - c.leading_zeros()
}

/// Rotation offsets (in slots) issued by [`intra_chunk_sum`] for an `r x c`
/// chunk, in order.
pub fn rotation_schedule(r: usize, c: usize) -> Vec<usize> {
    assert!(c >= 1, "a chunk has at least one column");
    let mut offsets = Vec::new();
    let mut e = 1;
    for j in (0..num_bits(c) - 1).rev() {
        offsets.push(e * r);
        e *= 2;
        if (c >> j) & 1 == 1 {
            offsets.push(r);
            e += 1;
        }
    }
    debug_assert_eq!(e, c);
    offsets
}

/// Number of rotations (and additions) [`intra_chunk_sum`] performs for a
/// chunk with `c` columns: `numBits(c) - 1 + popcount(c) - 1`.
pub fn rotation_count(c: usize) -> usize {
    (num_bits(c) - 1 + c.count_ones() - 1) as usize
}

/// Sum the `c` column blocks of an `r x c` chunk into slots `[0, r)`.
pub fn intra_chunk_sum<B: HeBackend>(
    backend: &B,
    ct: &B::Ciphertext,
    r: usize,
    c: usize,
    ledger: &mut OpLedger,
) -> B::Ciphertext {
    assert!(c >= 1, "a chunk has at least one column");
    let mut w = ct.clone();
    let mut e = 1;
    for j in (0..num_bits(c) - 1).rev() {
        let rotated = backend.rotate(&w, (e * r) as i64, ledger);
        w = backend.add(&w, &rotated, ledger);
        e *= 2;
        if (c >> j) & 1 == 1 {
            let rotated = backend.rotate(&w, r as i64, ledger);
            w = backend.add(ct, &rotated, ledger);
            e += 1;
        }
    }
    w
}

/// Plaintext masks `1^r 0^(slots-r)`, encoded once per distinct `r`.
pub struct MaskCache<'a, B: HeBackend> {
    backend: &'a B,
    masks: HashMap<usize, B::Plaintext>,
}

impl<'a, B: HeBackend> MaskCache<'a, B> {
    pub fn new(backend: &'a B) -> Self {
        MaskCache {
            backend,
            masks: HashMap::new(),
        }
    }

    pub fn get(&mut self, ones: usize) -> Result<&B::Plaintext> {
        if !self.masks.contains_key(&ones) {
            let mask = self.backend.encode(&vec![1; ones])?;
            self.masks.insert(ones, mask);
        }
        Ok(&self.masks[&ones])
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

/// Mask each part to its first `r_list[i]` slots and add them into one
/// ciphertext: one plaintext multiplication and one addition per part.
pub fn inter_chunk_sum<B: HeBackend>(
    backend: &B,
    parts: &[B::Ciphertext],
    r_list: &[usize],
    ledger: &mut OpLedger,
) -> Result<B::Ciphertext> {
    assert_eq!(parts.len(), r_list.len(), "one row count per part");
    let mut masks = MaskCache::new(backend);
    let mut acc = backend.zero();
    for (part, &r) in parts.iter().zip(r_list) {
        let masked = backend.mult_plain(part, masks.get(r)?, ledger);
        acc = backend.add(&acc, &masked, ledger);
    }
    Ok(acc)
}

/// Full reduction: per-chunk column sums followed by masked accumulation.
pub fn aggregate<B: HeBackend>(
    backend: &B,
    products: &[B::Ciphertext],
    r_list: &[usize],
    c_list: &[usize],
    ledger: &mut OpLedger,
) -> Result<B::Ciphertext> {
    let parts: Vec<B::Ciphertext> = products
        .iter()
        .zip(r_list.iter().zip(c_list))
        .map(|(ct, (&r, &c))| intra_chunk_sum(backend, ct, r, c, ledger))
        .collect();
    inter_chunk_sum(backend, &parts, r_list, ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::he::{HeParams, Simulator};

    fn sim(slots: usize) -> Simulator {
        Simulator::new(HeParams::new(slots, 65537).unwrap()).unwrap()
    }

    /// Column sums of an `r x c` column-major block, computed directly.
    fn column_sums(flat: &[i64], r: usize, c: usize) -> Vec<u64> {
        (0..r)
            .map(|i| {
                let s: i64 = (0..c).map(|b| flat[b * r + i]).sum();
                s.rem_euclid(65537) as u64
            })
            .collect()
    }

    fn run(r: usize, c: usize) -> (Vec<u64>, OpLedger) {
        let s = sim(64);
        let flat: Vec<i64> = (0..(r * c) as i64).map(|x| x * 7 - 20).collect();
        let mut l = OpLedger::new();
        let ct = s.encrypt(&s.encode(&flat).unwrap(), &mut l);
        l.reset();
        let out = intra_chunk_sum(&s, &ct, r, c, &mut l);
        assert_eq!(
            &out.peek().as_slice()[..r],
            column_sums(&flat, r, c).as_slice(),
            "r={r} c={c}"
        );
        (out.peek().as_slice().to_vec(), l)
    }

    #[test]
    fn num_bits_values() {
        assert_eq!(num_bits(5), 3);
        assert_eq!(num_bits(21), 5);
        assert_eq!(num_bits(1), 1);
        assert_eq!(num_bits(8), 4);
    }

    #[test]
    fn single_column_needs_no_rotation() {
        let (_, l) = run(10, 1);
        assert_eq!(l.n_rot, 0);
        assert_eq!(l.n_add, 0);
        assert!(rotation_schedule(10, 1).is_empty());
    }

    #[test]
    fn two_columns_rotate_once_by_height() {
        let (_, l) = run(7, 2);
        assert_eq!(l.n_rot, 1);
        assert_eq!(l.n_add, 1);
        assert_eq!(rotation_schedule(7, 2), vec![7]);
    }

    #[test]
    fn four_columns_rotate_by_3_then_6() {
        let (_, l) = run(3, 4);
        assert_eq!(l.n_rot, 2);
        assert_eq!(rotation_schedule(3, 4), vec![3, 6]);
    }

    #[test]
    fn odd_column_counts() {
        for c in 1..=21 {
            let (_, l) = run(3, c);
            assert_eq!(l.n_rot as usize, rotation_count(c));
            assert_eq!(rotation_schedule(3, c).len(), rotation_count(c));
            let nb = num_bits(c) as usize;
            assert!((nb - 1..=2 * (nb - 1)).contains(&rotation_count(c)));
        }
        assert_eq!(rotation_schedule(2, 3), vec![2, 2]);
        assert_eq!(rotation_schedule(1, 5), vec![1, 2, 1]);
    }

    #[test]
    fn masking_clears_garbage() {
        let s = sim(16);
        let mut l = OpLedger::new();
        let a = s.encrypt(&s.encode(&[1; 16]).unwrap(), &mut l);
        let b = s.encrypt(&s.encode(&[2; 16]).unwrap(), &mut l);
        l.reset();
        let out = inter_chunk_sum(&s, &[a, b], &[3, 5], &mut l).unwrap();
        assert_eq!(
            out.peek().as_slice(),
            &[3, 3, 3, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(l.n_mult_cp, 2);
        assert_eq!(l.n_add, 2);
    }

    #[test]
    fn mask_cache_reuses_encodings() {
        let s = sim(8);
        let mut cache = MaskCache::new(&s);
        cache.get(3).unwrap();
        cache.get(3).unwrap();
        cache.get(5).unwrap();
        assert_eq!(cache.len(), 2);
        assert_eq!(cache.get(3).unwrap().decode(), &[1, 1, 1, 0, 0, 0, 0, 0]);
    }
}
