use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Per-kind counts of homomorphic operations issued during a run.
///
/// Counters only grow; [`OpLedger::reset`] is the one way back to zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpLedger {
    pub n_mult_cc: u64,
    pub n_mult_cp: u64,
    pub n_rot: u64,
    pub n_add: u64,
    pub n_enc: u64,
    pub n_dec: u64,
}

impl OpLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    pub fn total(&self) -> u64 {
        self.n_mult_cc + self.n_mult_cp + self.n_rot + self.n_add + self.n_enc + self.n_dec
    }
}

impl AddAssign for OpLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.n_mult_cc += rhs.n_mult_cc;
        self.n_mult_cp += rhs.n_mult_cp;
        self.n_rot += rhs.n_rot;
        self.n_add += rhs.n_add;
        self.n_enc += rhs.n_enc;
        self.n_dec += rhs.n_dec;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_reset() {
        let mut a = OpLedger {
            n_mult_cc: 1,
            n_rot: 3,
            ..Default::default()
        };
        a += OpLedger {
            n_mult_cc: 2,
            n_add: 5,
            ..Default::default()
        };
        assert_eq!(a.n_mult_cc, 3);
        assert_eq!(a.n_add, 5);
        assert_eq!(a.total(), 11);
        a.reset();
        assert_eq!(a, OpLedger::new());
    }
}
