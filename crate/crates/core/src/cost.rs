//! Latency model for turning operation counts into estimated run time.

use serde::{Deserialize, Serialize};

use crate::he::OpLedger;

/// Per-operation latency in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub enc_ms: f64,
    pub dec_ms: f64,
    pub add_ms: f64,
    pub mult_cc_ms: f64,
    pub mult_cp_ms: f64,
    pub rot_ms: f64,
}

impl Default for CostTable {
    /// Measured BFV latencies at N = 8192, t = 65537.
    fn default() -> Self {
        CostTable {
            enc_ms: 5.501,
            dec_ms: 2.570,
            add_ms: 0.550,
            mult_cc_ms: 20.874,
            mult_cp_ms: 4.138,
            rot_ms: 5.350,
        }
    }
}

impl CostTable {
    /// Cloud-side cost: multiplications, rotations and additions.
    pub fn cloud_time_ms(&self, l: &OpLedger) -> f64 {
        l.n_mult_cc as f64 * self.mult_cc_ms
            + l.n_mult_cp as f64 * self.mult_cp_ms
            + l.n_rot as f64 * self.rot_ms
            + l.n_add as f64 * self.add_ms
    }

    /// Client-side cost: encryption and decryption.
    pub fn client_time_ms(&self, l: &OpLedger) -> f64 {
        l.n_enc as f64 * self.enc_ms + l.n_dec as f64 * self.dec_ms
    }
}

/// Sum of `count x latency` over every operation kind.
pub fn estimate_time(ledger: &OpLedger, table: &CostTable) -> f64 {
    table.cloud_time_ms(ledger) + table.client_time_ms(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cc_mult() {
        let l = OpLedger {
            n_mult_cc: 1,
            ..Default::default()
        };
        assert!((estimate_time(&l, &CostTable::default()) - 20.874).abs() < 1e-9);
    }

    #[test]
    fn cp_mult_plus_rotation() {
        let l = OpLedger {
            n_mult_cp: 1,
            n_rot: 1,
            ..Default::default()
        };
        assert!((estimate_time(&l, &CostTable::default()) - 9.488).abs() < 1e-9);
    }

    #[test]
    fn empty_ledger_costs_nothing() {
        assert_eq!(estimate_time(&OpLedger::new(), &CostTable::default()), 0.0);
    }

    #[test]
    fn split_adds_up() {
        let t = CostTable::default();
        let l = OpLedger {
            n_mult_cc: 2,
            n_mult_cp: 3,
            n_rot: 4,
            n_add: 5,
            n_enc: 6,
            n_dec: 1,
        };
        let total = 2.0 * 20.874 + 3.0 * 4.138 + 4.0 * 5.35 + 5.0 * 0.55 + 6.0 * 5.501 + 2.57;
        assert!((estimate_time(&l, &t) - total).abs() < 1e-9);
        assert!((t.cloud_time_ms(&l) + t.client_time_ms(&l) - total).abs() < 1e-9);
    }
}
