use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cost::CostTable;
use crate::he::{HeParams, OpLedger};
use crate::pipeline::{PartyRole, SpmvResult};

const MB: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommSummary {
    pub a_to_cloud_mb: f64,
    pub b_to_cloud_mb: f64,
    pub a_to_b_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub n_ct: usize,
    pub op_counts: OpLedger,
    pub estimated_time_ms: f64,
    /// Cloud-side part of `estimated_time_ms`.
    pub cloud_time_ms: f64,
    /// Every ciphertext that crossed the wire, times the ciphertext size.
    pub est_memory_mb: f64,
    pub comm: CommSummary,
    pub noise_remaining_bits: Option<u32>,
    /// `None` when the diagonal baseline does not apply.
    pub baseline_counts: Option<OpLedger>,
}

impl BenchRecord {
    pub fn new(
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        nnz: usize,
        result: &SpmvResult,
        baseline: Option<&SpmvResult>,
        params: &HeParams,
        table: &CostTable,
    ) -> Self {
        use PartyRole::*;
        let wire = &result.message_ledger;
        let ops = result.op_ledger;
        BenchRecord {
            name: name.into(),
            rows,
            cols,
            nnz,
            n_ct: result.n_ct,
            op_counts: ops,
            estimated_time_ms: table.cloud_time_ms(&ops) + table.client_time_ms(&ops),
            cloud_time_ms: table.cloud_time_ms(&ops),
            est_memory_mb: wire.total_ciphertexts() as f64 * params.ciphertext_size_mb,
            comm: CommSummary {
                a_to_cloud_mb: wire.bytes(ClientA, Cloud) as f64 / MB,
                b_to_cloud_mb: wire.bytes(ClientB, Cloud) as f64 / MB,
                a_to_b_bytes: wire.bytes(ClientA, ClientB),
            },
            noise_remaining_bits: result.noise_budget_remaining_bits,
            baseline_counts: baseline.map(|b| b.op_ledger),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchFailure {
    pub name: String,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub nnz: usize,
    pub simulated_cloud_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub points: Vec<ScalingPoint>,
    pub slope: f64,
    pub intercept: f64,
}

impl ScalingFit {
    /// Least-squares fit of `log10(cost)` against `log10(nnz)`. Points with
    /// a non-positive coordinate are kept in `points` but left out of the
    /// fit; `None` when fewer than two distinct usable x values remain.
    pub fn fit(points: Vec<ScalingPoint>) -> Option<Self> {
        let xy: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.nnz > 0 && p.simulated_cloud_ms > 0.0)
            .map(|p| ((p.nnz as f64).log10(), p.simulated_cloud_ms.log10()))
            .collect();
        let (slope, intercept) = least_squares(&xy)?;
        Some(ScalingFit {
            points,
            slope,
            intercept,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_scaling_csv(&self.points, out)
    }
}

pub fn least_squares(xy: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if xy.len() < 2 || sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

pub fn write_scaling_csv<W: Write>(points: &[ScalingPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "nnz,simulated_cloud_ms")?;
    for p in points {
        writeln!(out, "{},{}", p.nnz, p.simulated_cloud_ms)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Sorted by `nnz`, then name.
    pub records: Vec<BenchRecord>,
    pub failures: Vec<BenchFailure>,
    pub scaling: Option<ScalingFit>,
}

impl BenchReport {
    pub fn sort(&mut self) {
        self.records
            .sort_by(|a, b| a.nnz.cmp(&b.nnz).then_with(|| a.name.cmp(&b.name)));
    }

    pub fn scaling_slope(&self) -> Option<f64> {
        self.scaling.as_ref().map(|s| s.slope)
    }

    /// Scaling points of the suite when there is one, otherwise of every
    /// record.
    pub fn scaling_points(&self) -> Vec<ScalingPoint> {
        match &self.scaling {
            Some(s) => s.points.clone(),
            None => self
                .records
                .iter()
                .map(|r| ScalingPoint {
                    nnz: r.nnz,
                    simulated_cloud_ms: r.cloud_time_ms,
                })
                .collect(),
        }
    }
}
