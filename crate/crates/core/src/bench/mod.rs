//! Matrix ingestion, benchmark sweeps and reports.

pub mod config;
pub mod fetch;
pub mod mtx;
pub mod report;
pub mod synthetic;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{BenchConfig, BenchParams, KeyHolder, MatrixEntry, MatrixSource};
pub use report::{BenchFailure, BenchRecord, BenchReport, CommSummary, ScalingFit, ScalingPoint};

use crate::baseline::diag_spmv;
use crate::cost::CostTable;
use crate::error::{Error, Result};
use crate::he::{HeParams, Simulator};
use crate::pipeline::{audit_leakage, AuditReport, MessageLedger, PartyRole, Pipeline, SpmvResult};
use crate::sparse::{CsrMatrix, CsscMatrix};

/// Plaintext `M * v` reduced into the centered range modulo `t`.
pub fn plain_matvec_mod(m: &CsrMatrix, v: &[i64], t: u64) -> Vec<i64> {
    (0..m.rows())
        .map(|i| {
            let (cols, vals) = m.row(i);
            let s: i128 = cols
                .iter()
                .zip(vals)
                .map(|(&j, &a)| a as i128 * v[j] as i128)
                .sum();
            crate::he::to_signed(s.rem_euclid(t as i128) as u64, t)
        })
        .collect()
}

/// Read a Matrix Market file and quantize it to integers.
pub fn load_matrix(path: impl AsRef<Path>, value_scale: f64) -> Result<CsrMatrix> {
    mtx::quantize(&mtx::read_matrix_market(path)?, value_scale).to_csr()
}

pub fn load_entry(entry: &MatrixEntry, params: &BenchParams) -> Result<CsrMatrix> {
    match entry.source()? {
        MatrixSource::Path(p) => load_matrix(p, params.value_scale),
        MatrixSource::Synthetic(s) => Ok(s.generate()),
        MatrixSource::SuiteSparse { group, name } => {
            let cache = fetch::cache_dir();
            let p = fetch::lookup(&cache, &group, &name).ok_or_else(|| {
                Error::Fetch(format!(
                    "{group}/{name} is not in {}; run `spmv fetch {group}/{name}` first",
                    cache.display()
                ))
            })?;
            load_matrix(p, params.value_scale)
        }
    }
}

/// Outcome of one protocol run plus its optional baseline.
#[derive(Debug, Clone)]
pub struct Measured {
    pub record: BenchRecord,
    pub result: SpmvResult,
    /// Result equals the plaintext product modulo `t`.
    pub verified: bool,
}

/// Run the partitioned protocol on `matrix` and, when it applies, the
/// diagonal baseline.
pub fn measure(
    name: &str,
    matrix: &CsrMatrix,
    vector: &[i64],
    he: &HeParams,
    chunk_size: usize,
    key_holder: PartyRole,
    with_baseline: bool,
    table: &CostTable,
) -> Result<Measured> {
    let sim = Simulator::new(he.clone())?;
    let result = Pipeline::new(&sim)
        .chunk_size(chunk_size)
        .key_holder(key_holder)
        .run_partitioned(matrix, vector)?;
    let baseline = if with_baseline && matrix.is_square() && matrix.rows() <= he.slot_count {
        Some(diag_spmv(&sim, matrix, vector, key_holder)?)
    } else {
        None
    };
    let verified = result.values == plain_matvec_mod(matrix, vector, he.plaintext_modulus);
    let record = BenchRecord::new(
        name,
        matrix.rows(),
        matrix.cols(),
        matrix.nnz(),
        &result,
        baseline.as_ref(),
        he,
        table,
    );
    Ok(Measured {
        record,
        result,
        verified,
    })
}

fn bench_one(entry: &MatrixEntry, params: &BenchParams, table: &CostTable) -> Result<BenchRecord> {
    let matrix = load_entry(entry, params)?;
    let vector = synthetic::random_vector(matrix.cols(), 100, params.vector_seed);
    let m = measure(
        &entry.display_name(),
        &matrix,
        &vector,
        &params.he_params()?,
        params.chunk_size(),
        params.key_holder.into(),
        params.baseline,
        table,
    )?;
    if !m.verified {
        return Err(Error::InvalidParams(
            "encrypted result differs from the plaintext product".into(),
        ));
    }
    Ok(m.record)
}

/// Scaling-suite records, in suite order.
pub fn run_scaling_suite(
    suite: &synthetic::ScalingSuite,
    params: &BenchParams,
    table: &CostTable,
) -> Vec<Result<BenchRecord>> {
    let he = match HeParams::new(suite.slots, params.t) {
        Ok(he) => he,
        Err(e) => return vec![Err(e)],
    };
    suite
        .specs()
        .par_iter()
        .map(|spec| {
            let matrix = spec.generate();
            let vector = synthetic::random_vector(matrix.cols(), 100, params.vector_seed);
            let name = format!("scaling-{}", spec.nnz);
            let m = measure(&name, &matrix, &vector, &he, suite.slots, PartyRole::ClientA, false, table)?;
            Ok(m.record)
        })
        .collect()
}

/// Run every configured matrix (in parallel) and the scaling suite.
/// Per-matrix errors are collected in `failures`; the sweep goes on.
pub fn run_bench(config: &BenchConfig) -> BenchReport {
    let table = CostTable::default();
    let params = &config.params;
    let outcomes: Vec<(String, Result<BenchRecord>)> = config
        .matrices
        .par_iter()
        .map(|e| (e.display_name(), bench_one(e, params, &table)))
        .collect();

    let mut report = BenchReport::default();
    let push = |name: String, r: Result<BenchRecord>, report: &mut BenchReport| match r {
        Ok(rec) => report.records.push(rec),
        Err(e) => report.failures.push(BenchFailure {
            name,
            error: e.to_string(),
        }),
    };
    for (name, r) in outcomes {
        push(name, r, &mut report);
    }
    if let Some(suite) = &config.scaling_suite {
        let mut points = Vec::new();
        for r in run_scaling_suite(suite, params, &table) {
            if let Ok(rec) = &r {
                points.push(ScalingPoint {
                    nnz: rec.nnz,
                    simulated_cloud_ms: rec.cloud_time_ms,
                });
            }
            push("scaling-suite".into(), r, &mut report);
        }
        report.scaling = ScalingFit::fit(points);
    }
    report.sort();
    report
}

/// Everything `spmv run` writes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub params: HeParams,
    pub chunk_size: usize,
    pub record: BenchRecord,
    pub values: Vec<i64>,
    pub verified: bool,
    pub chunk_shapes: Vec<(usize, usize)>,
    pub transcript: MessageLedger,
    pub audit: AuditReport,
}

impl RunReport {
    pub fn from_measured(m: Measured, params: HeParams, chunk_size: usize) -> Self {
        let audit = audit_leakage(&m.result.message_ledger);
        RunReport {
            params,
            chunk_size,
            record: m.record,
            values: m.result.values,
            verified: m.verified,
            chunk_shapes: m.result.chunk_shapes,
            transcript: m.result.message_ledger,
            audit,
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

/// Re-run the leakage audit on the transcript stored in a run report.
pub fn audit_report(path: impl AsRef<Path>) -> Result<AuditReport> {
    let report: RunReport = read_json(path)?;
    Ok(audit_leakage(&report.transcript))
}

/// Matrix Market in, CSSC JSON out.
pub fn convert(input: impl AsRef<Path>, output: impl AsRef<Path>, value_scale: f64) -> Result<CsscMatrix> {
    let cssc = load_matrix(input, value_scale)?.to_cssc();
    write_json(&cssc, output)?;
    Ok(cssc)
}

pub fn write_scaling_csv(report: &BenchReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    report::write_scaling_csv(&report.scaling_points(), &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_empty_report() {
        let r = run_bench(&BenchConfig::default());
        assert!(r.records.is_empty() && r.failures.is_empty() && r.scaling.is_none());
    }

    #[test]
    fn failures_do_not_stop_the_sweep() {
        let cfg = BenchConfig::parse(
            r#"
            [params]
            slots = 64
            [[matrix]]
            name = "missing"
            path = "/nonexistent/x.mtx"
            [[matrix]]
            name = "big"
            synthetic = { rows = 40, cols = 40, nnz = 200, seed = 2 }
            [[matrix]]
            name = "small"
            synthetic = { rows = 10, cols = 10, nnz = 20, seed = 1 }
            "#,
        )
        .unwrap();
        let r = run_bench(&cfg);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].name, "missing");
        let names: Vec<_> = r.records.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["small", "big"]);
        assert!(r.records.iter().all(|x| x.baseline_counts.is_some()));
        assert!(r.records.iter().all(|x| x.noise_remaining_bits == Some(87)));
    }

    #[test]
    fn deterministic() {
        let cfg = BenchConfig::parse(
            "[params]\nslots = 32\n[scaling_suite]\npoints = 3\nmax_nnz = 1000\n[[matrix]]\nsynthetic = { rows = 9, cols = 9, nnz = 30, seed = 5 }\n",
        )
        .unwrap();
        let a = serde_json::to_string(&run_bench(&cfg)).unwrap();
        let b = serde_json::to_string(&run_bench(&cfg)).unwrap();
        assert_eq!(a, b);
    }
}
