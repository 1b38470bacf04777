// Benchmark sweep: a few synthetic matrices plus the scaling suite.
//
// Prints one line per record and the log-log slope of simulated cloud
// time against nnz.

use cssc_spmv::bench::{run_bench, BenchConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = BenchConfig::parse(
        r#"
        [params]
        slots = 256

        [[matrix]]
        name = "sparse-128"
        synthetic = { rows = 128, cols = 128, nnz = 400, seed = 1 }

        [[matrix]]
        name = "denser-200"
        synthetic = { rows = 200, cols = 200, nnz = 3000, seed = 2 }

        [scaling_suite]
        points = 10
        min_nnz = 100
        max_nnz = 100000
        "#,
    )?;
    let report = run_bench(&cfg);
    println!("{:<16} {:>7} {:>6} {:>10} {:>12}", "name", "nnz", "n_ct", "cloud_ms", "baseline_mul");
    for r in &report.records {
        let base = r
            .baseline_counts
            .map(|b| b.n_mult_cc.to_string())
            .unwrap_or_else(|| "-".into());
        println!(
            "{:<16} {:>7} {:>6} {:>10.1} {:>12}",
            r.name, r.nnz, r.n_ct, r.cloud_time_ms, base
        );
    }
    for f in &report.failures {
        println!("failed {}: {}", f.name, f.error);
    }
    let slope = report.scaling_slope().ok_or("no scaling fit")?;
    println!("log-log slope: {slope:.3}");
    assert!(report.failures.is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
