// Operation counts of the chunked protocol against the diagonal method.

use cssc_spmv::baseline::{compare_ledgers, diag_spmv};
use cssc_spmv::bench::synthetic::{random_matrix_with_density, random_vector};
use cssc_spmv::cost::CostTable;
use cssc_spmv::he::{HeParams, Simulator};
use cssc_spmv::pipeline::{PartyRole, Pipeline};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sim = Simulator::new(HeParams::default())?;
    for (n, density) in [(64, 0.02), (128, 0.05), (256, 0.1)] {
        let m = random_matrix_with_density(n, n, density, n as u64);
        let v = random_vector(n, 100, 1);
        let ours = Pipeline::new(&sim).run(&m, &v)?;
        let base = diag_spmv(&sim, &m, &v, PartyRole::ClientA)?;
        assert_eq!(ours.values, base.values);
        let c = compare_ledgers(&ours, &base, &CostTable::default());
        println!(
            "n={n:<4} nnz={:<5} mults {} vs {}  rotations {} vs {}  time {:.0} vs {:.0} ms ({:.1}x)",
            m.nnz(),
            c.ours.n_mult_cc,
            c.baseline.n_mult_cc,
            c.ours.n_rot,
            c.baseline.n_rot,
            c.ours_time_ms,
            c.baseline_time_ms,
            c.time_ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
