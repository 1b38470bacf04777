// End-to-end run of the three-party protocol on a random sparse matrix,
// checked against a plaintext product.

use cssc_spmv::bench::synthetic::{random_matrix, random_vector};
use cssc_spmv::cost::{estimate_time, CostTable};
use cssc_spmv::he::{HeParams, Simulator};
use cssc_spmv::pipeline::{PartyRole, Pipeline};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = random_matrix(48, 64, 300, 11);
    let v = random_vector(64, 100, 12);
    let sim = Simulator::new(HeParams::default())?;
    let r = Pipeline::new(&sim).key_holder(PartyRole::ClientB).run(&m, &v)?;

    let t = 65537i128;
    for i in 0..m.rows() {
        let (cols, vals) = m.row(i);
        let s: i128 = cols.iter().zip(vals).map(|(&j, &a)| a as i128 * v[j] as i128).sum();
        assert_eq!((r.values[i] as i128 - s).rem_euclid(t), 0);
    }

    println!("chunks: {:?}", r.chunk_shapes);
    println!("ops: {:?}", r.op_ledger);
    println!("noise left: {:?} bits", r.noise_budget_remaining_bits);
    println!("estimated time: {:.1} ms", estimate_time(&r.op_ledger, &CostTable::default()));
    for msg in r.message_ledger.messages() {
        println!("  {msg}");
    }
    assert_eq!(r.op_ledger.n_mult_cc as usize, r.n_ct);
    assert_eq!(r.noise_budget_remaining_bits, Some(87));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
