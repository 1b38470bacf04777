// Matrices taller than one ciphertext are split into row blocks, each run
// through the protocol on its own.

use cssc_spmv::bench::synthetic::{random_matrix, random_vector};
use cssc_spmv::he::HeParams;
use cssc_spmv::pipeline::{spmv, spmv_partitioned};
use cssc_spmv::Error;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = HeParams::new(32, 65537)?;
    let m = random_matrix(100, 20, 400, 5);
    let v = random_vector(20, 10, 6);

    // too many rows share the first aligned column
    match spmv(&m, &v, &params, 32) {
        Err(Error::ColumnTooTall { height, .. }) => println!("single block fails: height {height} > 32"),
        other => panic!("expected ColumnTooTall, got {other:?}"),
    }

    let r = spmv_partitioned(&m, &v, &params, 32)?;
    let expect: Vec<i64> = m
        .to_dense()
        .iter()
        .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
        .collect();
    assert_eq!(r.values, expect);
    println!(
        "4 blocks, {} chunks, {} result ciphertexts",
        r.n_ct,
        r.message_ledger.messages().iter().filter(|m| m.kind == cssc_spmv::pipeline::MessageKind::ResultCiphertext).count()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
