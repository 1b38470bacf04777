// Reading a symmetric real Matrix Market file, quantizing it and running
// the protocol on it.

use cssc_spmv::bench::mtx::{parse_matrix_market, quantize};
use cssc_spmv::he::HeParams;
use cssc_spmv::pipeline::spmv;

const FILE: &str = "%%MatrixMarket matrix coordinate real symmetric
% lower triangle only
4 4 5
1 1 2.5
2 1 -1.0
3 3 4.0
4 2 0.5
4 4 1.0
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let coo = parse_matrix_market(FILE.as_bytes())?;
    println!("{} entries after mirroring", coo.triples().len());
    assert_eq!(coo.triples().len(), 7);

    // scale by 10 so every value is an integer
    let m = quantize(&coo, 10.0).to_csr()?;
    println!("{:?}", m.to_dense());
    let r = spmv(&m, &[1, 1, 1, 1], &HeParams::default(), 8192)?;
    println!("row sums: {:?}", r.values);
    assert_eq!(r.values, [15, -5, 40, 15]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
