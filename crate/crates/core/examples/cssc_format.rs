// CSR to CSSC: rows sorted by non-zero count, left-aligned, stored column
// by column. Expanding and unpermuting gives the original matrix back.

use cssc_spmv::sparse::CsrMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dense = vec![
        vec![0, 5, 0, 0],
        vec![1, 0, 2, 3],
        vec![0, 0, 0, 0],
        vec![4, 0, 6, 0],
    ];
    let csr = CsrMatrix::from_dense(4, &dense)?;
    let cssc = csr.to_cssc();

    println!("VA = {:?}", cssc.values);
    println!("CI = {:?}", cssc.col_indices);
    println!("RM = {:?}", cssc.row_map);
    println!("CP = {:?}", cssc.col_ptrs);
    println!("aligned column heights = {:?}", cssc.column_heights());

    assert_eq!(cssc.row_map, [1, 3, 0, 2]);
    assert_eq!(cssc.col_ptrs, [0, 3, 5, 6]);
    assert_eq!(cssc.values, [1, 4, 5, 2, 6, 3]);
    assert!(cssc.validate().is_empty());
    assert_eq!(cssc.to_dense(), dense);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
