// Packing aligned columns into chunks and gathering the vector to match.

use cssc_spmv::aggregator::{rotation_count, rotation_schedule};
use cssc_spmv::chunker::{generate_chunks, plan_chunks};
use cssc_spmv::reorg::reorg_segment;
use cssc_spmv::sparse::CsrMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // heights 4, 2, 1 in 8 slots: the first two columns fill 4 x 2 slots,
    // the last one gets its own chunk
    assert_eq!(plan_chunks(&[4, 2, 1], 8)?, [(0, 2), (2, 1)]);

    let dense = vec![
        vec![1, 2, 3],
        vec![4, 5, 0],
        vec![6, 0, 0],
        vec![7, 0, 0],
    ];
    let m = CsrMatrix::from_dense(3, &dense)?;
    let chunks = generate_chunks(&m.to_cssc(), 8)?;
    let v = [10, 20, 30];
    for (i, c) in chunks.chunks.iter().enumerate() {
        let seg = reorg_segment(&v, &c.colidx_flat)?;
        println!(
            "chunk {i}: {}x{} values={:?} colidx={:?} vector={:?} padding={} rotations={:?}",
            c.rows,
            c.cols,
            c.value_flat,
            c.colidx_flat,
            seg,
            c.padding(),
            rotation_schedule(c.rows, c.cols)
        );
    }
    assert_eq!(chunks.r_list, [4, 1]);
    assert_eq!(chunks.c_list, [2, 1]);
    assert_eq!(chunks.chunks[0].padding(), 2);

    // a chunk with c columns needs numBits(c) - 1 + popcount(c) - 1 rotations
    for c in [1, 2, 3, 4, 7, 8] {
        println!("c = {c}: {} rotations", rotation_count(c));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
