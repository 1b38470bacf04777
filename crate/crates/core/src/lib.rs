//! Sparse matrix-vector multiplication with both operands encrypted under a
//! SIMD-slot homomorphic encryption scheme.
//!
//! The matrix is stored in CSSC (Compressed Sparse Sorted Column) form:
//! rows sorted by descending non-zero count, left-aligned and read column by
//! column. Aligned columns are packed into ciphertext-sized chunks, the
//! vector is gathered to match each chunk's column indices, and the cloud
//! needs one ciphertext multiplication per chunk plus a logarithmic number
//! of rotations to sum the chunk's columns.
//!
//! ```
//! use cssc_spmv::{he::HeParams, pipeline::spmv, sparse::CsrMatrix};
//!
//! let m = CsrMatrix::from_dense(3, &[vec![1, 0, 2], vec![0, 3, 0]]).unwrap();
//! let r = spmv(&m, &[4, 5, 6], &HeParams::default(), 8192).unwrap();
//! assert_eq!(r.values, vec![16, 15]);
//! assert_eq!(r.n_ct, 1);
//! ```

pub mod aggregator;
pub mod baseline;
pub mod bench;
pub mod chunker;
pub mod cost;
pub mod error;
pub mod he;
pub mod pipeline;
pub mod reorg;
pub mod sparse;

pub use error::{Error, Result};
