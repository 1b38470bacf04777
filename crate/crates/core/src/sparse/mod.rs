//! Sparse matrix storage: COO for ingestion, CSR as the canonical exchange
//! format, and CSSC, the sorted left-aligned column-major layout the
//! encrypted pipeline packs into ciphertext slots.

mod coo;
mod csr;
mod cssc;

pub use coo::CooMatrix;
pub use csr::CsrMatrix;
pub use cssc::{CsscMatrix, Violation};

/// Element type usable in the sparse containers.
pub trait Scalar: Copy + PartialEq + num_traits::Zero + std::fmt::Debug {}

impl<T: Copy + PartialEq + num_traits::Zero + std::fmt::Debug> Scalar for T {}
