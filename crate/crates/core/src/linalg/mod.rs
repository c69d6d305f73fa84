//! Self-contained dense complex linear algebra.

mod eigen;
mod lanczos;
mod matrix;
pub mod random;
mod tensor;

pub use eigen::{
    hermitian_eigen, hermitian_eigen_with, min_eigenvalue, operator_norm, spectrum_by_blocks, EigenDecomposition,
};
pub use lanczos::top_eigenpair;
pub use matrix::{inner, sum_hermitian, vector_norm, ComplexMatrix, HermitianMatrix, C64, ONE, ZERO};
pub use tensor::{
    coefficient_matrix, conditional_state, conditional_state_pure, effective_operator, effective_operator_pure,
    expectation_product, expectation_product_pure, kron, kron_hermitian, kron_vec, partial_trace,
    partial_trace_matrix, partial_transpose, Subsystem,
};
