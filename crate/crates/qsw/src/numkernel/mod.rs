//! Dense and sparse complex linear algebra shared by every other module.

mod eig;
mod eigh;
mod expm;
mod matrix;
mod scalar;
mod sparse;

pub use eig::eig_general;
pub use eigh::{eig_hermitian, eig_hermitian_checked, eig_hermitian_rows, eigvals_hermitian, EigenSystem};
pub use expm::{expm_action, expm_apply, schrodinger_operator, unitary_apply, LinearOperator, EXPM_TOL};
pub use matrix::{kron, unvec, unvec_slice, vec, CMatrix, HermitianMatrix, TOL_HERM};
pub use num_complex::Complex64 as C64;
pub use sparse::CsrMatrix;

/// Euclidean norm of a complex vector.
pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
