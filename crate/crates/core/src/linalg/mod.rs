//! Dense complex linear algebra: matrices, SVD, Hermitian and general
//! eigensolvers, isometries and seeded random generation.

pub mod eigen;
pub mod isometry;
pub mod matrix;
pub mod qr;
pub mod rng;
pub mod svd;

pub use eigen::{eigenvalues, hermitian_eigen, HermEig};
pub use isometry::Isometry;
pub use matrix::{frobenius_inner, normalized, outer, unit_vector, vec_dot, vec_norm, ComplexMatrix, C64};
pub use qr::{householder_qr, orthonormal_completion};
pub use rng::{derive_seed, random_isometry, random_matrix, random_unitary, SeededRng};
pub use svd::{singular_values, spectral_norm, svd, SvdResult};

/// Polar factor `U V*` of a tall `m x k` matrix `Y = U Σ V*`.
///
/// Rank-deficient inputs still get an isometry: the SVD completes the missing
/// left singular vectors deterministically.
pub fn polar_factor(y: &ComplexMatrix) -> crate::Result<Isometry> {
    if y.cols() > y.rows() {
        return Err(crate::error::input("polar factor needs a tall matrix"));
    }
    let s = svd(y)?;
    Ok(Isometry::from_trusted(s.left.matrix() * &s.right.matrix().adjoint()))
}
