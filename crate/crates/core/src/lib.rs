//! Numerical ranges of rectangular complex matrices.
//!
//! The crate computes closed-form regions for
//!
//! * the classical field of values `F(A)` of a square matrix ([`fov`]),
//! * the rectangular range `w(A) = {y*Ax}` and the Frobenius-norm range
//!   `w_F(A, B)` ([`rectrange`]),
//! * the projector ranges `w_l(A)`, `w_h(A)` with respect to an isometry
//!   ([`projrange`]),
//! * the rank-k range `φ_k(A) = {z : M*AN = zI_k}` ([`rankk`]),
//!
//! and pairs every closed form with an independent check in [`oracles`]
//! (Monte Carlo sampling, power iteration, convex minimization) or with a
//! certified witness search.

pub mod error;
pub mod fov;
pub mod geometry;
pub mod linalg;
pub mod oracles;
pub mod projrange;
pub mod rankk;
pub mod rectrange;

pub use error::{Error, Result};
pub use geometry::{BoundaryCurve, Region, SharpPoint};
pub use linalg::{ComplexMatrix, Isometry, SvdResult, C64};

/// Entries of the 2x3 matrix used for the Frobenius-range figure.
pub fn example_a1() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(6.0, 1.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
        vec![C64::new(-4.0, 0.0), C64::new(-3.0, -6.0), C64::new(0.0, 0.0)],
    ])
    .expect("static matrix")
}

/// The 4x3 matrix whose lower projector range has a corner at `5i` that the
/// higher range does not share.
pub fn example_a2() -> ComplexMatrix {
    let c = C64::new;
    ComplexMatrix::from_rows(&[
        vec![c(1.0, 1.0), c(-7.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 5.0), c(0.02, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(6.0, -1.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    ])
    .expect("static matrix")
}
