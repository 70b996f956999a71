use super::matrix::{ComplexMatrix, C64};
use super::qr::orthonormal_completion;
use crate::error::{input, Result};

/// Frames are accepted when `‖H*H − I‖_F` stays below this.
pub const FRAME_TOL: f64 = 1e-10;

/// An `m x k` matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry(ComplexMatrix);

impl Isometry {
    pub fn new(h: ComplexMatrix) -> Result<Self> {
        if h.cols() > h.rows() {
            return Err(input(format!(
                "isometry must be tall: got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let iso = Self(h);
        let defect = iso.orthonormality_defect();
        if defect > FRAME_TOL {
            return Err(input(format!("columns not orthonormal: ‖H*H − I‖_F = {defect:.3e}")));
        }
        Ok(iso)
    }

    pub(crate) fn from_trusted(h: ComplexMatrix) -> Self {
        debug_assert!(h.cols() <= h.rows());
        Self(h)
    }

    /// `[I_k; 0]` in `C^{m x k}`.
    pub fn leading(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(input(format!("isometry rank {k} must lie in 1..={m}")));
        }
        Ok(Self(ComplexMatrix::eye(m, k)))
    }

    /// `[0; I_k]` in `C^{m x k}`.
    pub fn trailing(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(input(format!("isometry rank {k} must lie in 1..={m}")));
        }
        Ok(Self(ComplexMatrix::from_fn(m, k, |i, j| {
            if i == m - k + j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })))
    }

    pub fn ambient(&self) -> usize {
        self.0.rows()
    }

    pub fn rank(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j)
    }

    /// `‖H*H − I_k‖_F`
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.0.adjoint_mul(&self.0);
        (&g - &ComplexMatrix::identity(self.rank())).frobenius_norm()
    }

    /// Orthogonal projector `HH*` onto the column span.
    pub fn projector(&self) -> ComplexMatrix {
        &self.0 * &self.0.adjoint()
    }

    /// Unitary `[H R]` extending this frame.
    pub fn completion(&self) -> ComplexMatrix {
        orthonormal_completion(&self.0)
    }

    /// Frame for the orthogonal complement, or `None` when the frame is square.
    pub fn complement(&self) -> Option<Isometry> {
        let (m, k) = self.0.shape();
        (k < m).then(|| Self(self.completion().column_range(k, m)))
    }

    /// Columns `start..end`.
    pub fn columns(&self, start: usize, end: usize) -> Isometry {
        assert!(start < end && end <= self.rank());
        Self(self.0.column_range(start, end))
    }

    pub fn scaled(&self, phase: C64) -> Isometry {
        Self(self.0.scale(phase))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rng::random_isometry;

    #[test]
    fn rejects_non_orthonormal() {
        let m = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]).unwrap();
        assert!(Isometry::new(m).is_err());
        assert!(Isometry::new(ComplexMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn complement_spans_the_rest() {
        let h = random_isometry(5, 2, 11).unwrap();
        let r = h.complement().unwrap();
        assert_eq!(r.rank(), 3);
        assert!(r.orthonormality_defect() < 1e-12);
        let cross = h.matrix().adjoint_mul(r.matrix());
        assert!(cross.frobenius_norm() < 1e-12);
        let p = &h.projector() + &r.projector();
        assert!((&p - &ComplexMatrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn trailing_frame() {
        let h = Isometry::trailing(4, 3).unwrap();
        assert_eq!(h.matrix()[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(h.matrix()[(0, 0)], C64::new(0.0, 0.0));
        assert!(h.orthonormality_defect() == 0.0);
    }
}
