//! Projector ranges of a rectangular matrix with respect to an isometry `H`.
//!
//! For tall `A` (`m > n`) and `H: m x n` with `H*H = I`:
//! `w_l(A) = F(H*A)` and `w_h(A) = F(AH*)`. For wide `A` the roles flip:
//! `H: n x m`, `w_l(A) = F(AH)` and `w_h(A) = F(HA)`. Always `w_l ⊆ w_h`.
//!
//! For a single column `a = (a₁; b)` the higher range `F([a 0])` is the
//! elliptical disc with foci `0` and `a₁`, full major axis `‖a‖₂` and full
//! minor axis `‖b‖₂`. In particular `a₁ = 0` gives the disc of radius
//! `‖b‖₂/2`.

use crate::error::{input, Result};
use crate::fov::{corners, fov_boundary};
use crate::geometry::{BoundaryCurve, Region};
use crate::linalg::{eigenvalues, polar_factor, svd, vec_norm, ComplexMatrix, Isometry, C64};

/// Relative tolerance for matching sharp points between curves.
pub const SHARP_MATCH_REL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Tall,
    Wide,
}

#[derive(Clone, Debug)]
pub struct ProjectorSetting {
    a: ComplexMatrix,
    h: Isometry,
    orientation: Orientation,
}

impl ProjectorSetting {
    /// `H` must be `m x n` for `m ≥ n` and `n x m` for `m < n`.
    pub fn new(a: ComplexMatrix, h: Isometry) -> Result<Self> {
        let (m, n) = a.shape();
        let (orientation, want) = if m >= n { (Orientation::Tall, (m, n)) } else { (Orientation::Wide, (n, m)) };
        if (h.ambient(), h.rank()) != want {
            return Err(input(format!(
                "frame H must be {}x{} for a {m}x{n} matrix, got {}x{}",
                want.0,
                want.1,
                h.ambient(),
                h.rank()
            )));
        }
        Ok(ProjectorSetting { a, h, orientation })
    }

    /// `H = [I; 0]`.
    pub fn with_leading_frame(a: ComplexMatrix) -> Result<Self> {
        let (m, n) = a.shape();
        let h = Isometry::leading(m.max(n), m.min(n))?;
        Self::new(a, h)
    }

    /// `H = U_q V*`, the polar factor, for which `H*A = (A*A)^{1/2}`.
    pub fn with_polar_frame(a: ComplexMatrix) -> Result<Self> {
        let h = if a.rows() >= a.cols() { polar_factor(&a)? } else { polar_factor(&a.adjoint())? };
        Self::new(a, h)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn frame(&self) -> &Isometry {
        &self.h
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `P = HH*`.
    pub fn projector(&self) -> ComplexMatrix {
        self.h.projector()
    }

    /// `H*A` (tall) or `AH` (wide); size `min(m, n)`.
    pub fn lower_matrix(&self) -> ComplexMatrix {
        match self.orientation {
            Orientation::Tall => self.h.matrix().adjoint_mul(&self.a),
            Orientation::Wide => &self.a * self.h.matrix(),
        }
    }

    /// `AH*` (tall) or `HA` (wide); size `max(m, n)`.
    pub fn higher_matrix(&self) -> ComplexMatrix {
        match self.orientation {
            Orientation::Tall => &self.a * &self.h.matrix().adjoint(),
            Orientation::Wide => self.h.matrix() * &self.a,
        }
    }
}

pub fn w_lower(s: &ProjectorSetting, n_angles: usize) -> Result<BoundaryCurve> {
    fov_boundary(&s.lower_matrix(), n_angles)
}

pub fn w_higher(s: &ProjectorSetting, n_angles: usize) -> Result<BoundaryCurve> {
    fov_boundary(&s.higher_matrix(), n_angles)
}

/// `F([a 0])` as an ellipse with foci `0`, `a₁` and full major axis `‖a‖₂`.
pub fn vector_ellipse(a: &[C64]) -> Result<Region> {
    if a.len() < 2 {
        return Err(input("vector ellipse needs a vector of length at least 2"));
    }
    let a1 = a[0];
    let nb = vec_norm(&a[1..]);
    let o = C64::new(0.0, 0.0);
    if nb == 0.0 {
        return Ok(Region::segment(o, a1));
    }
    Region::ellipse(o, a1, vec_norm(a))
}

/// `[a 0_{m×(m−1)}]`.
pub fn column_padded(a: &[C64]) -> ComplexMatrix {
    let m = a.len();
    ComplexMatrix::from_fn(m, m, |i, j| if j == 0 { a[i] } else { C64::new(0.0, 0.0) })
}

/// Householder reduction of `[a 0]`.
///
/// Returns the unitary `U = diag(1, I − 2uu*/‖u‖²)` with
/// `u = b − (‖b‖a₂/|a₂|)e₁` and the `2x2` compression
/// `[[a₁, 0], [‖b‖a₂/|a₂|, 0]]` of `U*[a 0]U`.
pub fn householder_reduction(a: &[C64]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = a.len();
    if m < 2 {
        return Err(input("householder reduction needs a vector of length at least 2"));
    }
    let b = &a[1..];
    let nb = vec_norm(b);
    let phase = if b[0].norm() > 0.0 { b[0] / b[0].norm() } else { C64::new(1.0, 0.0) };
    let beta = phase * nb;
    let mut u = b.to_vec();
    u[0] -= beta;
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let mut q = ComplexMatrix::identity(m);
    if uu > 0.0 {
        for i in 0..m - 1 {
            for j in 0..m - 1 {
                q[(i + 1, j + 1)] -= u[i] * u[j].conj() * (2.0 / uu);
            }
        }
    }
    let z = C64::new(0.0, 0.0);
    let small = ComplexMatrix::from_rows(&[vec![a[0], z], vec![beta, z]])?;
    Ok((q, small))
}

/// Hermitian matrices whose fields of values are the real and imaginary
/// projections of `w_h(A)` for `H = [I; 0]`:
/// `[[ℋ(A₁), A₂*/2], [A₂/2, 0]]` and `(T − T*)/2i` with `T = [A 0]`.
pub fn re_im_parts(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (m, n) = a.shape();
    if m <= n {
        return Err(input(format!("re/im decomposition needs m > n, got {m}x{n}")));
    }
    let t = a.pad_to(m, m);
    let re = t.hermitian_part();
    let im = t.scale(C64::new(0.0, -1.0)).hermitian_part();
    Ok((re, im))
}

/// One row of [`sharp_transfer_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferRow {
    pub lambda0: C64,
    /// `λ₀` is within `1e−6` of an eigenvalue of the lower matrix.
    pub in_spectrum: bool,
    /// `λ₀` is also a detected corner of `w_l`.
    pub sharp_in_lower: bool,
}

/// For each nonzero corner of `w_h`: is it an eigenvalue of `H*A`, and a
/// corner of `w_l`?
pub fn sharp_transfer_report(s: &ProjectorSetting, n_angles: usize) -> Result<Vec<TransferRow>> {
    if s.orientation != Orientation::Tall {
        return Err(input("sharp transfer report needs a tall setting"));
    }
    let scale = svd(&s.a)?.sigma_max().max(f64::MIN_POSITIVE);
    let tol = SHARP_MATCH_REL_TOL * scale;
    let low = s.lower_matrix();
    let high = s.higher_matrix();
    let low_corners = corners(&low, &fov_boundary(&low, n_angles)?)?;
    let high_corners = corners(&high, &fov_boundary(&high, n_angles)?)?;
    let spectrum = eigenvalues(&low)?;
    Ok(high_corners
        .iter()
        .map(|c| c.location())
        .filter(|l| l.norm() > tol)
        .map(|l| TransferRow {
            lambda0: l,
            in_spectrum: spectrum.iter().any(|e| (e - l).norm() <= 1e-6),
            sharp_in_lower: low_corners.iter().any(|c| (c.location() - l).norm() <= tol),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::support_gap;
    use crate::linalg::{random_isometry, random_matrix};
    use crate::{example_a1, example_a2, fov};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn leading_frame_lower_is_top_block() {
        let a = random_matrix(5, 3, 1);
        let s = ProjectorSetting::with_leading_frame(a.clone()).unwrap();
        assert_eq!(s.lower_matrix(), a.submatrix(0, 0, 3, 3));
        assert_eq!(s.higher_matrix(), a.pad_to(5, 5));
        let w = ProjectorSetting::with_leading_frame(a.adjoint()).unwrap();
        assert_eq!(w.orientation(), Orientation::Wide);
        assert_eq!(w.lower_matrix(), a.adjoint().submatrix(0, 0, 3, 3));
    }

    #[test]
    fn rejects_wrong_frame() {
        let a = random_matrix(4, 2, 1);
        let h = random_isometry(4, 3, 2).unwrap();
        assert!(ProjectorSetting::new(a, h).is_err());
    }

    #[test]
    fn orthonormal_a_gives_point_and_segment() {
        let a = random_isometry(4, 2, 3).unwrap().into_matrix();
        let s = ProjectorSetting::new(a.clone(), Isometry::new(a).unwrap()).unwrap();
        let low = w_lower(&s, 64).unwrap();
        assert!(low.points.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
        let high = w_higher(&s, 64).unwrap();
        let seg = Region::segment(c(0.0, 0.0), c(1.0, 0.0)).hull_curve(64).unwrap();
        assert!(support_gap(&high, &seg).unwrap().abs() < 1e-12);
        assert!(support_gap(&seg, &high).unwrap().abs() < 1e-12);
    }

    #[test]
    fn a2_lower_matrix_is_upper_triangular() {
        let s = ProjectorSetting::new(example_a2(), Isometry::trailing(4, 3).unwrap()).unwrap();
        let t = ComplexMatrix::from_rows(&[
            vec![c(0.0, 5.0), c(0.02, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(6.0, -1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(s.lower_matrix(), t);
        let ev = eigenvalues(&s.higher_matrix()).unwrap();
        assert!(ev.iter().any(|e| (e - c(0.0, 5.0)).norm() < 1e-10));
        assert!(ev.iter().any(|e| e.norm() < 1e-10));
    }

    #[test]
    fn lower_inside_higher_for_random_frames() {
        for seed in 0..10 {
            let (m, n) = (4 + seed as usize % 2, 2 + seed as usize % 2);
            let a = random_matrix(m, n, 50 + seed);
            let h = random_isometry(m, n, 90 + seed).unwrap();
            let s = ProjectorSetting::new(a.clone(), h).unwrap();
            let gap = support_gap(&w_lower(&s, 360).unwrap(), &w_higher(&s, 360).unwrap()).unwrap();
            assert!(gap <= 1e-9, "seed {seed}: {gap}");
            let w = ProjectorSetting::new(a.adjoint(), random_isometry(m, n, seed).unwrap()).unwrap();
            let gap = support_gap(&w_lower(&w, 360).unwrap(), &w_higher(&w, 360).unwrap()).unwrap();
            assert!(gap <= 1e-9, "wide seed {seed}: {gap}");
        }
    }

    #[test]
    fn augmented_unitary_similarity() {
        let a = random_matrix(5, 3, 4);
        let h = random_isometry(5, 3, 5).unwrap();
        let r = h.complement().unwrap();
        let top = h.matrix().adjoint_mul(&a);
        let bottom = r.matrix().adjoint_mul(&a);
        let aug = top.vstack(&bottom).unwrap().pad_to(5, 5);
        let s = ProjectorSetting::new(a, h).unwrap();
        let g1 = fov_boundary(&aug, 360).unwrap();
        let g2 = w_higher(&s, 360).unwrap();
        assert!(support_gap(&g1, &g2).unwrap().abs() <= 1e-8);
        assert!(support_gap(&g2, &g1).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn polar_frame_attains_sigma_max() {
        let a = random_matrix(5, 3, 8);
        let sig = svd(&a).unwrap().sigma_max();
        let s = ProjectorSetting::with_polar_frame(a.clone()).unwrap();
        let low = w_lower(&s, 360).unwrap();
        let reach = low.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((reach - sig).abs() < 1e-9);
        for seed in 0..100 {
            let h = random_isometry(5, 3, 1000 + seed).unwrap();
            let s = ProjectorSetting::new(a.clone(), h).unwrap();
            let reach = w_lower(&s, 90).unwrap().points.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(reach <= sig + 1e-9);
        }
    }

    #[test]
    fn vector_ellipse_cases() {
        let o = c(0.0, 0.0);
        assert_eq!(vector_ellipse(&[c(2.0, 1.0), o, o]).unwrap(), Region::segment(o, c(2.0, 1.0)));
        assert_eq!(vector_ellipse(&[o, c(3.0, 0.0), c(0.0, 4.0)]).unwrap(), Region::disc(o, 2.5));
        assert!(vector_ellipse(&[c(1.0, 0.0)]).is_err());
        let a = [c(3.0, 0.0), c(4.0, 0.0)];
        let e = vector_ellipse(&a).unwrap();
        assert_eq!(e, Region::Ellipse { focus1: o, focus2: c(3.0, 0.0), major_axis: 5.0 });
        let sweep = fov_boundary(&column_padded(&a), 720).unwrap();
        let curve = e.hull_curve(720).unwrap();
        assert!(support_gap(&sweep, &curve).unwrap().abs() < 1e-8);
        assert!(support_gap(&curve, &sweep).unwrap().abs() < 1e-8);
    }

    #[test]
    fn householder_compression_has_same_range() {
        for seed in 0..5 {
            let a = crate::linalg::SeededRng::new(seed).gaussian_vector(4);
            let (q, small) = householder_reduction(&a).unwrap();
            assert!((&q.adjoint_mul(&q) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-12);
            let t = column_padded(&a);
            let red = &q.adjoint_mul(&t) * &q;
            assert!((&red - &small.pad_to(4, 4)).frobenius_norm() < 1e-12);
            let g1 = fov_boundary(&small, 360).unwrap();
            let g2 = fov_boundary(&t, 360).unwrap();
            assert!(support_gap(&g1, &g2).unwrap().abs() < 1e-8);
            assert!(support_gap(&g2, &g1).unwrap().abs() < 1e-8);
        }
        let (_, small) = householder_reduction(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(small[(1, 0)], c(2.0, 0.0));
    }

    #[test]
    fn re_im_parts_match_projections() {
        let a = random_matrix(4, 2, 12);
        let (re, im) = re_im_parts(&a).unwrap();
        assert!(re.is_hermitian(1e-14) && im.is_hermitian(1e-14));
        let s = ProjectorSetting::with_leading_frame(a.clone()).unwrap();
        let ((rlo, rhi), (ilo, ihi)) = w_higher(&s, 720).unwrap().axis_extents().unwrap();
        let er = crate::linalg::hermitian_eigen(&re).unwrap().lambda;
        let ei = crate::linalg::hermitian_eigen(&im).unwrap().lambda;
        assert!((rhi - er[0]).abs() < 1e-8 && (rlo - er[3]).abs() < 1e-8);
        assert!((ihi - ei[0]).abs() < 1e-8 && (ilo - ei[3]).abs() < 1e-8);
        assert!(re_im_parts(&a.adjoint()).is_err());

        let mut h = random_matrix(2, 2, 3);
        h = h.hermitian_part();
        let padded = h.vstack(&ComplexMatrix::zeros(2, 2)).unwrap();
        let (re, _) = re_im_parts(&padded).unwrap();
        assert!((&re - &h.pad_to(4, 4)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn spectrum_of_a1_inside_higher_range() {
        let a = example_a1().adjoint();
        let s = ProjectorSetting::with_leading_frame(a).unwrap();
        let curve = w_higher(&s, 720).unwrap();
        let a1 = s.lower_matrix();
        for e in eigenvalues(&a1).unwrap() {
            assert!(curve.contains(e, 1e-8));
        }
    }

    #[test]
    fn diagonal_corners_transfer() {
        let d = ComplexMatrix::from_real(4, 3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        let s = ProjectorSetting::with_leading_frame(d).unwrap();
        let rows = sharp_transfer_report(&s, 720).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            assert!(r.in_spectrum && r.sharp_in_lower, "{r:?}");
        }
        let wide = ProjectorSetting::with_leading_frame(random_matrix(2, 3, 1)).unwrap();
        assert!(sharp_transfer_report(&wide, 64).is_err());
    }

    #[test]
    fn a2_corner_at_5i_only_in_lower() {
        let s = ProjectorSetting::new(example_a2(), Isometry::trailing(4, 3).unwrap()).unwrap();
        let low = w_lower(&s, 720).unwrap();
        let high = w_higher(&s, 720).unwrap();
        let five_i = c(0.0, 5.0);
        let lc = fov::corners(&s.lower_matrix(), &low).unwrap();
        assert!(lc.iter().any(|k| (k.location() - five_i).norm() <= 1e-6), "{lc:?}");
        let hc = fov::corners(&s.higher_matrix(), &high).unwrap();
        assert!(hc.iter().all(|k| (k.sharp.location - five_i).norm() > 1e-3));
    }
}
