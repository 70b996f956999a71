//! Rectangular numerical range `w(A) = {y*Ax : ‖x‖ = ‖y‖ = 1}` and the
//! Frobenius-norm range `w_F(A, B)`.
//!
//! `w(A)` is the closed disc of radius `σ₁(A)` about the origin whenever
//! `A` has at least two rows or two columns. For a `1x1` matrix `[a]` the
//! set is the circle `|z| = |a|`; [`w_disc`] returns that circle and flags it.

use std::f64::consts::TAU;

use crate::error::{input, Error, Result};
use crate::geometry::Region;
use crate::linalg::{
    derive_seed, frobenius_inner, outer, svd, vec_dot, vec_norm, ComplexMatrix, Isometry, SeededRng, C64,
};

/// Unit-norm tolerance for user-supplied vectors.
pub const UNIT_TOL: f64 = 1e-8;
/// Size of the deterministic `B₀(θ)` family appended to [`wnorm_union`].
pub const B0_FAMILY: usize = 32;

/// Unit vectors `x ∈ ℂⁿ`, `y ∈ ℂᵐ` and `value = y*Ax`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessVectors {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub value: C64,
}

impl WitnessVectors {
    /// `P = yy*`.
    pub fn p(&self) -> ComplexMatrix {
        outer(&self.y, &self.y)
    }

    /// `Q = xx*`.
    pub fn q(&self) -> ComplexMatrix {
        outer(&self.x, &self.x)
    }

    /// `S = yx*`.
    pub fn s(&self) -> ComplexMatrix {
        outer(&self.y, &self.x)
    }

    /// `|y*Ax − value|`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        (vec_dot(&self.y, &a.apply(&self.x)) - self.value).norm()
    }
}

/// Output of [`w_disc`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiscRange {
    pub region: Region,
    pub sigma_max: f64,
    /// Set for `1x1` input, where the range is a circle rather than a disc.
    pub warning: Option<&'static str>,
}

pub const SCALAR_WARNING: &str = "1x1 input: the range is the circle |z| = |a|, not a disc";

/// `w(A)`: `Disc(0, σ₁)`, `Point(0)` for `A = 0`, `Circle(0, |a|)` for `1x1`.
pub fn w_disc(a: &ComplexMatrix) -> Result<DiscRange> {
    let s = svd(a)?.sigma_max();
    let o = C64::new(0.0, 0.0);
    if a.shape() == (1, 1) {
        return Ok(DiscRange { region: Region::circle(o, s), sigma_max: s, warning: Some(SCALAR_WARNING) });
    }
    Ok(DiscRange { region: Region::disc(o, s), sigma_max: s, warning: None })
}

fn check_unit(v: &[C64], len: usize, name: &str) -> Result<()> {
    if v.len() != len {
        return Err(input(format!("{name} has length {}, expected {len}", v.len())));
    }
    let n = vec_norm(v);
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(input(format!("{name} must be a unit vector, has norm {n}")));
    }
    Ok(())
}

/// `y*Ax` for unit `x ∈ ℂⁿ`, `y ∈ ℂᵐ`.
pub fn w_value(a: &ComplexMatrix, x: &[C64], y: &[C64]) -> Result<C64> {
    check_unit(x, a.cols(), "x")?;
    check_unit(y, a.rows(), "y")?;
    Ok(vec_dot(y, &a.apply(x)))
}

/// Witness for the boundary point `σ₁e^{iθ}`.
pub fn boundary_witness(a: &ComplexMatrix, theta: f64) -> Result<WitnessVectors> {
    let s = svd(a)?;
    let sigma = s.sigma_max();
    if sigma == 0.0 {
        return Err(Error::Domain("zero matrix has no boundary witness".into()));
    }
    let x = s.right.column(0);
    let phase = C64::from_polar(1.0, -theta);
    let y: Vec<C64> = s.left.column(0).iter().map(|u| phase * u).collect();
    let value = vec_dot(&y, &a.apply(&x));
    Ok(WitnessVectors { x, y, value })
}

/// Witness for any `z` with `|z| ≤ σ₁`.
pub fn interior_witness(a: &ComplexMatrix, z: C64) -> Result<WitnessVectors> {
    let (m, n) = a.shape();
    let s = svd(a)?;
    let sigma = s.sigma_max();
    if z.norm() > sigma + 1e-9 {
        return Err(Error::OutOfRange(format!("{z}"), sigma));
    }
    if m == 1 && n == 1 {
        let av = a[(0, 0)];
        if sigma == 0.0 || (z.norm() - sigma).abs() > 1e-9 {
            return Err(Error::OutOfRange(format!("{z} (1x1 range is a circle)"), sigma));
        }
        let y0 = (z / av).conj();
        let y = vec![y0 / y0.norm()];
        let x = vec![C64::new(1.0, 0.0)];
        let value = vec_dot(&y, &a.apply(&x));
        return Ok(WitnessVectors { x, y, value });
    }
    if m == 1 {
        let t = interior_witness(&a.adjoint(), z.conj())?;
        let value = vec_dot(&t.x, &a.apply(&t.y));
        return Ok(WitnessVectors { x: t.y, y: t.x, value });
    }
    if sigma == 0.0 {
        let x = crate::linalg::unit_vector(n, 0);
        let y = crate::linalg::unit_vector(m, 0);
        return Ok(WitnessVectors { x, y, value: C64::new(0.0, 0.0) });
    }
    let x = s.right.column(0);
    let u = s.left.column(0);
    let full = s.full_left();
    let y0 = full.column(1);
    let c = (z.norm() / sigma).min(1.0);
    let sn = (1.0 - c * c).max(0.0).sqrt();
    let phase = if z.norm() > 0.0 { (z / z.norm()).conj() } else { C64::new(1.0, 0.0) };
    let y: Vec<C64> = u.iter().zip(&y0).map(|(ui, yi)| phase * c * ui + yi * sn).collect();
    let value = vec_dot(&y, &a.apply(&x));
    Ok(WitnessVectors { x, y, value })
}

/// `‖Ξ*AH‖₂` for frames `Ξ: m x l`, `H: n x k`.
pub fn compression_radius(a: &ComplexMatrix, xi: &Isometry, h: &Isometry) -> Result<f64> {
    if xi.ambient() != a.rows() || h.ambient() != a.cols() {
        return Err(input(format!(
            "frames of ambient size {} and {} do not fit a {}x{} matrix",
            xi.ambient(),
            h.ambient(),
            a.rows(),
            a.cols()
        )));
    }
    let c = &xi.matrix().adjoint_mul(a) * h.matrix();
    Ok(svd(&c)?.sigma_max())
}

/// `[[0, 2A], [0, 0]]`, whose field of values equals `w(A)`.
pub fn dilation(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = a.shape();
    let mut d = ComplexMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            d[(i, m + j)] = a[(i, j)] * 2.0;
        }
    }
    d
}

/// `w_F(A, B)` for `‖B‖_F ≥ 1`: the disc with center `⟨A,B⟩/‖B‖²` and
/// radius `‖A − cB‖_F·√(1 − ‖B‖^{−2})`.
pub fn wnorm_disc(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Region> {
    let ip = frobenius_inner(a, b)?;
    let nb2 = b.frobenius_norm().powi(2);
    if nb2 < 1.0 - 1e-12 {
        return Err(Error::Domain(format!(
            "the Frobenius norm range needs ||B||_F >= 1, got ||B||_F = {}",
            nb2.sqrt()
        )));
    }
    let center = ip / nb2;
    let excess = nb2 - 1.0;
    let factor = if excess <= 4.0 * f64::EPSILON { 0.0 } else { (excess / nb2).sqrt() };
    let radius = (a - &b.scale(center)).frobenius_norm() * factor;
    Ok(Region::disc(center, radius))
}

/// `B₀(θ) = e^{−iθ}A/‖A‖_F`, for which `w_F(A, B₀) = {‖A‖_F e^{iθ}}`.
pub fn b0(a: &ComplexMatrix, theta: f64) -> Option<ComplexMatrix> {
    let nf = a.frobenius_norm();
    (nf > 0.0).then(|| a.scale(C64::from_polar(1.0 / nf, -theta)))
}

/// Summary of a sampled union of Frobenius-norm discs.
#[derive(Clone, Debug, PartialEq)]
pub struct WnormReport {
    pub n_discs: usize,
    pub frobenius_norm: f64,
    /// Discs reaching outside `D(0, ‖A‖_F + 1e−9)`.
    pub containment_failures: usize,
    /// `max(|center| + radius)` over all discs.
    pub sup_abs: f64,
}

/// Samples `w_F(A, B)` for random `B = s·G/‖G‖_F` (`s ~ U[1, 3]`) and the
/// deterministic `B₀(θ)` family on 32 angles.
pub fn wnorm_union(a: &ComplexMatrix, n_samples: usize, seed: u64) -> Result<WnormReport> {
    let (m, n) = a.shape();
    let nf = a.frobenius_norm();
    let mut report = WnormReport { n_discs: 0, frobenius_norm: nf, containment_failures: 0, sup_abs: 0.0 };
    let mut record = |r: &Region| {
        let reach = r.outer_radius();
        report.n_discs += 1;
        report.sup_abs = report.sup_abs.max(reach);
        if reach > nf + 1e-9 {
            report.containment_failures += 1;
        }
    };
    for i in 0..n_samples {
        let mut rng = SeededRng::new(derive_seed(seed, i as u64));
        let g = rng.gaussian_matrix(m, n);
        let s = rng.uniform_in(1.0, 3.0);
        let b = g.scale_real(s / g.frobenius_norm());
        record(&wnorm_disc(a, &b)?);
    }
    for j in 0..B0_FAMILY {
        if let Some(b) = b0(a, TAU * j as f64 / B0_FAMILY as f64) {
            record(&wnorm_disc(a, &b)?);
        }
    }
    Ok(report)
}

/// Result of [`center_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterBound {
    /// `‖σ(B)‖₂ ≥ √rank(B)`.
    pub hypothesis: bool,
    /// `|⟨A,B⟩|/‖B‖_F² ≤ σ₁(A)`.
    pub bound: bool,
    pub center_abs: f64,
    pub sigma_max: f64,
}

impl CenterBound {
    /// The implication `hypothesis ⇒ bound`.
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.bound
    }
}

/// Checks the center bound of `w_F(A, B)` under its rank hypothesis.
pub fn center_bound_check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<CenterBound> {
    let sb = svd(b)?;
    let rank = sb.rank(1e-10);
    if rank == 0 {
        return Err(input("center bound needs B != 0"));
    }
    let nb = b.frobenius_norm();
    let hypothesis = nb >= (rank as f64).sqrt() * (1.0 - 1e-14);
    let center_abs = frobenius_inner(a, b)?.norm() / (nb * nb);
    let sigma_max = svd(a)?.sigma_max();
    let bound = center_abs <= sigma_max * (1.0 + 1e-12) + 1e-300;
    Ok(CenterBound { hypothesis, bound, center_abs, sigma_max })
}

/// `⟨A, yx*⟩`, which equals `y*Ax`.
pub fn rank1_value(a: &ComplexMatrix, y: &[C64], x: &[C64]) -> Result<C64> {
    check_unit(x, a.cols(), "x")?;
    check_unit(y, a.rows(), "y")?;
    frobenius_inner(a, &outer(y, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_isometry, random_matrix, SeededRng};
    use crate::{example_a1, fov};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn w_disc_examples() {
        let a = ComplexMatrix::from_real(2, 1, &[3.0, 4.0]).unwrap();
        assert_eq!(w_disc(&a).unwrap().region, Region::disc(c(0.0, 0.0), 5.0));
        let z = ComplexMatrix::zeros(3, 2);
        assert_eq!(w_disc(&z).unwrap().region, Region::point(c(0.0, 0.0)));
        let one = ComplexMatrix::from_rows(&[vec![c(3.0, 4.0)]]).unwrap();
        let r = w_disc(&one).unwrap();
        assert!(matches!(r.region, Region::Circle { radius, .. } if (radius - 5.0).abs() < 1e-14));
        assert!(r.warning.is_some());
    }

    #[test]
    fn w_value_examples() {
        let a = example_a1();
        let e1 = crate::linalg::unit_vector(3, 0);
        let f1 = crate::linalg::unit_vector(2, 0);
        assert_eq!(w_value(&a, &e1, &f1).unwrap(), c(6.0, 1.0));
        assert_eq!(rank1_value(&a, &f1, &e1).unwrap(), c(6.0, 1.0));
        assert!(w_value(&a, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], &f1).is_err());
        let s = svd(&a).unwrap();
        let top = w_value(&a, &s.right.column(0), &s.left.column(0)).unwrap();
        assert!((top.norm() - s.sigma_max()).abs() < 1e-12);
        assert!((rank1_value(&a, &s.left.column(0), &s.right.column(0)).unwrap() - s.sigma_max()).norm() < 1e-12);
    }

    #[test]
    fn y_orthogonal_to_ax_gives_zero() {
        let a = example_a1();
        let x = crate::linalg::unit_vector(3, 1);
        let ax = a.apply(&x);
        let y = crate::linalg::normalized(&[-ax[1].conj(), ax[0].conj()]).unwrap();
        assert!(w_value(&a, &x, &y).unwrap().norm() < 1e-14);
    }

    #[test]
    fn boundary_witness_examples() {
        let d = ComplexMatrix::from_real(3, 2, &[3.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let w = boundary_witness(&d, 0.0).unwrap();
        assert!((w.value - c(3.0, 0.0)).norm() < 1e-12);
        let w = boundary_witness(&d, TAU / 4.0).unwrap();
        assert!((w.value - c(0.0, 3.0)).norm() < 1e-12);
        assert!(boundary_witness(&ComplexMatrix::zeros(2, 2), 0.0).is_err());
        let a = example_a1();
        let s = svd(&a).unwrap().sigma_max();
        for j in 0..8 {
            let t = TAU * j as f64 / 8.0;
            let w = boundary_witness(&a, t).unwrap();
            assert!((w.value.norm() - s).abs() < 1e-10);
            assert!((w.value - C64::from_polar(s, t)).norm() < 1e-9);
        }
    }

    #[test]
    fn interior_witness_examples() {
        let a = example_a1();
        let s = svd(&a).unwrap().sigma_max();
        let w = interior_witness(&a, c(0.0, 0.0)).unwrap();
        assert!(w.value.norm() < 1e-12);
        let z = C64::from_polar(s / 2.0, TAU / 6.0);
        let w = interior_witness(&a, z).unwrap();
        assert!((w.value - z).norm() < 1e-9);
        assert!((vec_norm(&w.y) - 1.0).abs() < 1e-10);
        let w = interior_witness(&a, c(s, 0.0)).unwrap();
        assert!((w.value - c(s, 0.0)).norm() < 1e-9);
        assert!(matches!(interior_witness(&a, c(s + 1e-6, 0.0)), Err(Error::OutOfRange(..))));
        // Row vector: roles swap through the adjoint.
        let r = random_matrix(1, 4, 3);
        let sr = svd(&r).unwrap().sigma_max();
        let z = C64::from_polar(0.3 * sr, 1.0);
        let w = interior_witness(&r, z).unwrap();
        assert!((w.value - z).norm() < 1e-9);
        assert!((w_value(&r, &w.x, &w.y).unwrap() - z).norm() < 1e-9);
    }

    #[test]
    fn compression_radius_examples() {
        let a = example_a1();
        let s = svd(&a).unwrap();
        let xi = s.left.columns(0, 1);
        let h = s.right.columns(0, 1);
        assert!((compression_radius(&a, &xi, &h).unwrap() - s.sigma_max()).abs() < 1e-12);
        let u = Isometry::new(ComplexMatrix::identity(2)).unwrap();
        let v = Isometry::new(ComplexMatrix::identity(3)).unwrap();
        assert!((compression_radius(&a, &u, &v).unwrap() - s.sigma_max()).abs() < 1e-12);
        for i in 0..200 {
            let l = 1 + i % 2;
            let k = 1 + i % 3;
            let xi = random_isometry(2, l, 2 * i as u64).unwrap();
            let h = random_isometry(3, k, 2 * i as u64 + 1).unwrap();
            assert!(compression_radius(&a, &xi, &h).unwrap() <= s.sigma_max() + 1e-10);
        }
        assert!(compression_radius(&a, &h, &xi).is_err());
    }

    #[test]
    fn wnorm_examples() {
        let a = example_a1();
        let nf = a.frobenius_norm();
        assert!((nf * nf - 98.25).abs() < 1e-12);
        for j in 0..4 {
            let t = j as f64;
            let r = wnorm_disc(&a, &b0(&a, t).unwrap()).unwrap();
            match r {
                Region::Point { z } => assert!((z - C64::from_polar(nf, t)).norm() < 1e-12),
                other => panic!("expected a point, got {other:?}"),
            }
        }
        let g = random_matrix(2, 3, 5);
        let unit = g.scale_real(1.0 / g.frobenius_norm());
        let ip = frobenius_inner(&a, &unit).unwrap();
        match wnorm_disc(&a, &unit).unwrap() {
            Region::Point { z } => assert!((z - ip).norm() < 1e-12),
            other => panic!("expected a point, got {other:?}"),
        }
        let small = unit.scale_real(0.5);
        assert!(matches!(wnorm_disc(&a, &small), Err(Error::Domain(_))));
        let mut rng = SeededRng::new(9);
        for _ in 0..100 {
            let g = rng.gaussian_matrix(2, 3);
            let b = g.scale_real(rng.uniform_in(1.0, 4.0) / g.frobenius_norm());
            let r = wnorm_disc(&a, &b).unwrap();
            assert!(r.outer_radius() <= nf + 1e-9);
        }
    }

    #[test]
    fn wnorm_union_on_zero_and_a1() {
        let z = wnorm_union(&ComplexMatrix::zeros(2, 2), 50, 1).unwrap();
        assert_eq!(z.sup_abs, 0.0);
        assert_eq!(z.containment_failures, 0);
        let a = example_a1();
        let r = wnorm_union(&a, 200, 3).unwrap();
        assert_eq!(r.n_discs, 200 + B0_FAMILY);
        assert_eq!(r.containment_failures, 0);
        assert!((r.sup_abs - 98.25f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn center_bound_examples() {
        let a = example_a1();
        // Embedded unitary, zero-padded to 2x3.
        let u = crate::linalg::random_unitary(2, 4).unwrap().matrix().pad_to(2, 3);
        let r = center_bound_check(&a, &u).unwrap();
        assert!(r.hypothesis && r.bound);
        let z = center_bound_check(&ComplexMatrix::zeros(2, 3), &u).unwrap();
        assert!(z.holds() && z.bound);
        assert!(center_bound_check(&a, &ComplexMatrix::zeros(2, 3)).is_err());
        let mut rng = SeededRng::new(17);
        let mut checked = 0;
        for _ in 0..500 {
            let g = rng.gaussian_matrix(2, 3);
            let b = g.scale_real(rng.uniform_in(0.5, 3.0) / g.frobenius_norm());
            let r = center_bound_check(&a, &b).unwrap();
            assert!(r.holds());
            checked += r.hypothesis as usize;
        }
        assert!(checked > 0);
    }

    #[test]
    fn dilation_field_of_values_is_the_disc() {
        let a = example_a1();
        let s = svd(&a).unwrap().sigma_max();
        let curve = fov::fov_boundary(&dilation(&a), 720).unwrap();
        let lo = curve.support.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = curve.support.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - s).abs() < 1e-8 && (hi - s).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn witness_is_dilation_quadratic_form(seed in 0u64..500, t in 0.0..TAU, r in 0.0..1.0f64) {
            let a = random_matrix(3, 2, seed);
            let s = svd(&a).unwrap().sigma_max();
            let w = interior_witness(&a, C64::from_polar(r * s, t)).unwrap();
            let mut om: Vec<C64> = w.y.clone();
            om.extend_from_slice(&w.x);
            let om: Vec<C64> = om.iter().map(|z| z / 2f64.sqrt()).collect();
            let q = vec_dot(&om, &dilation(&a).apply(&om));
            prop_assert!((q - w.value).norm() <= 1e-10);
        }

        #[test]
        fn rank1_matches_w_value(seed in 0u64..1000) {
            let mut rng = SeededRng::new(seed);
            let a = rng.gaussian_matrix(3, 4);
            let x = rng.unit_vector(4);
            let y = rng.unit_vector(3);
            let d = rank1_value(&a, &y, &x).unwrap() - w_value(&a, &x, &y).unwrap();
            prop_assert!(d.norm() <= 1e-12);
        }

        #[test]
        fn radius_scales_and_is_unitarily_invariant(seed in 0u64..300, k in -3.0..3.0f64, phi in 0.0..TAU) {
            let a = random_matrix(4, 3, seed);
            let r = w_disc(&a).unwrap().sigma_max;
            let kc = C64::from_polar(k.abs(), phi);
            prop_assert!((w_disc(&a.scale(kc)).unwrap().sigma_max - k.abs() * r).abs() <= 1e-10 * (1.0 + r));
            prop_assert!((w_disc(&a.adjoint()).unwrap().sigma_max - r).abs() <= 1e-12 * r);
            let u = crate::linalg::random_unitary(4, seed + 1).unwrap();
            let v = crate::linalg::random_unitary(3, seed + 2).unwrap();
            let b = &u.matrix().adjoint_mul(&a) * v.matrix();
            prop_assert!((w_disc(&b).unwrap().sigma_max - r).abs() <= 1e-10 * r);
        }

        #[test]
        fn block_laws(seed in 0u64..300) {
            let a = random_matrix(3, 2, seed);
            let b = random_matrix(2, 4, seed + 7);
            let ra = w_disc(&a).unwrap().sigma_max;
            let rb = w_disc(&b).unwrap().sigma_max;
            let rd = w_disc(&a.block_diag(&b)).unwrap().sigma_max;
            prop_assert!((rd - ra.max(rb)).abs() <= 1e-10 * rd);
            let sub = a.submatrix(1, 0, 2, 2);
            prop_assert!(w_disc(&sub).unwrap().sigma_max <= ra + 1e-12);
            let c2 = random_matrix(3, 2, seed + 11);
            let rc = w_disc(&c2).unwrap().sigma_max;
            prop_assert!(w_disc(&(&a + &c2)).unwrap().sigma_max <= ra + rc + 1e-12);
        }
    }
}
