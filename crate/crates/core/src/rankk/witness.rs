//! Witness search for `z ∈ φ_k(A)`: isometries `M`, `N` with `M*AN = zI_k`.
//!
//! The residual `F(M, N) = M*AN − zI_k` is driven to zero by a
//! Levenberg–Marquardt iteration on the product of Stiefel manifolds.
//! Tangent directions are `δM = MΩ + M⊥B`, `δN = NΨ + N⊥D` with `Ω`, `Ψ`
//! skew-Hermitian, so with `C = M*AN`
//!
//! `δF = −ΩC + B*(M⊥*AN) + CΨ + (M*AN⊥)D`.
//!
//! Steps are retracted onto the manifold with the polar factor.
//! Restart 0 is built from singular vectors. When `m ≥ 2k` the pair
//! `N = V_k`, `m_j = (z̄/σ_j)u_j + √(1 − |z|²/σ_j²)u_{k+j}` is exact. The
//! case `n ≥ 2k` is the mirror image. Later restarts start from random
//! isometries.

use crate::error::{input, Result};
use crate::linalg::{
    derive_seed, orthonormal_completion, polar_factor, random_isometry, svd, ComplexMatrix, Isometry, C64,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { restarts: 20, max_iter: 500, tol: 1e-8 }
    }
}

/// Isometries `M: m x k`, `N: n x k` with `residual = ‖M*AN − zI_k‖_F`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub m: Isometry,
    pub n: Isometry,
    pub z: C64,
    pub residual: f64,
    pub restarts_used: usize,
}

impl WitnessPair {
    pub fn k(&self) -> usize {
        self.m.rank()
    }

    /// Recomputes `‖M*AN − zI_k‖_F`.
    pub fn residual_for(&self, a: &ComplexMatrix) -> f64 {
        residual(a, self.m.matrix(), self.n.matrix(), self.z)
    }

    /// `(Me^{−iφ}, N)`, a witness for `e^{iφ}z` with the same residual.
    pub fn rotated(&self, phi: f64) -> WitnessPair {
        let w = C64::from_polar(1.0, phi);
        WitnessPair {
            m: self.m.scaled(w.conj()),
            n: self.n.clone(),
            z: self.z * w,
            residual: self.residual,
            restarts_used: self.restarts_used,
        }
    }

    /// `P = MM*`.
    pub fn p(&self) -> ComplexMatrix {
        self.m.projector()
    }

    /// `Q = NN*`.
    pub fn q(&self) -> ComplexMatrix {
        self.n.projector()
    }

    /// `S = MN*`.
    pub fn s(&self) -> ComplexMatrix {
        self.m.matrix() * &self.n.matrix().adjoint()
    }
}

/// Best pair found and whether it meets the tolerance.
#[derive(Clone, Debug)]
pub struct WitnessSearch {
    pub best: WitnessPair,
    pub certified: bool,
}

impl WitnessSearch {
    pub fn pair(&self) -> Option<&WitnessPair> {
        self.certified.then_some(&self.best)
    }
}

/// Relative decrease below which a step counts as stalled.
const STALL_REL: f64 = 1e-10;
/// Consecutive stalled steps before a local search gives up.
const STALL_STEPS: usize = 8;

fn residual(a: &ComplexMatrix, m: &ComplexMatrix, n: &ComplexMatrix, z: C64) -> f64 {
    let mut c = &m.adjoint_mul(a) * n;
    for i in 0..c.rows() {
        c[(i, i)] -= z;
    }
    c.frobenius_norm()
}

/// Searches for `M`, `N` with `M*AN = zI_k`.
pub fn find_witness(a: &ComplexMatrix, k: usize, z: C64, seed: u64, opts: WitnessOptions) -> Result<WitnessSearch> {
    let (m, n) = a.shape();
    if k == 0 || k > m.min(n) {
        return Err(input(format!("k must lie in 1..={} for a {m}x{n} matrix", m.min(n))));
    }
    let mut best: Option<WitnessPair> = None;
    for r in 0..opts.restarts.max(1) {
        let (m0, n0) = if r == 0 {
            singular_start(a, k, z)?
        } else {
            (
                random_isometry(m, k, derive_seed(seed, 2 * r as u64))?,
                random_isometry(n, k, derive_seed(seed, 2 * r as u64 + 1))?,
            )
        };
        let (mm, nn) = levenberg_marquardt(a, z, m0, n0, opts.max_iter, opts.tol)?;
        let res = residual(a, mm.matrix(), nn.matrix(), z);
        let better = best.as_ref().is_none_or(|b| res < b.residual);
        if better {
            best = Some(WitnessPair { m: mm, n: nn, z, residual: res, restarts_used: r + 1 });
        }
        if res <= opts.tol {
            break;
        }
    }
    let mut best = best.expect("at least one restart");
    best.restarts_used = best.restarts_used.max(1);
    let certified = best.residual <= opts.tol;
    Ok(WitnessSearch { best, certified })
}

/// Singular-vector initialization.
fn singular_start(a: &ComplexMatrix, k: usize, z: C64) -> Result<(Isometry, Isometry)> {
    let (m, n) = a.shape();
    let s = svd(a)?;
    let u = s.full_left();
    let v = s.full_right();
    let mix = |basis: &ComplexMatrix, coef: &dyn Fn(f64) -> C64| -> Isometry {
        let rows = basis.rows();
        let mut out = ComplexMatrix::zeros(rows, k);
        for j in 0..k {
            let sj = s.sigma_at(j + 1);
            let alpha = if sj > 0.0 { coef(sj) } else { C64::new(0.0, 0.0) };
            let alpha = if alpha.norm() > 1.0 { alpha / alpha.norm() } else { alpha };
            let beta = (1.0 - alpha.norm_sqr()).max(0.0).sqrt();
            for i in 0..rows {
                out[(i, j)] = alpha * basis[(i, j)] + beta * basis[(i, k + j)];
            }
        }
        Isometry::from_trusted(out)
    };
    if m >= 2 * k {
        let mm = mix(&u, &|sj| z.conj() / sj);
        return Ok((mm, Isometry::from_trusted(v.column_range(0, k))));
    }
    if n >= 2 * k {
        let nn = mix(&v, &|sj| z / sj);
        return Ok((Isometry::from_trusted(u.column_range(0, k)), nn));
    }
    // Both sides narrow: top singular block with the phase of z.
    let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
    Ok((
        Isometry::from_trusted(u.column_range(0, k).scale(phase.conj())),
        Isometry::from_trusted(v.column_range(0, k)),
    ))
}

/// Real parameters of one tangent direction.
struct Tangent {
    omega: ComplexMatrix,
    b: ComplexMatrix,
    psi: ComplexMatrix,
    d: ComplexMatrix,
}

fn skew_basis(k: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(k * k);
    for j in 0..k {
        let mut e = ComplexMatrix::zeros(k, k);
        e[(j, j)] = C64::new(0.0, 1.0);
        out.push(e);
    }
    for p in 0..k {
        for q in p + 1..k {
            let mut e = ComplexMatrix::zeros(k, k);
            e[(p, q)] = C64::new(1.0, 0.0);
            e[(q, p)] = C64::new(-1.0, 0.0);
            out.push(e);
            let mut f = ComplexMatrix::zeros(k, k);
            f[(p, q)] = C64::new(0.0, 1.0);
            f[(q, p)] = C64::new(0.0, 1.0);
            out.push(f);
        }
    }
    out
}

fn free_basis(rows: usize, cols: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            for unit in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut e = ComplexMatrix::zeros(rows, cols);
                e[(i, j)] = unit;
                out.push(e);
            }
        }
    }
    out
}

fn flatten(c: &ComplexMatrix) -> Vec<f64> {
    c.data().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn levenberg_marquardt(
    a: &ComplexMatrix,
    z: C64,
    m0: Isometry,
    n0: Isometry,
    max_iter: usize,
    tol: f64,
) -> Result<(Isometry, Isometry)> {
    let k = m0.rank();
    let (rows, cols) = a.shape();
    let skew = skew_basis(k);
    let left_free = free_basis(rows - k, k);
    let right_free = free_basis(cols - k, k);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut mm = m0;
    let mut nn = n0;
    let mut res = residual(a, mm.matrix(), nn.matrix(), z);
    let mut mu = 1e-3 * scale * scale;
    let mut stalled = 0;

    for _ in 0..max_iter {
        if res <= tol * 1e-2 {
            break;
        }
        let mfull = orthonormal_completion(mm.matrix());
        let nfull = orthonormal_completion(nn.matrix());
        let mperp = mfull.column_range(k, rows);
        let nperp = nfull.column_range(k, cols);
        let an = a * nn.matrix();
        let c = mm.matrix().adjoint_mul(&an);
        let mperp_an = mperp.adjoint_mul(&an);
        let m_anperp = &mm.matrix().adjoint_mul(a) * &nperp;
        let mut f = c.clone();
        for i in 0..k {
            f[(i, i)] -= z;
        }
        let r = flatten(&f);

        // Jacobian columns, one per real tangent coordinate.
        let mut jac: Vec<Vec<f64>> = Vec::new();
        for e in &skew {
            jac.push(flatten(&(e * &c).scale_real(-1.0)));
        }
        for e in &left_free {
            jac.push(flatten(&e.adjoint_mul(&mperp_an)));
        }
        for e in &skew {
            jac.push(flatten(&(&c * e)));
        }
        for e in &right_free {
            jac.push(flatten(&(&m_anperp * e)));
        }
        let p = jac.len();
        let mut jtj = vec![vec![0.0; p]; p];
        let mut jtr = vec![0.0; p];
        for i in 0..p {
            jtr[i] = jac[i].iter().zip(&r).map(|(x, y)| x * y).sum();
            for j in i..p {
                let v: f64 = jac[i].iter().zip(&jac[j]).map(|(x, y)| x * y).sum();
                jtj[i][j] = v;
                jtj[j][i] = v;
            }
        }

        let mut accepted = false;
        for _ in 0..30 {
            let mut sys = jtj.clone();
            for (i, row) in sys.iter_mut().enumerate() {
                row[i] += mu;
            }
            let rhs: Vec<f64> = jtr.iter().map(|x| -x).collect();
            let Some(delta) = cholesky_solve(sys, rhs) else {
                mu *= 4.0;
                continue;
            };
            let t = unpack(&delta, &skew, &left_free, &right_free);
            let m_step = mm.matrix() + &(&(mm.matrix() * &t.omega) + &(&mperp * &t.b));
            let n_step = nn.matrix() + &(&(nn.matrix() * &t.psi) + &(&nperp * &t.d));
            let m_new = polar_factor(&m_step)?;
            let n_new = polar_factor(&n_step)?;
            let res_new = residual(a, m_new.matrix(), n_new.matrix(), z);
            if res_new < res {
                stalled = if res - res_new <= STALL_REL * res { stalled + 1 } else { 0 };
                mm = m_new;
                nn = n_new;
                res = res_new;
                mu = (mu / 3.0).max(1e-14 * scale * scale);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted || stalled >= STALL_STEPS {
            break;
        }
    }
    Ok((mm, nn))
}

fn unpack(delta: &[f64], skew: &[ComplexMatrix], left: &[ComplexMatrix], right: &[ComplexMatrix]) -> Tangent {
    let k = skew.first().map_or(0, |e| e.rows());
    let lrows = left.first().map_or(0, |e| e.rows());
    let rrows = right.first().map_or(0, |e| e.rows());
    let mut it = delta.iter().copied();
    let mut combine = |basis: &[ComplexMatrix], r: usize, c: usize| {
        let mut acc = ComplexMatrix::zeros(r, c);
        for e in basis {
            let w = it.next().unwrap_or(0.0);
            acc = &acc + &e.scale_real(w);
        }
        acc
    };
    let omega = combine(skew, k, k);
    let b = combine(left, lrows, k);
    let psi = combine(skew, k, k);
    let d = combine(right, rrows, k);
    Tangent { omega, b, psi, d }
}

/// Solves `S x = rhs` for symmetric positive definite `S`.
fn cholesky_solve(mut s: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for j in 0..n {
        let d = s[j][j] - s[j][..j].iter().map(|x| x * x).sum::<f64>();
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        s[j][j] = d;
        for i in j + 1..n {
            let v = s[i][j] - s[i][..j].iter().zip(&s[j][..j]).map(|(x, y)| x * y).sum::<f64>();
            s[i][j] = v / d;
        }
    }
    for i in 0..n {
        let mut v = rhs[i];
        for p in 0..i {
            v -= s[i][p] * rhs[p];
        }
        rhs[i] = v / s[i][i];
    }
    for i in (0..n).rev() {
        let mut v = rhs[i];
        for p in i + 1..n {
            v -= s[p][i] * rhs[p];
        }
        rhs[i] = v / s[i][i];
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_matrix;
    use crate::rankk::phi_k_contains;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn boundary_point_k1_from_singular_start() {
        let a = random_matrix(3, 4, 1);
        let s = svd(&a).unwrap().sigma_max();
        let z = C64::from_polar(s, 0.9);
        let w = find_witness(&a, 1, z, 1, WitnessOptions::default()).unwrap();
        assert!(w.certified);
        assert!(w.best.residual <= 1e-10);
        assert_eq!(w.best.restarts_used, 1);
    }

    #[test]
    fn outside_never_certifies() {
        let a = random_matrix(3, 3, 2);
        let s = svd(&a).unwrap().sigma_max();
        let z = C64::new(1.2 * s, 0.0);
        let opts = WitnessOptions { restarts: 3, max_iter: 100, tol: 1e-8 };
        let w = find_witness(&a, 2, z, 4, opts).unwrap();
        assert!(!w.certified);
        assert!(w.best.residual >= (z.norm() - s) * 2f64.sqrt() - 1e-8);
    }

    #[test]
    fn circle_regime_three_by_two() {
        let a = random_matrix(3, 2, 3);
        let s2 = svd(&a).unwrap().sigma[1];
        let z = C64::from_polar(s2, FRAC_PI_4);
        let w = find_witness(&a, 2, z, 7, WitnessOptions::default()).unwrap();
        assert!(w.certified, "residual {}", w.best.residual);
        assert!(phi_k_contains(&a, 2, z).unwrap());
        assert!((w.best.residual_for(&a) - w.best.residual).abs() <= 1e-12);
    }

    #[test]
    fn ring_interior_three_by_three() {
        let a = random_matrix(3, 3, 4);
        let s = svd(&a).unwrap();
        let z = C64::from_polar((s.sigma[1] + s.sigma[2]) / 2.0, 2.0);
        let w = find_witness(&a, 2, z, 9, WitnessOptions::default()).unwrap();
        assert!(w.certified, "residual {}", w.best.residual);
    }

    #[test]
    fn rotation_preserves_residual() {
        let a = random_matrix(5, 3, 5);
        let s = svd(&a).unwrap();
        let z = C64::from_polar(0.6 * s.sigma[1], 0.3);
        let w = find_witness(&a, 2, z, 1, WitnessOptions::default()).unwrap();
        assert!(w.certified);
        let r = w.best.rotated(1.1);
        assert!((r.residual_for(&a) - w.best.residual_for(&a)).abs() <= 1e-12);
        assert!((r.z - z * C64::from_polar(1.0, 1.1)).norm() < 1e-15);
    }

    #[test]
    fn k_out_of_range() {
        let a = random_matrix(3, 2, 1);
        assert!(find_witness(&a, 3, C64::new(0.0, 0.0), 1, WitnessOptions::default()).is_err());
    }
}
