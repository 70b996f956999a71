use super::eigen::jacobi_rotation;
use super::isometry::Isometry;
use super::matrix::{vec_dot, vec_norm, ComplexMatrix, C64};
use super::qr::orthonormal_completion;
use crate::error::{input, Result};

const MAX_SWEEPS: usize = 80;
/// Column pairs are considered orthogonal once `|w_p* w_q| ≤ ORTH_TOL·‖w_p‖‖w_q‖`.
const ORTH_TOL: f64 = 1e-15;

/// Thin SVD `A = U diag(σ) V*` with `σ` descending, `U: m x q`, `V: n x q`, `q = min(m, n)`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub sigma: Vec<f64>,
    pub left: Isometry,
    pub right: Isometry,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.sigma[0]
    }

    /// `σ_j` with 1-based index, reading `0` past `min(m, n)`.
    pub fn sigma_at(&self, j: usize) -> f64 {
        assert!(j >= 1, "singular values are 1-indexed");
        self.sigma.get(j - 1).copied().unwrap_or(0.0)
    }

    /// Count of `σ_i > rel_tol·σ₁`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.sigma_max();
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let q = self.sigma.len();
        let s = ComplexMatrix::diag(q, q, &self.sigma.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        &(self.left.matrix() * &s) * &self.right.matrix().adjoint()
    }

    /// Unitary `m x m` left frame extending `U`.
    pub fn full_left(&self) -> ComplexMatrix {
        self.left.completion()
    }

    /// Unitary `n x n` right frame extending `V`.
    pub fn full_right(&self) -> ComplexMatrix {
        self.right.completion()
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return Err(input("svd: non-finite entry"));
    }
    let (m, n) = a.shape();
    if m < n {
        let t = svd_tall(&a.adjoint());
        return Ok(SvdResult {
            sigma: t.sigma,
            left: t.right,
            right: t.left,
        });
    }
    Ok(svd_tall(a))
}

/// Spectral norm `‖A‖₂ = σ₁`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    svd(a).map(|s| s.sigma_max()).unwrap_or(f64::NAN)
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    svd(a).map(|s| s.sigma)
}

fn svd_tall(a: &ComplexMatrix) -> SvdResult {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vec_dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                let u = jacobi_rotation(alpha, gamma, beta);
                rotate_pair(&mut w, p, q, &u);
                rotate_pair(&mut v, p, q, &u);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();

    // Columns with negligible norm are replaced by an orthonormal completion.
    let cut = sigma[0] * f64::EPSILON * (m.max(n) as f64) * 4.0;
    let strong = sigma.iter().take_while(|&&s| s > cut && s > 0.0).count();
    let mut left = ComplexMatrix::zeros(m, n);
    for (dst, &src) in order.iter().enumerate().take(strong) {
        let col: Vec<C64> = w[src].iter().map(|z| z / norms[src]).collect();
        left.set_column(dst, &col);
    }
    if strong < n {
        let basis = if strong == 0 {
            ComplexMatrix::identity(m)
        } else {
            orthonormal_completion(&left.column_range(0, strong))
        };
        for j in strong..n {
            left.set_column(j, &basis.column(j));
        }
    }
    let right = ComplexMatrix::from_fn(n, n, |i, j| v[order[j]][i]);
    SvdResult {
        sigma,
        left: Isometry::from_trusted(left),
        right: Isometry::from_trusted(right),
    }
}

/// `[c_p, c_q] ← [c_p, c_q] U` for column vectors stored separately.
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, u: &[[C64; 2]; 2]) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * u[0][0] + b * u[1][0];
        *y = a * u[0][1] + b * u[1][1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ZERO;
    use crate::linalg::rng::{random_matrix, random_unitary};

    fn a1() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![C64::new(6.0, 1.0), ZERO, C64::new(0.5, 0.0)],
            vec![C64::new(-4.0, 0.0), C64::new(-3.0, -6.0), ZERO],
        ])
        .unwrap()
    }

    /// Independent estimate of σ₁ by power iteration on A*A.
    fn power_sigma(a: &ComplexMatrix, iters: usize) -> f64 {
        let n = a.cols();
        let mut x: Vec<C64> = (0..n).map(|i| C64::new(1.0 + i as f64, 0.5 - i as f64)).collect();
        for _ in 0..iters {
            let y = a.apply_adjoint(&a.apply(&x));
            let nrm = vec_norm(&y);
            x = y.iter().map(|z| z / nrm).collect();
        }
        vec_norm(&a.apply(&x))
    }

    #[test]
    fn trivial_cases() {
        let s = svd(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0]);
        let d = ComplexMatrix::from_real(3, 2, &[3.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let s = svd(&d).unwrap();
        assert_eq!(s.sigma, vec![3.0, 0.0]);
        assert!(s.left.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn a1_top_singular_value_matches_power_iteration() {
        let a = a1();
        let s = svd(&a).unwrap();
        let p = power_sigma(&a, 500);
        assert!((s.sigma_max() - p).abs() <= 1e-8 * p, "{} vs {p}", s.sigma_max());
        // ‖A‖_F² = Σσ²
        let f: f64 = s.sigma.iter().map(|x| x * x).sum();
        assert!((f - 98.25).abs() < 1e-10);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert!(s.left.orthonormality_defect() < 1e-14);
        assert!(s.right.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn reconstruction_all_shapes() {
        for (k, (m, n)) in [(1, 1), (1, 4), (4, 1), (2, 5), (5, 2), (4, 4), (7, 3), (3, 8)]
            .into_iter()
            .enumerate()
        {
            let a = random_matrix(m, n, 100 + k as u64);
            let s = svd(&a).unwrap();
            assert_eq!(s.sigma.len(), m.min(n));
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
            let res = (&s.reconstruct() - &a).frobenius_norm();
            assert!(res <= 1e-10 * a.frobenius_norm().max(1.0), "{m}x{n}: {res}");
            assert!(s.left.orthonormality_defect() <= 1e-10);
            assert!(s.right.orthonormality_defect() <= 1e-10);
        }
    }

    #[test]
    fn rank_deficient_frames_stay_orthonormal() {
        // rank 1, 4x3
        let x = random_matrix(4, 1, 1);
        let y = random_matrix(1, 3, 2);
        let a = &x * &y;
        let s = svd(&a).unwrap();
        assert_eq!(s.rank(1e-10), 1);
        assert!(s.left.orthonormality_defect() <= 1e-10);
        let res = (&s.reconstruct() - &a).frobenius_norm();
        assert!(res <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn invariances() {
        let a = random_matrix(4, 3, 77);
        let s0 = svd(&a).unwrap().sigma;
        let phase = C64::from_polar(1.0, 0.7);
        let s1 = svd(&a.scale(phase)).unwrap().sigma;
        let s2 = svd(&a.adjoint()).unwrap().sigma;
        let u = random_unitary(4, 1).unwrap();
        let v = random_unitary(3, 2).unwrap();
        let b = &(&u.matrix().adjoint() * &a) * v.matrix();
        let s3 = svd(&b).unwrap().sigma;
        for other in [s1, s2, s3] {
            for (x, y) in s0.iter().zip(&other) {
                assert!((x - y).abs() < 1e-12 * s0[0]);
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 1)] = C64::new(f64::INFINITY, 0.0);
        assert!(svd(&a).is_err());
    }
}
