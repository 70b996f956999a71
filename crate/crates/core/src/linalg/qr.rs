use super::matrix::{vec_norm, ComplexMatrix, C64, ONE, ZERO};

/// Householder reflector `v` with `(I − 2vv*/v*v) x = α e₁`, `α = −phase(x₀)‖x‖`.
/// Returns `None` when `x` is already a multiple of `e₁`.
pub(crate) fn householder_vector(x: &[C64]) -> Option<(Vec<C64>, C64)> {
    let norm = vec_norm(x);
    if norm == 0.0 {
        return None;
    }
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    Some((v, alpha))
}

/// Applies `I − 2vv*/v*v` from the left to rows `r0..` of `a`, columns `c0..`.
fn reflect_rows(a: &mut ComplexMatrix, v: &[C64], r0: usize, c0: usize) {
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    for j in c0..a.cols() {
        let mut s = ZERO;
        for (i, vi) in v.iter().enumerate() {
            s += vi.conj() * a[(r0 + i, j)];
        }
        let f = s * (2.0 / vv);
        for (i, vi) in v.iter().enumerate() {
            a[(r0 + i, j)] -= vi * f;
        }
    }
}

/// Applies `I − 2vv*/v*v` from the right to columns `c0..` of `a`, rows `r0..`.
fn reflect_cols(a: &mut ComplexMatrix, v: &[C64], r0: usize, c0: usize) {
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    for i in r0..a.rows() {
        let mut s = ZERO;
        for (j, vj) in v.iter().enumerate() {
            s += a[(i, c0 + j)] * vj;
        }
        let f = s * (2.0 / vv);
        for (j, vj) in v.iter().enumerate() {
            a[(i, c0 + j)] -= f * vj.conj();
        }
    }
}

/// Full Householder QR: `a = Q R` with `Q` unitary `m x m`, `R` upper-trapezoidal,
/// and `R_jj` real and nonnegative.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for j in 0..n.min(m.saturating_sub(1)) {
        let x: Vec<C64> = (j..m).map(|i| r[(i, j)]).collect();
        if let Some((v, _)) = householder_vector(&x) {
            reflect_rows(&mut r, &v, j, j);
            // Q ← Q H
            reflect_cols(&mut q, &v, 0, j);
            for i in j + 1..m {
                r[(i, j)] = ZERO;
            }
        }
    }
    for j in 0..n.min(m) {
        let d = r[(j, j)];
        if d != ZERO {
            let phase = d / d.norm();
            for c in j..n {
                r[(j, c)] *= phase.conj();
            }
            r[(j, j)] = C64::new(r[(j, j)].re, 0.0);
            for i in 0..m {
                q[(i, j)] *= phase;
            }
        }
    }
    (q, r)
}

/// Unitary `m x m` matrix whose leading columns are the columns of the
/// orthonormal frame `h`.
pub fn orthonormal_completion(h: &ComplexMatrix) -> ComplexMatrix {
    let (m, k) = h.shape();
    let (mut q, _) = householder_qr(h);
    for j in 0..k {
        for i in 0..m {
            q[(i, j)] = h[(i, j)];
        }
    }
    q
}

/// Unitary reduction to upper Hessenberg form (similarity), eigenvalues preserved.
pub(crate) fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (j + 1..n).map(|i| h[(i, j)]).collect();
        if let Some((v, _)) = householder_vector(&x) {
            reflect_rows(&mut h, &v, j + 1, 0);
            reflect_cols(&mut h, &v, 0, j + 1);
            for i in j + 2..n {
                h[(i, j)] = ZERO;
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rng::random_matrix;

    #[test]
    fn qr_reconstructs_with_nonnegative_diagonal() {
        for (m, n, seed) in [(4, 2, 1), (3, 3, 2), (2, 4, 3), (5, 5, 4)] {
            let a = random_matrix(m, n, seed);
            let (q, r) = householder_qr(&a);
            let qq = q.adjoint_mul(&q);
            assert!((&qq - &ComplexMatrix::identity(m)).frobenius_norm() < 1e-13);
            assert!((&(&q * &r) - &a).frobenius_norm() < 1e-13 * a.frobenius_norm());
            for j in 0..m.min(n) {
                assert!(r[(j, j)].re >= 0.0 && r[(j, j)].im == 0.0);
                for i in j + 1..m {
                    assert_eq!(r[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn hessenberg_is_similar() {
        let a = random_matrix(5, 5, 9);
        let h = hessenberg(&a);
        for i in 2..5 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
    }
}
