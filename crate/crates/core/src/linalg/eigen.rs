//! Hermitian eigendecomposition (cyclic complex Jacobi) and general complex
//! eigenvalues (Hessenberg + shifted QR).

use super::isometry::Isometry;
use super::matrix::{ComplexMatrix, C64, ZERO};
use super::qr::hessenberg;
use crate::error::{input, Error, Result};

/// Relative Hermitian-defect tolerance accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues in descending order with a unitary eigenframe.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub lambda: Vec<f64>,
    pub frame: Isometry,
}

impl HermEig {
    pub fn lambda_max(&self) -> f64 {
        self.lambda[0]
    }

    pub fn top_vector(&self) -> Vec<C64> {
        self.frame.column(0)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = self.frame.matrix();
        let n = self.lambda.len();
        let d = ComplexMatrix::diag(n, n, &self.lambda.iter().map(|&l| C64::new(l, 0.0)).collect::<Vec<_>>());
        &(v * &d) * &v.adjoint()
    }
}

/// 2x2 unitary `U` with `U* [[a, b], [b̄, d]] U` diagonal (`a`, `d` real).
///
/// The phase of `b` is removed first, then a real Jacobi rotation finishes the job.
pub(crate) fn jacobi_rotation(a: f64, b: C64, d: f64) -> [[C64; 2]; 2] {
    let r = b.norm();
    let phase = b / r;
    let theta = (d - a) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let pc = phase.conj();
    [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [pc * -s, pc * c],
    ]
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps
/// (row-major order over the strict upper triangle).
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermEig> {
    if !h.is_square() {
        return Err(input(format!("hermitian_eigen needs a square matrix, got {:?}", h.shape())));
    }
    if !h.is_finite() {
        return Err(input("non-finite entry"));
    }
    let scale = h.frobenius_norm();
    if h.hermitian_defect() > HERMITIAN_TOL * scale.max(1.0) {
        return Err(input(format!(
            "matrix is not Hermitian (‖H − H*‖_F = {:.3e})",
            h.hermitian_defect()
        )));
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let skip = 1e-17 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                if b.norm() <= skip || b.norm() == 0.0 {
                    continue;
                }
                let u = jacobi_rotation(a[(p, p)].re, b, a[(q, q)].re);
                rotate(&mut a, &mut v, p, q, &u);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let lambda = order.iter().map(|&i| a[(i, i)].re).collect();
    let frame = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEig {
        lambda,
        frame: Isometry::from_trusted(frame),
    })
}

/// `A ← U* A U` on the `(p, q)` plane, `V ← V U`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, u: &[[C64; 2]; 2]) {
    let n = a.rows();
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * u[0][0] + y * u[1][0];
        a[(k, q)] = x * u[0][1] + y * u[1][1];
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u[0][0].conj() * x + u[1][0].conj() * y;
        a[(q, k)] = u[0][1].conj() * x + u[1][1].conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..v.rows() {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * u[0][0] + y * u[1][0];
        v[(k, q)] = x * u[0][1] + y * u[1][1];
    }
}

/// Eigenvalues of a general square complex matrix, sorted by descending real
/// part then imaginary part.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(input(format!("eigenvalues need a square matrix, got {:?}", a.shape())));
    }
    if !a.is_finite() {
        return Err(input("non-finite entry"));
    }
    let n = a.rows();
    let mut h = hessenberg(a);
    let mut out = vec![ZERO; n];
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // Deflation scan.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n.max(10) {
            return Err(Error::NoConvergence("complex QR eigenvalue iteration"));
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }

    out.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    Ok(out)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Givens `G = [[c, s], [−s̄, c]]` with `G [x; y] = [r; 0]`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let c = x.norm() / r;
    let s = (x / x.norm()) * y.conj() / r;
    (c, s)
}

/// One explicitly shifted QR step on the active Hessenberg window `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for j in lo..hi {
        let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
        for k in j..=hi {
            let (x, y) = (h[(j, k)], h[(j + 1, k)]);
            h[(j, k)] = x * c + s * y;
            h[(j + 1, k)] = -s.conj() * x + y * c;
        }
        h[(j + 1, j)] = ZERO;
        rots.push((c, s));
    }
    for (idx, j) in (lo..hi).enumerate() {
        let (c, s) = rots[idx];
        for k in lo..=(j + 2).min(hi) {
            let (x, y) = (h[(k, j)], h[(k, j + 1)]);
            h[(k, j)] = x * c + y * s.conj();
            h[(k, j + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Largest eigenpair of a Hermitian matrix.
pub fn top_eigenpair(h: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let e = hermitian_eigen(h)?;
    Ok((e.lambda_max(), e.top_vector()))
}
