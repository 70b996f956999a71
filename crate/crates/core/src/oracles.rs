//! Independent checks: Monte Carlo sampling of the defining sets, power
//! iteration for `σ₁`, and direct minimization for the support function of
//! the Frobenius-norm range.
//!
//! Nothing here depends on the closed-form region code.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::linalg::{derive_seed, frobenius_inner, vec_dot, vec_norm, ComplexMatrix, SeededRng, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub n_samples: usize,
    pub sup_abs: f64,
    pub points: Option<Vec<C64>>,
    pub seed: u64,
}

impl McReport {
    /// `max Re(e^{−iθ}p)` over the kept sample points.
    pub fn support(&self, theta: f64) -> Option<f64> {
        let (s, c) = theta.sin_cos();
        self.points
            .as_ref()
            .map(|pts| pts.iter().map(|p| p.re * c + p.im * s).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Samples `y*Ax` for independent uniform unit `x ∈ ℂⁿ`, `y ∈ ℂᵐ`.
pub fn mc_rect_sup(a: &ComplexMatrix, n_samples: usize, seed: u64) -> Result<McReport> {
    mc_rect(a, n_samples, seed, false)
}

/// As [`mc_rect_sup`], keeping every sample point.
pub fn mc_rect_samples(a: &ComplexMatrix, n_samples: usize, seed: u64) -> Result<McReport> {
    mc_rect(a, n_samples, seed, true)
}

fn mc_rect(a: &ComplexMatrix, n_samples: usize, seed: u64, keep: bool) -> Result<McReport> {
    if n_samples == 0 {
        return Err(input("at least one sample required"));
    }
    let (m, n) = a.shape();
    let mut sup = 0.0f64;
    let mut points = keep.then(|| Vec::with_capacity(n_samples));
    for i in 0..n_samples {
        let mut rng = SeededRng::new(derive_seed(seed, i as u64));
        let x = rng.unit_vector(n);
        let y = rng.unit_vector(m);
        let z = vec_dot(&y, &a.apply(&x));
        sup = sup.max(z.norm());
        if let Some(p) = points.as_mut() {
            p.push(z);
        }
    }
    Ok(McReport { n_samples, sup_abs: sup, points, seed })
}

/// Samples `x*Ax` for uniform unit `x`.
pub fn mc_fov_samples(a: &ComplexMatrix, n_samples: usize, seed: u64) -> Result<McReport> {
    if !a.is_square() {
        return Err(input(format!("field of values needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    if n_samples == 0 {
        return Err(input("at least one sample required"));
    }
    let n = a.cols();
    let mut sup = 0.0f64;
    let mut points = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let mut rng = SeededRng::new(derive_seed(seed, i as u64));
        let x = rng.unit_vector(n);
        let z = vec_dot(&x, &a.apply(&x));
        sup = sup.max(z.norm());
        points.push(z);
    }
    Ok(McReport { n_samples, sup_abs: sup, points: Some(points), seed })
}

/// `‖Ax‖` after `n_iters` steps of `x ← A*Ax/‖A*Ax‖` from a random start.
/// Never exceeds `σ₁` beyond rounding.
pub fn power_sigma_max(a: &ComplexMatrix, n_iters: usize, seed: u64) -> f64 {
    let mut rng = SeededRng::new(seed);
    let mut x = rng.unit_vector(a.cols());
    for _ in 0..n_iters {
        let y = a.apply_adjoint(&a.apply(&x));
        let ny = vec_norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        x = y.iter().map(|z| z / ny).collect();
    }
    vec_norm(&a.apply(&x))
}

/// Support `h(θ) = inf_{z₀} Re(e^{−iθ}z₀) + ‖A − z₀B‖_F` of the
/// intersection of all discs `D(z₀, ‖A − z₀B‖_F)`, by damped Newton in `z₀`.
pub fn wnorm_support(a: &ComplexMatrix, b: &ComplexMatrix, theta: f64) -> Result<f64> {
    let p = frobenius_inner(a, b)?;
    let g = b.frobenius_norm().powi(2);
    if g <= 1.0 {
        return Err(input("support minimization needs ||B||_F > 1"));
    }
    let (s, c) = theta.sin_cos();
    // q(x, y) = ‖A − (x + iy)B‖², evaluated entrywise to avoid cancellation.
    let q = |x: f64, y: f64| {
        let z0 = C64::new(x, y);
        a.data().iter().zip(b.data()).map(|(u, v)| (u - z0 * v).norm_sqr()).sum::<f64>()
    };
    let f = |x: f64, y: f64| x * c + y * s + q(x, y).sqrt();
    // Start at the minimizer of q: f is smooth elsewhere, and when q vanishes
    // there that point is already the minimizer since γ > 1.
    let (mut x, mut y) = (p.re / g, p.im / g);
    let mut fx = f(x, y);
    for _ in 0..200 {
        let qv = q(x, y);
        if qv <= 0.0 {
            break;
        }
        let r = qv.sqrt();
        let gq = [2.0 * (g * x - p.re), 2.0 * (g * y - p.im)];
        let grad = [c + gq[0] / (2.0 * r), s + gq[1] / (2.0 * r)];
        let h11 = g / r - gq[0] * gq[0] / (4.0 * r * qv);
        let h22 = g / r - gq[1] * gq[1] / (4.0 * r * qv);
        let h12 = -gq[0] * gq[1] / (4.0 * r * qv);
        let det = h11 * h22 - h12 * h12;
        let (dx, dy) = if det > 0.0 && h11 > 0.0 {
            (-(h22 * grad[0] - h12 * grad[1]) / det, -(h11 * grad[1] - h12 * grad[0]) / det)
        } else {
            (-grad[0], -grad[1])
        };
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-12 {
            let (nx, ny) = (x + t * dx, y + t * dy);
            let fv = f(nx, ny);
            if fv < fx {
                x = nx;
                y = ny;
                fx = fv;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved || (grad[0].hypot(grad[1]) < 1e-15) {
            break;
        }
    }
    Ok(fx)
}
