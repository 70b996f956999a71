//! Rank-k numerical range `φ_k(A) = {z : M*AN = zI_k}` over isometries
//! `M: m x k`, `N: n x k`.
//!
//! With `σ_j := 0` for `j > min(m, n)`:
//! `φ_k(A) = {σ_{m+n−2k+1} ≤ |z| ≤ σ_k}` for `k ≤ min(m, n)` and empty
//! otherwise. The classification regime follows the integer pattern
//! `k ≤ max(m,n)/2` (low), `≤ (m+n+1)/3` (ring), beyond (empty); the region
//! itself is always the set above, so exact ties in the empty regime give a
//! circle.

mod witness;

pub use witness::{find_witness, WitnessOptions, WitnessPair, WitnessSearch};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::geometry::Region;
use crate::linalg::{hermitian_eigen, random_isometry, derive_seed, svd, ComplexMatrix, C64, SvdResult};

/// Membership tolerance for [`phi_k_contains`].
pub const CONTAINS_TOL: f64 = 1e-12;
/// Relative tolerance for collapsing nearly equal ring radii.
const TIE_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Low,
    Ring,
    Empty,
}

/// Regime of `(m, n, k)`: low for `k ≤ max(m/2, n/2)`, ring for
/// `max(m/2, n/2) < k ≤ (m+n+1)/3`, empty otherwise.
pub fn regime(m: usize, n: usize, k: usize) -> Regime {
    if 2 * k <= m.max(n) {
        Regime::Low
    } else if 3 * k <= m + n + 1 {
        Regime::Ring
    } else {
        Regime::Empty
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankKClass {
    pub k: usize,
    pub regime: Regime,
    pub region: Region,
}

/// `σ_j` (1-based) with zeros past `min(m, n)`.
fn sigma(s: &SvdResult, j: usize) -> f64 {
    s.sigma_at(j)
}

pub fn phi_k_region(a: &ComplexMatrix, k: usize) -> Result<RankKClass> {
    let s = svd(a)?;
    phi_k_region_from(a.shape(), &s, k)
}

/// [`phi_k_region`] from a precomputed SVD.
pub fn phi_k_region_from((m, n): (usize, usize), s: &SvdResult, k: usize) -> Result<RankKClass> {
    if k == 0 {
        return Err(input("rank k must be at least 1"));
    }
    let regime = regime(m, n, k);
    let o = C64::new(0.0, 0.0);
    if k > m.min(n) {
        return Ok(RankKClass { k, regime, region: Region::Empty });
    }
    let outer = sigma(s, k);
    let inner = sigma(s, m + n + 1 - 2 * k);
    let tie = TIE_REL_TOL * s.sigma_max();
    let region = if inner > outer + tie {
        Region::Empty
    } else if inner >= outer - tie {
        Region::circle(o, outer)
    } else {
        Region::annulus(o, inner, outer)?
    };
    Ok(RankKClass { k, regime, region })
}

/// Membership in `φ_k(A)` by the singular value inequalities
/// `|z| ≤ σ_i` (`i ≤ k`) and `|z| ≥ σ_{i+m+n−2k}` (`i ≤ min(2k−m, 2k−n)`).
pub fn phi_k_contains(a: &ComplexMatrix, k: usize, z: C64) -> Result<bool> {
    let s = svd(a)?;
    Ok(phi_k_contains_from(a.shape(), &s, k, z))
}

pub fn phi_k_contains_from((m, n): (usize, usize), s: &SvdResult, k: usize, z: C64) -> bool {
    if k == 0 || k > m.min(n) {
        return false;
    }
    let r = z.norm();
    let upper = (1..=k).all(|i| r <= sigma(s, i) + CONTAINS_TOL);
    let lower_count = (2 * k).saturating_sub(m).min((2 * k).saturating_sub(n));
    let lower = (1..=lower_count).all(|i| r >= sigma(s, i + m + n - 2 * k) - CONTAINS_TOL);
    upper && lower
}

/// `Λ_k(Hm)` for Hermitian `Hm` with eigenvalues `λ₁ ≥ … ≥ λ_n`:
/// `[λ_{n−k+1}, λ_k]` when nonempty.
pub fn lambda_k_hermitian(hm: &ComplexMatrix, k: usize) -> Result<Region> {
    if k == 0 {
        return Err(input("rank k must be at least 1"));
    }
    let e = hermitian_eigen(hm)?;
    let n = e.lambda.len();
    if k > n {
        return Ok(Region::Empty);
    }
    let hi = e.lambda[k - 1];
    let lo = e.lambda[n - k];
    let scale = e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let tie = TIE_REL_TOL * scale;
    Ok(if hi > lo + tie {
        Region::segment(C64::new(lo, 0.0), C64::new(hi, 0.0))
    } else if hi >= lo - tie {
        Region::point(C64::new(hi, 0.0))
    } else {
        Region::Empty
    })
}

/// `[[0, A], [A*, 0]]`.
pub fn hermitian_dilation(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = a.shape();
    let mut d = ComplexMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            d[(i, m + j)] = a[(i, j)];
            d[(m + j, i)] = a[(i, j)].conj();
        }
    }
    d
}

/// Outcome of [`projector_intersection_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionReport {
    pub k: usize,
    pub sigma_k: f64,
    /// `min ‖AQ_𝒢‖₂` over random `(n−k+1)`-dimensional `𝒢`.
    pub min_right: f64,
    /// `‖AQ_𝒢*‖₂` for `𝒢* = span{v_k, …, v_n}`.
    pub right_star: f64,
    /// `min ‖P_𝓛A‖₂` over random `(m−k+1)`-dimensional `𝓛`.
    pub min_left: f64,
    /// `‖P_𝓛*A‖₂` for `𝓛* = span{u_k, …, u_m}`.
    pub left_star: f64,
    /// Outer radius of `φ_k(A)`.
    pub outer_radius: f64,
    pub n_trials: usize,
}

impl IntersectionReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_right >= self.sigma_k - tol
            && self.min_left >= self.sigma_k - tol
            && (self.right_star - self.sigma_k).abs() <= tol
            && (self.left_star - self.sigma_k).abs() <= tol
            && self.outer_radius <= self.min_left.min(self.min_right) + tol
    }
}

/// Courant–Fischer bounds `‖AQ_𝒢‖₂ ≥ σ_k` for `dim 𝒢 = n−k+1` (and the
/// left analogue), with equality at the trailing singular subspaces.
pub fn projector_intersection_check(
    a: &ComplexMatrix,
    k: usize,
    n_trials: usize,
    seed: u64,
) -> Result<IntersectionReport> {
    let (m, n) = a.shape();
    if k == 0 || k > m.min(n) {
        return Err(input(format!("k must lie in 1..={} for a {m}x{n} matrix", m.min(n))));
    }
    let s = svd(a)?;
    let sigma_k = s.sigma_at(k);
    let norm2 = |x: &ComplexMatrix| svd(x).map(|r| r.sigma_max());
    let mut min_right = f64::INFINITY;
    let mut min_left = f64::INFINITY;
    for t in 0..n_trials {
        let g = random_isometry(n, n - k + 1, derive_seed(seed, 2 * t as u64))?;
        min_right = min_right.min(norm2(&(a * g.matrix()))?);
        let l = random_isometry(m, m - k + 1, derive_seed(seed, 2 * t as u64 + 1))?;
        min_left = min_left.min(norm2(&l.matrix().adjoint_mul(a))?);
    }
    let v = s.full_right();
    let u = s.full_left();
    let g_star = v.column_range(k - 1, n);
    let l_star = u.column_range(k - 1, m);
    let right_star = norm2(&(a * &g_star))?;
    let left_star = norm2(&l_star.adjoint_mul(a))?;
    let outer_radius = phi_k_region_from((m, n), &s, k)?.region.outer_radius();
    Ok(IntersectionReport { k, sigma_k, min_right, right_star, min_left, left_star, outer_radius, n_trials })
}
