//! Field of values `F(A) = {x*Ax : ‖x‖ = 1}` of a square matrix.
//!
//! The boundary is traced by supporting lines: for each angle `θ` the top
//! eigenvector of `½(e^{−iθ}A + e^{iθ}A*)` gives the boundary point whose
//! outward normal is `e^{iθ}`.

use std::f64::consts::TAU;

use crate::error::{input, Result};
use crate::geometry::{equispaced_angles, BoundaryCurve, Region, SharpPoint};
use crate::linalg::{eigen::top_eigenpair, eigenvalues, vec_dot, ComplexMatrix, C64};

pub const MIN_ANGLES: usize = 8;
/// Relative cluster tolerance for corner detection.
pub const CLUSTER_REL_TOL: f64 = 1e-6;

fn rotated_hermitian_part(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let w = C64::from_polar(1.0, -theta);
    a.scale(w).hermitian_part()
}

/// Support value and boundary point of `F(A)` in direction `e^{iθ}`.
pub fn support_point(a: &ComplexMatrix, theta: f64) -> Result<(f64, C64)> {
    if !a.is_square() {
        return Err(input(format!("field of values needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let k = rotated_hermitian_part(a, theta);
    let (p, x) = top_eigenpair(&k)?;
    let z = vec_dot(&x, &a.apply(&x));
    Ok((p, z))
}

/// Sampled boundary of `F(A)` on `n_angles` equispaced angles.
pub fn fov_boundary(a: &ComplexMatrix, n_angles: usize) -> Result<BoundaryCurve> {
    if n_angles < MIN_ANGLES {
        return Err(input(format!("at least {MIN_ANGLES} angles required, got {n_angles}")));
    }
    let angles = equispaced_angles(n_angles);
    let mut support = Vec::with_capacity(n_angles);
    let mut points = Vec::with_capacity(n_angles);
    for &t in &angles {
        let (p, z) = support_point(a, t)?;
        support.push(p);
        points.push(z);
    }
    BoundaryCurve::new(angles, support, points)
}

/// `F(A)` as a region: a segment for Hermitian-up-to-rotation inputs of
/// size 1 or with collinear range, otherwise the sampled boundary.
pub fn fov_region(a: &ComplexMatrix, n_angles: usize) -> Result<Region> {
    let curve = fov_boundary(a, n_angles)?;
    let scale = curve.scale();
    if a.rows() == 1 {
        return Ok(Region::point(a[(0, 0)]));
    }
    if a.is_hermitian(1e-12 * scale.max(1.0)) {
        let lo = -curve.support_at(std::f64::consts::PI);
        let hi = curve.support_at(0.0);
        return Ok(Region::segment(C64::new(lo, 0.0), C64::new(hi, 0.0)));
    }
    Ok(Region::ConvexBoundary(curve))
}

/// Boundary points that stay the maximizer over at least `min_cone_width`
/// radians of consecutive grid angles.
///
/// Consecutive maximizers closer than `cluster_tol` are chained into one
/// cluster; the reported location is the middle member of the chain.
pub fn sharp_points(curve: &BoundaryCurve, min_cone_width: f64, cluster_tol: f64) -> Vec<SharpPoint> {
    sharp_clusters(curve, min_cone_width, cluster_tol)
        .into_iter()
        .map(|c| c.sharp)
        .collect()
}

/// Defaults: three grid steps and `1e−6·scale`.
pub fn default_sharp_points(curve: &BoundaryCurve) -> Vec<SharpPoint> {
    let (w, tol) = default_thresholds(curve);
    sharp_points(curve, w, tol)
}

fn default_thresholds(curve: &BoundaryCurve) -> (f64, f64) {
    (3.0 * TAU / curve.len() as f64, CLUSTER_REL_TOL * curve.scale())
}

struct Cluster {
    sharp: SharpPoint,
    members: Vec<C64>,
}

fn sharp_clusters(curve: &BoundaryCurve, min_cone_width: f64, cluster_tol: f64) -> Vec<Cluster> {
    let n = curve.len();
    if n == 0 {
        return Vec::new();
    }
    let step = TAU / n as f64;
    let pts = &curve.points;
    let linked = |i: usize| (pts[i] - pts[(i + n - 1) % n]).norm() <= cluster_tol;
    let Some(start) = (0..n).find(|&i| !linked(i)) else {
        // A single maximizer for every direction: the set is a point.
        return vec![Cluster {
            sharp: SharpPoint { location: pts[0], normal_cone_width: TAU, direction: 0.0 },
            members: pts.clone(),
        }];
    };

    let mut out = Vec::new();
    let mut run = vec![start];
    let flush = |run: &[usize], out: &mut Vec<Cluster>| {
        let width = run.len() as f64 * step;
        if width + 1e-12 >= min_cone_width {
            let mid = run[run.len() / 2];
            let first = curve.angles[run[0]];
            let direction = (first + (run.len() - 1) as f64 * step / 2.0).rem_euclid(TAU);
            out.push(Cluster {
                sharp: SharpPoint { location: pts[mid], normal_cone_width: width, direction },
                members: run.iter().map(|&i| pts[i]).collect(),
            });
        }
    };
    for off in 1..n {
        let i = (start + off) % n;
        if linked(i) {
            run.push(i);
        } else {
            flush(&run, &mut out);
            run = vec![i];
        }
    }
    flush(&run, &mut out);
    out
}

/// A detected corner together with the eigenvalue it approximates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corner {
    pub sharp: SharpPoint,
    /// Eigenvalue of `A` lying within the cluster's extent, if any.
    pub eigenvalue: Option<C64>,
}

impl Corner {
    /// The eigenvalue when one was matched, else the on-curve location.
    pub fn location(&self) -> C64 {
        self.eigenvalue.unwrap_or(self.sharp.location)
    }
}

/// Corners of `F(A)` on `curve`, each matched to the nearest eigenvalue of
/// `A` that lies within the spread of its maximizer cluster.
pub fn corners(a: &ComplexMatrix, curve: &BoundaryCurve) -> Result<Vec<Corner>> {
    let eig = eigenvalues(a)?;
    let (w, tol) = default_thresholds(curve);
    Ok(sharp_clusters(curve, w, tol)
        .into_iter()
        .map(|c| {
            let spread = c
                .members
                .iter()
                .map(|z| (z - c.sharp.location).norm())
                .fold(0.0, f64::max);
            let eigenvalue = eig
                .iter()
                .copied()
                .min_by(|p, q| (p - c.sharp.location).norm().total_cmp(&(q - c.sharp.location).norm()))
                .filter(|l| (l - c.sharp.location).norm() <= spread + tol);
            Corner { sharp: c.sharp, eigenvalue }
        })
        .collect())
}
