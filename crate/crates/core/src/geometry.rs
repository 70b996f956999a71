//! Planar region types and the predicates used to compare computed ranges.
//!
//! Complex numbers serialize as `[re, im]` pairs. Every region carries a
//! support function `p(θ) = max Re(e^{−iθ}z)`, which is what most
//! comparisons in the crate reduce to.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::linalg::C64;

pub const DEFAULT_ANGLES: usize = 720;
/// Two grids are the same grid when their angles agree to this tolerance.
const GRID_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Empty,
    Point {
        z: C64,
    },
    Segment {
        a: C64,
        b: C64,
    },
    Disc {
        center: C64,
        radius: f64,
    },
    Circle {
        center: C64,
        radius: f64,
    },
    Annulus {
        center: C64,
        inner: f64,
        outer: f64,
    },
    /// `major_axis` is the full length `2a`: the boundary is `|z−f₁| + |z−f₂| = major_axis`.
    Ellipse {
        focus1: C64,
        focus2: C64,
        major_axis: f64,
    },
    #[serde(rename = "boundary")]
    ConvexBoundary(BoundaryCurve),
}

/// Sampled boundary of a compact convex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub angles: Vec<f64>,
    pub support: Vec<f64>,
    pub points: Vec<C64>,
}

/// A boundary point that maximizes `Re(e^{−iθ}·)` over a whole interval of angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpPoint {
    pub location: C64,
    pub normal_cone_width: f64,
    /// Midpoint of the normal cone.
    pub direction: f64,
}

/// `ω = e^{iθ}`.
#[inline]
pub fn omega(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `Re(e^{−iθ}z)`.
#[inline]
pub fn project(theta: f64, z: C64) -> f64 {
    z.re * theta.cos() + z.im * theta.sin()
}

/// `n` equispaced angles `2πj/n`, `j = 0..n`.
pub fn equispaced_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

fn segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

impl Region {
    pub fn point(z: C64) -> Region {
        Region::Point { z }
    }

    /// Disc, collapsing to a point at radius 0.
    pub fn disc(center: C64, radius: f64) -> Region {
        if radius <= 0.0 {
            Region::Point { z: center }
        } else {
            Region::Disc { center, radius }
        }
    }

    pub fn circle(center: C64, radius: f64) -> Region {
        if radius <= 0.0 {
            Region::Point { z: center }
        } else {
            Region::Circle { center, radius }
        }
    }

    /// Annulus `inner ≤ |z − c| ≤ outer` in normal form.
    pub fn annulus(center: C64, inner: f64, outer: f64) -> Result<Region> {
        if !(inner >= 0.0 && outer >= inner) {
            return Err(input(format!("annulus radii must satisfy 0 <= inner <= outer, got {inner}, {outer}")));
        }
        Ok(if inner == outer {
            Region::circle(center, outer)
        } else if inner == 0.0 {
            Region::disc(center, outer)
        } else {
            Region::Annulus { center, inner, outer }
        })
    }

    pub fn segment(a: C64, b: C64) -> Region {
        if a == b {
            Region::Point { z: a }
        } else {
            Region::Segment { a, b }
        }
    }

    /// Ellipse in normal form; collapses to a segment when the major axis
    /// equals the focal distance and to a disc when the foci coincide.
    pub fn ellipse(focus1: C64, focus2: C64, major_axis: f64) -> Result<Region> {
        let d = (focus2 - focus1).norm();
        if major_axis.is_nan() || major_axis < d * (1.0 - 1e-15) {
            return Err(input(format!("ellipse major axis {major_axis} shorter than focal distance {d}")));
        }
        Ok(if major_axis <= d {
            Region::segment(focus1, focus2)
        } else if d == 0.0 {
            Region::disc(focus1, major_axis / 2.0)
        } else {
            Region::Ellipse { focus1, focus2, major_axis }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Region::Empty => "empty",
            Region::Point { .. } => "point",
            Region::Segment { .. } => "segment",
            Region::Disc { .. } => "disc",
            Region::Circle { .. } => "circle",
            Region::Annulus { .. } => "annulus",
            Region::Ellipse { .. } => "ellipse",
            Region::ConvexBoundary(_) => "boundary",
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Region::Empty)
    }

    /// Whether `z` lies within distance `tol` of the region.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        match self {
            Region::Empty => false,
            Region::Point { z: p } => (z - p).norm() <= tol,
            Region::Segment { a, b } => segment_distance(z, *a, *b) <= tol,
            Region::Disc { center, radius } => (z - center).norm() <= radius + tol,
            Region::Circle { center, radius } => ((z - center).norm() - radius).abs() <= tol,
            Region::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                r >= inner - tol && r <= outer + tol
            }
            Region::Ellipse { focus1, focus2, major_axis } => {
                (z - focus1).norm() + (z - focus2).norm() <= major_axis + 2.0 * tol
            }
            Region::ConvexBoundary(c) => c.contains(z, tol),
        }
    }

    /// Support function of the convex hull, `−∞` for the empty set.
    pub fn support(&self, theta: f64) -> f64 {
        match self {
            Region::Empty => f64::NEG_INFINITY,
            Region::Point { z } => project(theta, *z),
            Region::Segment { a, b } => project(theta, *a).max(project(theta, *b)),
            Region::Disc { center, radius }
            | Region::Circle { center, radius }
            | Region::Annulus { center, outer: radius, .. } => project(theta, *center) + radius,
            Region::Ellipse { focus1, focus2, major_axis } => {
                let c = (focus1 + focus2) / 2.0;
                let half = (focus2 - focus1) / 2.0;
                let a = major_axis / 2.0;
                let d = half.norm();
                let b2 = (a * a - d * d).max(0.0);
                let w = omega(theta).conj();
                let (pu, qu) = if d > 0.0 {
                    let u = w * half / d;
                    (u.re, u.im)
                } else {
                    (1.0, 0.0)
                };
                project(theta, c) + (a * a * pu * pu + b2 * qu * qu).sqrt()
            }
            Region::ConvexBoundary(c) => c.support_at(theta),
        }
    }

    /// A point of the hull attaining `support(θ)`.
    pub fn support_point(&self, theta: f64) -> Option<C64> {
        let w = omega(theta);
        match self {
            Region::Empty => None,
            Region::Point { z } => Some(*z),
            Region::Segment { a, b } => Some(if project(theta, *a) >= project(theta, *b) { *a } else { *b }),
            Region::Disc { center, radius }
            | Region::Circle { center, radius }
            | Region::Annulus { center, outer: radius, .. } => Some(center + w * *radius),
            Region::Ellipse { focus1, focus2, major_axis } => {
                let c = (focus1 + focus2) / 2.0;
                let half = (focus2 - focus1) / 2.0;
                let a = major_axis / 2.0;
                let d = half.norm();
                let u = if d > 0.0 { half / d } else { C64::new(1.0, 0.0) };
                let b = (a * a - d * d).max(0.0).sqrt();
                // Local frame: z = c + u(a cos t + i b sin t); maximize Re(ω̄ z).
                let v = w.conj() * u;
                let (x, y) = (a * v.re, -b * v.im);
                let r = x.hypot(y);
                let (ct, st) = if r > 0.0 { (x / r, y / r) } else { (1.0, 0.0) };
                Some(c + u * C64::new(a * ct, b * st))
            }
            Region::ConvexBoundary(c) => c
                .points
                .iter()
                .copied()
                .max_by(|p, q| project(theta, *p).total_cmp(&project(theta, *q))),
        }
    }

    /// Boundary curve of the convex hull sampled on `n` equispaced angles.
    pub fn hull_curve(&self, n: usize) -> Option<BoundaryCurve> {
        if let Region::ConvexBoundary(c) = self {
            if c.angles.len() == n {
                return Some(c.clone());
            }
        }
        let angles = equispaced_angles(n);
        let mut points = Vec::with_capacity(n);
        for &t in &angles {
            points.push(self.support_point(t)?);
        }
        let support = angles.iter().map(|&t| self.support(t)).collect();
        Some(BoundaryCurve { angles, support, points })
    }

    /// `(center, inner, outer)` for the rotationally symmetric kinds.
    pub fn rings(&self) -> Option<(C64, f64, f64)> {
        match *self {
            Region::Point { z } => Some((z, 0.0, 0.0)),
            Region::Disc { center, radius } => Some((center, 0.0, radius)),
            Region::Circle { center, radius } => Some((center, radius, radius)),
            Region::Annulus { center, inner, outer } => Some((center, inner, outer)),
            _ => None,
        }
    }

    /// Largest distance from the origin of a point in the region.
    pub fn outer_radius(&self) -> f64 {
        match self {
            Region::Empty => 0.0,
            Region::Point { z } => z.norm(),
            Region::Segment { a, b } => a.norm().max(b.norm()),
            Region::Disc { center, radius }
            | Region::Circle { center, radius }
            | Region::Annulus { center, outer: radius, .. } => center.norm() + radius,
            Region::Ellipse { focus1, focus2, major_axis } => {
                let c = (focus1 + focus2) / 2.0;
                c.norm() + major_axis / 2.0
            }
            Region::ConvexBoundary(c) => c.points.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Inclusion test for the ring family (and `Empty`); `None` when the
    /// kinds are not comparable by radii.
    pub fn subset_of(&self, other: &Region, tol: f64) -> Option<bool> {
        if self.is_empty() {
            return Some(true);
        }
        if other.is_empty() {
            return Some(false);
        }
        let (c1, i1, o1) = self.rings()?;
        let (c2, i2, o2) = other.rings()?;
        if (c1 - c2).norm() > tol {
            return None;
        }
        Some(o1 <= o2 + tol && i1 >= i2 - tol)
    }

    /// Image of the region under `z ↦ c·z`.
    pub fn scaled(&self, c: C64) -> Region {
        let s = c.norm();
        match self {
            Region::Empty => Region::Empty,
            Region::Point { z } => Region::point(c * z),
            Region::Segment { a, b } => Region::segment(c * a, c * b),
            Region::Disc { center, radius } => Region::disc(c * center, s * radius),
            Region::Circle { center, radius } => Region::circle(c * center, s * radius),
            Region::Annulus { center, inner, outer } => {
                Region::annulus(c * center, s * inner, s * outer).unwrap_or(Region::Empty)
            }
            Region::Ellipse { focus1, focus2, major_axis } => {
                Region::ellipse(c * focus1, c * focus2, s * major_axis).unwrap_or(Region::Empty)
            }
            Region::ConvexBoundary(curve) => {
                let pts: Vec<C64> = curve.points.iter().map(|z| c * z).collect();
                Region::ConvexBoundary(BoundaryCurve::from_points(curve.angles.clone(), pts))
            }
        }
    }
}

/// Free-function form of [`Region::contains`].
pub fn region_contains(r: &Region, z: C64, tol: f64) -> bool {
    r.contains(z, tol)
}

impl BoundaryCurve {
    pub fn new(angles: Vec<f64>, support: Vec<f64>, points: Vec<C64>) -> Result<BoundaryCurve> {
        if angles.is_empty() || angles.len() != support.len() || angles.len() != points.len() {
            return Err(input("boundary curve: angles, support and points must have equal nonzero length"));
        }
        if angles.iter().any(|t| !(0.0..TAU).contains(t)) || angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(input("boundary curve: angles must be ascending in [0, 2π)"));
        }
        Ok(BoundaryCurve { angles, support, points })
    }

    /// Curve whose support values are recomputed from `points`.
    pub fn from_points(angles: Vec<f64>, points: Vec<C64>) -> BoundaryCurve {
        let support = angles
            .iter()
            .map(|&t| points.iter().map(|&z| project(t, z)).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        BoundaryCurve { angles, support, points }
    }

    /// Hull of a finite point set sampled on `n` equispaced angles.
    pub fn hull_of(points: &[C64], n: usize) -> BoundaryCurve {
        let angles = equispaced_angles(n);
        let pts = angles
            .iter()
            .map(|&t| {
                points
                    .iter()
                    .copied()
                    .max_by(|p, q| project(t, *p).total_cmp(&project(t, *q)))
                    .expect("hull of an empty point set")
            })
            .collect();
        BoundaryCurve::from_points(angles, pts)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `max |z|` over the stored points, at least `f64::MIN_POSITIVE`.
    pub fn scale(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max)
    }

    /// Support of the hull of the stored points at an arbitrary angle.
    pub fn support_at(&self, theta: f64) -> f64 {
        self.points.iter().map(|&z| project(theta, z)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest violation of `p(θ_i) = max_j Re(e^{−iθ_i} z_j)`.
    pub fn support_defect(&self) -> f64 {
        self.angles
            .iter()
            .zip(&self.support)
            .map(|(&t, &p)| (self.support_at(t) - p).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `Re(e^{−iθ}z) − p(θ)` over the grid.
    pub fn excess(&self, z: C64) -> f64 {
        self.angles
            .iter()
            .zip(&self.support)
            .map(|(&t, &p)| project(t, z) - p)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support-function dominance on the grid.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.excess(z) <= tol
    }

    /// Support values recomputed from the stored points.
    pub fn rebuilt(&self) -> BoundaryCurve {
        BoundaryCurve::from_points(self.angles.clone(), self.points.clone())
    }

    pub fn same_grid(&self, other: &BoundaryCurve) -> bool {
        self.angles.len() == other.angles.len()
            && self.angles.iter().zip(&other.angles).all(|(a, b)| (a - b).abs() <= GRID_TOL)
    }

    /// `([min Re, max Re], [min Im, max Im])` read from the support values at
    /// `0, π` and `π/2, 3π/2`; the grid must contain those four angles.
    pub fn axis_extents(&self) -> Result<((f64, f64), (f64, f64))> {
        let at = |target: f64| -> Result<f64> {
            self.angles
                .iter()
                .position(|&t| (t - target).abs() <= 1e-9)
                .map(|i| self.support[i])
                .ok_or_else(|| input("axis extents need a grid containing 0, π/2, π, 3π/2"))
        };
        let re = (-at(PI)?, at(0.0)?);
        let im = (-at(3.0 * FRAC_PI_2)?, at(FRAC_PI_2)?);
        Ok((re, im))
    }

    /// Curve of `e^{iφ}·K` for the set `K` bounded by `self`, on the same grid.
    pub fn rotated(&self, phi: f64) -> BoundaryCurve {
        let w = omega(phi);
        BoundaryCurve::from_points(self.angles.clone(), self.points.iter().map(|z| w * z).collect())
    }
}

/// `max_θ p_a(θ) − p_b(θ)`; `a ⊆ b` up to `tol` iff the result is `≤ tol`.
pub fn support_gap(a: &BoundaryCurve, b: &BoundaryCurve) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(input("support_gap: curves are sampled on different angle grids"));
    }
    Ok(a.support.iter().zip(&b.support).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max))
}
