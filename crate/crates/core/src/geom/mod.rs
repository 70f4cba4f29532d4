//! Shared primitives: points, balls, generator sets, tolerances, the
//! arc-polygon representation, and shape comparison.

mod affine;
mod arc;
mod constants;
mod enclosing;
mod hausdorff;
mod pose;
pub mod quadrature;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub(crate) use affine::SphereStratum;
pub use arc::{Arc, ArcPolygon, BallBodyResult, SupportPiece};
pub use constants::{ball_intrinsic_volume, omega};
pub(crate) use constants::omega_unchecked;
pub use enclosing::min_enclosing_ball;
pub use hausdorff::hausdorff_distance;
pub use pose::{congruence_distance, is_congruent, normalize_pose, region_moments, RegionMoments};

/// Highest ambient dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 8;

pub(crate) const TAU: f64 = std::f64::consts::TAU;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta` from the first axis.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise rotation by `phi` about the origin.
    #[inline]
    pub fn rotated(self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// A point of `E^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("a point needs at least one coordinate");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return domain("point coordinates must be finite");
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// The planar view of a 2-dimensional point.
    pub fn to_2d(&self) -> Result<Point2> {
        match self.coords[..] {
            [x, y] => Ok(Point2::new(x, y)),
            _ => domain(format!("expected a 2D point, got dimension {}", self.dim())),
        }
    }
}

impl From<Point2> for Point {
    fn from(p: Point2) -> Self {
        Self {
            coords: vec![p.x, p.y],
        }
    }
}

/// Closed Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return domain("ball radius must be finite and nonnegative");
        }
        Ok(Self { center, radius })
    }
}

/// Numerical tolerances shared by constructions and checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Geometric coincidence (points on circles, the single-point band).
    pub tol_geom: f64,
    /// Generator deduplication.
    pub tol_merge: f64,
    /// Allowed slack when asserting an inequality.
    pub tol_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_geom: 1e-9,
            tol_merge: 1e-12,
            tol_check: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.tol_geom, self.tol_merge, self.tol_check]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0);
        if !all_positive {
            return domain("tolerances must be positive and finite");
        }
        if !(self.tol_merge <= self.tol_geom && self.tol_geom <= self.tol_check) {
            return domain("tolerances must satisfy tol_merge <= tol_geom <= tol_check");
        }
        Ok(())
    }
}

/// A finite, deduplicated generator set together with the ball radius `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    radius: f64,
    points: Vec<Point>,
}

impl PointSet {
    /// Validates the generators and merges points closer than `tol_merge`.
    pub fn new(dim: usize, radius: f64, points: Vec<Point>, tol_merge: f64) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return domain(format!("dimension must lie in 2..={MAX_DIM}, got {dim}"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain("radius r must be positive and finite");
        }
        if points.is_empty() {
            return domain("generator set must be nonempty");
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return domain(format!(
                "generator of dimension {} in a {dim}-dimensional set",
                p.dim()
            ));
        }
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            let dup = kept.iter().any(|q| dist(p.coords(), q.coords()) <= tol_merge);
            if !dup {
                kept.push(p);
            }
        }
        Ok(Self {
            dim,
            radius,
            points: kept,
        })
    }

    /// Planar generator set with default merge tolerance.
    pub fn planar(radius: f64, points: &[Point2]) -> Result<Self> {
        Self::new(
            2,
            radius,
            points.iter().map(|&p| Point::from(p)).collect(),
            Tolerances::default().tol_merge,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points_2d(&self) -> Result<Vec<Point2>> {
        if self.dim != 2 {
            return domain(format!("expected a 2D generator set, got dimension {}", self.dim));
        }
        self.points.iter().map(Point::to_2d).collect()
    }

    /// Same generators, different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return domain("radius r must be positive and finite");
        }
        Ok(Self {
            radius,
            ..self.clone()
        })
    }
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

#[inline]
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
