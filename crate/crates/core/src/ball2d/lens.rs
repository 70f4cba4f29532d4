use serde::{Deserialize, Serialize};

use super::ball_body_from_points;
use crate::error::{domain, Result};
use crate::geom::{ArcPolygon, BallBodyResult, Point2, Tolerances};

/// Intersection of two radius-`r` disks whose centers are `center_gap` apart.
///
/// The default pose puts the centers at `(+-t/2, 0)`; `rotation` (radians)
/// and `translation` move the lens rigidly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lens {
    pub radius: f64,
    pub center_gap: f64,
    pub rotation: f64,
    pub translation: Point2,
}

impl Lens {
    pub fn new(radius: f64, center_gap: f64) -> Result<Self> {
        check_gap(radius, center_gap)?;
        Ok(Self {
            radius,
            center_gap,
            rotation: 0.0,
            translation: Point2::ORIGIN,
        })
    }

    /// The two disk centers.
    pub fn centers(&self) -> [Point2; 2] {
        let h = Point2::new(0.5 * self.center_gap, 0.0);
        [
            (-h).rotated(self.rotation) + self.translation,
            h.rotated(self.rotation) + self.translation,
        ]
    }

    pub fn region(&self) -> ArcPolygon {
        let tol = Tolerances::default();
        match ball_body_from_points(&self.centers(), self.radius, &tol) {
            BallBodyResult::Region(a) => a,
            // unreachable for 0 < t < 2r beyond rounding at the extremes
            _ => ArcPolygon::disk(self.translation, 0.0_f64.max(self.radius - 0.5 * self.center_gap))
                .expect("valid disk"),
        }
    }

    pub fn area(&self) -> f64 {
        lens_area(self.radius, self.center_gap)
    }
}

fn check_gap(r: f64, t: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain("lens radius must be positive and finite");
    }
    if !(t > 0.0 && t < 2.0 * r) {
        return domain(format!("lens center gap must lie in (0, 2r) = (0, {}), got {t}", 2.0 * r));
    }
    Ok(())
}

/// The axis-aligned lens of radius `r` and center gap `t`, `0 < t < 2r`.
pub fn make_lens(r: f64, t: f64) -> Result<ArcPolygon> {
    Ok(Lens::new(r, t)?.region())
}

/// Area of the lens: `2 r^2 acos(t / 2r) - (t/2) sqrt(4 r^2 - t^2)`.
pub fn lens_area(r: f64, t: f64) -> f64 {
    let t = t.clamp(0.0, 2.0 * r);
    2.0 * r * r * (t / (2.0 * r)).acos() - 0.5 * t * (4.0 * r * r - t * t).max(0.0).sqrt()
}

/// The center gap of the lens with area `v`, `0 < v < pi r^2`, by bisection
/// on the strictly decreasing area map.
pub fn lens_gap_for_area(r: f64, v: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return domain("lens radius must be positive and finite");
    }
    let full = std::f64::consts::PI * r * r;
    if !(v > 0.0 && v < full) {
        return domain(format!("lens area must lie in (0, pi r^2) = (0, {full}), got {v}"));
    }
    let (mut lo, mut hi) = (0.0, 2.0 * r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lens_area(r, mid) > v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
