//! Moment-based pose normalization for congruence tests.

use super::quadrature::integrate;
use super::{hausdorff_distance, ArcPolygon, BallBodyResult, Point2};
use crate::error::{domain, Result};

/// Area, centroid and central moments up to order three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMoments {
    pub area: f64,
    pub centroid: Point2,
    pub mu20: f64,
    pub mu11: f64,
    pub mu02: f64,
    pub mu30: f64,
    pub mu21: f64,
    pub mu12: f64,
    pub mu03: f64,
}

const PANEL: f64 = std::f64::consts::PI / 16.0;

/// `sum over arcs of the line integral of F dy`, with coordinates taken
/// relative to `origin`. By Green's theorem this is the area integral of
/// `dF/dx` over the region.
fn boundary_integral(a: &ArcPolygon, origin: Point2, f: impl Fn(f64, f64) -> f64) -> f64 {
    let rho = a.radius();
    a.arcs()
        .iter()
        .map(|arc| {
            let c = arc.center - origin;
            integrate(
                |t| {
                    let (s, co) = t.sin_cos();
                    f(c.x + rho * co, c.y + rho * s) * rho * co
                },
                arc.start_angle,
                arc.end_angle,
                PANEL,
            )
        })
        .sum()
}

fn monomial(a: &ArcPolygon, origin: Point2, p: i32, q: i32) -> f64 {
    boundary_integral(a, origin, |x, y| x.powi(p + 1) * y.powi(q) / (p + 1) as f64)
}

/// Exact-to-quadrature-precision moments of an arc polygon.
pub fn region_moments(a: &ArcPolygon) -> RegionMoments {
    let area = monomial(a, Point2::ORIGIN, 0, 0);
    // a first pass about a boundary point keeps the centroid well scaled
    let base = a.arcs()[0].center;
    let cx = monomial(a, base, 1, 0) / area;
    let cy = monomial(a, base, 0, 1) / area;
    let g = base + Point2::new(cx, cy);
    RegionMoments {
        area,
        centroid: g,
        mu20: monomial(a, g, 2, 0),
        mu11: monomial(a, g, 1, 1),
        mu02: monomial(a, g, 0, 2),
        mu30: monomial(a, g, 3, 0),
        mu21: monomial(a, g, 2, 1),
        mu12: monomial(a, g, 1, 2),
        mu03: monomial(a, g, 0, 3),
    }
}

/// Central complex moment `integral of z^m dA` as `(re, im)`.
fn complex_moment(a: &ArcPolygon, origin: Point2, m: i32) -> (f64, f64) {
    let k = (m + 1) as f64;
    let re = boundary_integral(a, origin, |x, y| {
        let (r, t) = (x.hypot(y), y.atan2(x));
        r.powi(m + 1) * (k * t).cos() / k
    });
    let im = boundary_integral(a, origin, |x, y| {
        let (r, t) = (x.hypot(y), y.atan2(x));
        r.powi(m + 1) * (k * t).sin() / k
    });
    (re, im)
}

fn sign_of_first(values: [f64; 2], eps: f64) -> f64 {
    for v in values {
        if v.abs() > eps {
            return v.signum();
        }
    }
    1.0
}

/// Places a region in a canonical pose: centroid at the origin, major
/// principal axis along the first coordinate, and the reflection/half-turn
/// ambiguity resolved by requiring nonnegative third moments where they do
/// not vanish. Shapes with isotropic second moments are rotated by the first
/// nonvanishing complex moment of order 3..=8 instead; a disk only moves.
pub fn normalize_pose(a: &BallBodyResult) -> Result<ArcPolygon> {
    let poly = match a {
        BallBodyResult::Region(p) => p,
        _ => return domain("pose normalization needs a region"),
    };
    let m = region_moments(poly);
    let centered = poly.translated(-m.centroid);
    if poly.is_full_disk() {
        return Ok(centered);
    }
    let spread = m.mu20 + m.mu02;
    let aniso = (m.mu20 - m.mu02).hypot(2.0 * m.mu11);
    if aniso > 1e-9 * spread {
        let phi = 0.5 * (2.0 * m.mu11).atan2(m.mu20 - m.mu02);
        let rotated = centered.transformed(-phi, false, Point2::ORIGIN);
        let r = region_moments(&rotated);
        let eps = 1e-9 * m.area.powf(2.5);
        let sx = sign_of_first([r.mu30, r.mu12], eps);
        let sy = sign_of_first([r.mu03, r.mu21], eps);
        let out = match (sx > 0.0, sy > 0.0) {
            (true, true) => rotated,
            (false, false) => rotated.transformed(std::f64::consts::PI, false, Point2::ORIGIN),
            (true, false) => rotated.transformed(0.0, true, Point2::ORIGIN),
            (false, true) => rotated.transformed(std::f64::consts::PI, true, Point2::ORIGIN),
        };
        return Ok(out);
    }
    for order in 3..=8 {
        let (re, im) = complex_moment(&centered, Point2::ORIGIN, order);
        let size = m.area.powf(1.0 + 0.5 * order as f64);
        if re.hypot(im) > 1e-9 * size {
            let psi = -im.atan2(re) / order as f64;
            return Ok(centered.transformed(psi, false, Point2::ORIGIN));
        }
    }
    Ok(centered)
}

/// Every pose of `a` that its canonical frame cannot tell apart: the four
/// axis flips for anisotropic shapes, the `m`-fold rotations (and their
/// mirror images) for isotropic ones.
fn pose_candidates(poly: &ArcPolygon) -> Vec<ArcPolygon> {
    let m = region_moments(poly);
    let centered = poly.translated(-m.centroid);
    if poly.is_full_disk() {
        return vec![centered];
    }
    let spread = m.mu20 + m.mu02;
    let aniso = (m.mu20 - m.mu02).hypot(2.0 * m.mu11);
    let pi = std::f64::consts::PI;
    if aniso > 1e-9 * spread {
        let phi = 0.5 * (2.0 * m.mu11).atan2(m.mu20 - m.mu02);
        let rotated = centered.transformed(-phi, false, Point2::ORIGIN);
        return vec![
            rotated.transformed(pi, false, Point2::ORIGIN),
            rotated.transformed(0.0, true, Point2::ORIGIN),
            rotated.transformed(pi, true, Point2::ORIGIN),
            rotated,
        ];
    }
    let mut out = Vec::new();
    for reflect in [false, true] {
        let c = centered.transformed(0.0, reflect, Point2::ORIGIN);
        let mut found = false;
        for order in 3..=8 {
            let (re, im) = complex_moment(&c, Point2::ORIGIN, order);
            if re.hypot(im) > 1e-9 * m.area.powf(1.0 + 0.5 * order as f64) {
                let psi = -im.atan2(re) / order as f64;
                for j in 0..order {
                    let turn = psi + 2.0 * pi * j as f64 / order as f64;
                    out.push(c.transformed(turn, false, Point2::ORIGIN));
                }
                found = true;
                break;
            }
        }
        if !found {
            out.push(c);
        }
    }
    out
}

/// Hausdorff distance between `a` in canonical pose and the closest
/// canonical-frame pose of `b`; `+inf` when the kinds differ (region vs
/// point vs empty).
pub fn congruence_distance(a: &BallBodyResult, b: &BallBodyResult) -> f64 {
    match (a, b) {
        (BallBodyResult::Region(_), BallBodyResult::Region(pb)) => {
            let na = BallBodyResult::Region(normalize_pose(a).expect("region"));
            pose_candidates(pb)
                .into_iter()
                .map(|c| hausdorff_distance(&na, &BallBodyResult::Region(c)))
                .fold(f64::INFINITY, f64::min)
        }
        (BallBodyResult::Empty, BallBodyResult::Empty) => 0.0,
        (BallBodyResult::SinglePoint(_), BallBodyResult::SinglePoint(_)) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Congruence up to rigid motions and reflections, within Hausdorff `tol`
/// after pose normalization.
pub fn is_congruent(a: &BallBodyResult, b: &BallBodyResult, tol: f64) -> bool {
    congruence_distance(a, b) <= tol
}
