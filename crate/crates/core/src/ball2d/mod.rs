//! Exact planar kernel.
//!
//! A planar r-ball body `X^r` is stored as an [`ArcPolygon`] whose arcs all
//! have radius `r` and whose arc centers are the generators that reach the
//! boundary. Its dual swaps the roles of vertices and arc centers, which is
//! how ball hulls and duals are built here.

mod lens;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geom::{min_enclosing_ball, Arc, ArcPolygon, BallBodyResult, Point2, PointSet, Tolerances, TAU};

pub use lens::{lens_area, lens_gap_for_area, make_lens, Lens};

/// Arcs shorter than this (radians) are pruned.
const MIN_ARC: f64 = 1e-12;

/// First and second intrinsic volumes of a planar body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vk2D {
    /// Half the perimeter.
    pub v1: f64,
    /// Area.
    pub v2: f64,
}

impl Vk2D {
    pub const ZERO: Vk2D = Vk2D { v1: 0.0, v2: 0.0 };

    /// `V_k` for `k` in `{1, 2}`.
    pub fn get(&self, k: u32) -> Result<f64> {
        match k {
            1 => Ok(self.v1),
            2 => Ok(self.v2),
            _ => domain(format!("planar intrinsic volume index must be 1 or 2, got {k}")),
        }
    }
}

fn dedup(points: &[Point2], tol_merge: f64) -> Vec<Point2> {
    let mut kept: Vec<Point2> = Vec::with_capacity(points.len());
    for &p in points {
        if !kept.iter().any(|q| q.dist(p) <= tol_merge) {
            kept.push(p);
        }
    }
    kept
}

/// Smallest enclosing circle of planar points.
pub fn min_enclosing_circle(points: &[Point2]) -> (Point2, f64) {
    let raw: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    let refs: Vec<&[f64]> = raw.iter().map(|p| &p[..]).collect();
    let (c, r) = min_enclosing_ball(&refs);
    (Point2::new(c[0], c[1]), r)
}

/// The r-ball body `X^r` of planar generators: the intersection of the
/// radius-`r` disks about them.
///
/// Empty when the smallest enclosing circle of `X` is larger than `r` by more
/// than `tol_geom`, a single point (the enclosing circle's center) when the
/// two radii agree within `tol_geom`, and otherwise an arc polygon.
pub fn ball_body_2d(x: &PointSet, tol: &Tolerances) -> Result<BallBodyResult> {
    let pts = x.points_2d()?;
    Ok(ball_body_from_points(&pts, x.radius(), tol))
}

pub(crate) fn ball_body_from_points(points: &[Point2], r: f64, tol: &Tolerances) -> BallBodyResult {
    let gens = dedup(points, tol.tol_merge);
    let (center, mec) = min_enclosing_circle(&gens);
    if mec > r + tol.tol_geom {
        return BallBodyResult::Empty;
    }
    if (mec - r).abs() <= tol.tol_geom {
        return BallBodyResult::SinglePoint(center);
    }
    if gens.len() == 1 {
        return BallBodyResult::Region(ArcPolygon::disk(gens[0], r).expect("valid disk"));
    }
    // On circle i, the part inside disk j is the arc of half-width
    // acos(d_ij / 2r) about the direction of c_j - c_i; each such arc is
    // shorter than pi, so the running intersection stays a single arc.
    let mut arcs: Vec<Arc> = Vec::new();
    for (i, &ci) in gens.iter().enumerate() {
        let mut interval: Option<(f64, f64)> = None;
        let mut alive = true;
        for (j, &cj) in gens.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = cj - ci;
            let half = (d.norm() / (2.0 * r)).min(1.0).acos();
            let mid = d.angle();
            match interval {
                None => interval = Some((mid - half, mid + half)),
                Some((lo, hi)) => {
                    let centre = 0.5 * (lo + hi);
                    let m = mid + ((centre - mid) / TAU).round() * TAU;
                    let nlo = lo.max(m - half);
                    let nhi = hi.min(m + half);
                    if nhi - nlo <= MIN_ARC {
                        alive = false;
                        break;
                    }
                    interval = Some((nlo, nhi));
                }
            }
        }
        if !alive {
            continue;
        }
        if let Some((lo, hi)) = interval {
            if hi - lo > MIN_ARC {
                arcs.push(Arc {
                    center: ci,
                    start_angle: lo,
                    end_angle: hi,
                });
            }
        }
    }
    if arcs.len() < 2 {
        return BallBodyResult::SinglePoint(center);
    }
    // disjoint normal intervals: sorting by the middle normal gives ccw order
    arcs.sort_by(|a, b| {
        let ma = (0.5 * (a.start_angle + a.end_angle)).rem_euclid(TAU);
        let mb = (0.5 * (b.start_angle + b.end_angle)).rem_euclid(TAU);
        ma.total_cmp(&mb)
    });
    BallBodyResult::Region(ArcPolygon::from_arcs_unchecked(r, arcs))
}

/// The r-ball hull `conv_r X`, computed as the dual of `X^r`.
///
/// Empty iff `X^r` is empty; a single-point `X^r` yields the disk of radius
/// `r` about it; a disk `X^r` (one generator) yields that generator; any
/// other region yields the arc polygon whose arc centers are the vertices
/// of `X^r` and whose vertices are the arc centers of `X^r`.
pub fn ball_hull_2d(x: &PointSet, tol: &Tolerances) -> Result<BallBodyResult> {
    let pts = x.points_2d()?;
    Ok(ball_hull_from_points(&pts, x.radius(), tol))
}

pub(crate) fn ball_hull_from_points(points: &[Point2], r: f64, tol: &Tolerances) -> BallBodyResult {
    dual_of_body(&ball_body_from_points(points, r, tol), r)
}

/// Vertex/arc-center swap applied to an r-ball body produced by the kernel.
fn dual_of_body(body: &BallBodyResult, r: f64) -> BallBodyResult {
    match body {
        BallBodyResult::Empty => BallBodyResult::Empty,
        BallBodyResult::SinglePoint(c) => {
            BallBodyResult::Region(ArcPolygon::disk(*c, r).expect("valid disk"))
        }
        BallBodyResult::Region(d) if d.is_full_disk() => BallBodyResult::SinglePoint(d.arcs()[0].center),
        BallBodyResult::Region(d) => {
            let arcs = d.arcs();
            let n = arcs.len();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let a = &arcs[i];
                let b = &arcs[(i + 1) % n];
                // the hull arc about vertex i runs from c_i to c_(i+1); its
                // normal range is the vertex's normal cone turned by pi
                let start = a.end_angle + std::f64::consts::PI;
                let extent = (b.start_angle - a.end_angle).rem_euclid(TAU);
                let extent = if extent > TAU - 1e-9 { 0.0 } else { extent };
                if extent > MIN_ARC {
                    out.push(Arc {
                        center: d.vertices()[i],
                        start_angle: start,
                        end_angle: start + extent,
                    });
                }
            }
            if out.len() < 2 {
                // degenerate: every vertex cone vanished
                return BallBodyResult::SinglePoint(d.vertices()[0]);
            }
            BallBodyResult::Region(ArcPolygon::from_arcs_unchecked(r, out))
        }
    }
}

/// `A^r` for a region `A` given by radius-`r` arcs.
///
/// `A` is the intersection of the disks about its arc centers `C`, so
/// `A = C^r` and `A^r = conv_r C`; the result is `ball_hull_2d(C)`.
pub fn dual_2d(a: &ArcPolygon, r: f64, tol: &Tolerances) -> Result<BallBodyResult> {
    if (a.radius() - r).abs() > tol.tol_geom * r.max(1.0) {
        return domain(format!(
            "arc polygon of radius {} is not an r-ball body representation for r = {r}",
            a.radius()
        ));
    }
    if a.is_full_disk() {
        return Ok(BallBodyResult::SinglePoint(a.arcs()[0].center));
    }
    Ok(ball_hull_from_points(&a.arc_centers(), r, tol))
}

/// Dual of any planar result: `Empty^r` is treated as empty, a point's dual
/// is the disk of radius `r` about it, and a disk of radius at most `r` is
/// handled by [`disk_dual`].
pub fn dual_result_2d(b: &BallBodyResult, r: f64, tol: &Tolerances) -> Result<BallBodyResult> {
    match b {
        BallBodyResult::Empty => Ok(BallBodyResult::Empty),
        BallBodyResult::SinglePoint(p) => Ok(BallBodyResult::Region(ArcPolygon::disk(*p, r)?)),
        BallBodyResult::Region(a) if a.is_full_disk() && (a.radius() - r).abs() > tol.tol_geom * r.max(1.0) => {
            disk_dual(a.arcs()[0].center, a.radius(), r, tol)
        }
        BallBodyResult::Region(a) => dual_2d(a, r, tol),
    }
}

/// Exact dual of the disk `B[center, rho]` in ambient radius `r`:
/// `B[center, r - rho]`, a point when `rho = r`, empty when `rho > r`.
pub fn disk_dual(center: Point2, rho: f64, r: f64, tol: &Tolerances) -> Result<BallBodyResult> {
    if !(rho >= 0.0) || !(r > 0.0) {
        return domain("disk radius must be nonnegative and r positive");
    }
    if rho > r + tol.tol_geom {
        Ok(BallBodyResult::Empty)
    } else if (rho - r).abs() <= tol.tol_geom {
        Ok(BallBodyResult::SinglePoint(center))
    } else {
        Ok(BallBodyResult::Region(ArcPolygon::disk(center, r - rho)?))
    }
}

/// Support function of a region in direction `u` (unit length within
/// `tol_geom`).
pub fn support_2d(a: &ArcPolygon, u: Point2, tol: &Tolerances) -> Result<f64> {
    let n = u.norm();
    if !(n > 0.0) || !n.is_finite() {
        return domain("support direction must be nonzero");
    }
    if (n - 1.0).abs() > tol.tol_geom {
        return domain(format!("support direction must have unit length, got {n}"));
    }
    Ok(a.support(u * (1.0 / n)))
}

/// Support function of any nonempty planar result.
pub fn support_result_2d(b: &BallBodyResult, u: Point2) -> Option<f64> {
    match b {
        BallBodyResult::Empty => None,
        BallBodyResult::SinglePoint(p) => Some(p.dot(u)),
        BallBodyResult::Region(a) => Some(a.support(u)),
    }
}

/// `V_1` (half-perimeter) and `V_2` (area); zero for empty sets and points.
pub fn intrinsic_volumes_2d(b: &BallBodyResult) -> Vk2D {
    match b {
        BallBodyResult::Empty | BallBodyResult::SinglePoint(_) => Vk2D::ZERO,
        BallBodyResult::Region(a) => Vk2D {
            v1: a.half_perimeter(),
            v2: a.area(),
        },
    }
}

/// Membership with slack `tol_geom` on the boundary.
pub fn contains_2d(b: &BallBodyResult, p: Point2, tol: &Tolerances) -> bool {
    match b {
        BallBodyResult::Empty => false,
        BallBodyResult::SinglePoint(q) => q.dist(p) <= tol.tol_geom,
        BallBodyResult::Region(a) => a.contains(p, tol.tol_geom),
    }
}

#[cfg(test)]
mod tests;
