use serde::{Deserialize, Serialize};

use super::{Point2, TAU};
use crate::error::{domain, Result};

/// Counterclockwise arc of a circle, given by its center and the polar
/// angles (about that center) of its endpoints. `end_angle > start_angle`.
///
/// Because the region is convex, the outward normal at the point of angle
/// `theta` is the unit vector at angle `theta`: an arc's angle interval is
/// also the set of outward normal directions it supports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point2,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl Arc {
    #[inline]
    pub fn extent(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    #[inline]
    pub fn point_at(&self, radius: f64, theta: f64) -> Point2 {
        self.center + Point2::from_angle(theta) * radius
    }

    /// True when the normal direction `theta` lies in the arc's angle range.
    #[inline]
    pub fn covers_angle(&self, theta: f64) -> bool {
        (theta - self.start_angle).rem_euclid(TAU) <= self.extent() + 1e-15
    }
}

/// Exact boundary representation of a planar region bounded by circular arcs
/// of one common radius, listed counterclockwise.
///
/// The region is the intersection of the closed disks of that radius about
/// the arc centers. A single full-circle arc encodes a disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPolygon {
    radius: f64,
    arcs: Vec<Arc>,
    vertices: Vec<Point2>,
    full_disk: bool,
}

/// One piece of a support function: on normal angles `[from, to]`,
/// `h(u) = <anchor, u> + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPiece {
    pub from: f64,
    pub to: f64,
    pub anchor: Point2,
    pub offset: f64,
}

impl SupportPiece {
    #[inline]
    pub fn eval(&self, theta: f64) -> f64 {
        self.anchor.dot(Point2::from_angle(theta)) + self.offset
    }
}

impl ArcPolygon {
    /// The closed disk `B[center, radius]`.
    pub fn disk(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return domain("disk needs a finite center and a positive finite radius");
        }
        Ok(Self {
            radius,
            arcs: vec![Arc {
                center,
                start_angle: 0.0,
                end_angle: TAU,
            }],
            vertices: Vec::new(),
            full_disk: true,
        })
    }

    /// Builds and validates an arc polygon from counterclockwise arcs.
    ///
    /// `tol` bounds the gap between consecutive arc endpoints and the amount
    /// by which a vertex may stick out of another arc's disk.
    pub fn from_arcs(radius: f64, arcs: Vec<Arc>, tol: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return domain("arc radius must be positive and finite");
        }
        if arcs.is_empty() {
            return domain("an arc polygon needs at least one arc");
        }
        if arcs.iter().any(|a| {
            !a.center.is_finite() || !a.start_angle.is_finite() || !a.end_angle.is_finite()
        }) {
            return domain("arc data must be finite");
        }
        if arcs.len() == 1 {
            if (arcs[0].extent() - TAU).abs() > 1e-9 {
                return domain("a single arc must be a full circle");
            }
            return Self::disk(arcs[0].center, radius);
        }
        let tol = tol * radius.max(1.0);
        for a in &arcs {
            let e = a.extent();
            if !(e > 0.0 && e <= std::f64::consts::PI + 1e-9) {
                return domain(format!("arc extent {e} outside (0, pi]"));
            }
        }
        let n = arcs.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = &arcs[i];
            let b = &arcs[(i + 1) % n];
            let end = a.point_at(radius, a.end_angle);
            let start = b.point_at(radius, b.start_angle);
            if end.dist(start) > tol {
                return domain(format!("arcs {i} and {} do not share an endpoint", (i + 1) % n));
            }
            let gap = (b.start_angle - a.end_angle).rem_euclid(TAU);
            let gap = if gap > TAU - 1e-9 { gap - TAU } else { gap };
            if gap < -1e-9 || gap >= std::f64::consts::PI {
                return domain(format!("boundary is not convex at vertex {i}"));
            }
            turning += a.extent() + gap;
        }
        if (turning - TAU).abs() > 1e-6 {
            return domain("arcs are not ordered counterclockwise around a single region");
        }
        let poly = Self::from_arcs_unchecked(radius, arcs);
        for v in &poly.vertices {
            for a in &poly.arcs {
                if v.dist(a.center) > radius + tol {
                    return domain("region is not the intersection of its arc disks");
                }
            }
        }
        Ok(poly)
    }

    /// Canonicalizes angles and derives vertices without validation.
    pub(crate) fn from_arcs_unchecked(radius: f64, arcs: Vec<Arc>) -> Self {
        if arcs.len() == 1 {
            return Self {
                radius,
                arcs: vec![Arc {
                    center: arcs[0].center,
                    start_angle: 0.0,
                    end_angle: TAU,
                }],
                vertices: Vec::new(),
                full_disk: true,
            };
        }
        let arcs: Vec<Arc> = arcs
            .into_iter()
            .map(|a| {
                let start = wrap_pi(a.start_angle);
                // keep canonical input bit-exact so save/load round trips
                let end = if start == a.start_angle { a.end_angle } else { start + a.extent() };
                Arc {
                    center: a.center,
                    start_angle: start,
                    end_angle: end,
                }
            })
            .collect();
        let n = arcs.len();
        let vertices = (0..n)
            .map(|i| {
                let a = &arcs[i];
                let b = &arcs[(i + 1) % n];
                let p = a.point_at(radius, a.end_angle);
                let q = b.point_at(radius, b.start_angle);
                (p + q) * 0.5
            })
            .collect();
        Self {
            radius,
            arcs,
            vertices,
            full_disk: false,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Vertex `i` joins arc `i` to arc `i + 1` (cyclically). Empty for a disk.
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_full_disk(&self) -> bool {
        self.full_disk
    }

    pub fn arc_centers(&self) -> Vec<Point2> {
        self.arcs.iter().map(|a| a.center).collect()
    }

    /// Membership in the closed region, with slack `tol` on the boundary.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.arcs.iter().all(|a| a.center.dist(p) <= self.radius + tol)
    }

    /// Half the perimeter.
    pub fn half_perimeter(&self) -> f64 {
        0.5 * self.radius * self.arcs.iter().map(Arc::extent).sum::<f64>()
    }

    /// Shoelace area of the vertex polygon plus one circular segment per arc.
    pub fn area(&self) -> f64 {
        let r2 = self.radius * self.radius;
        let segments: f64 = self
            .arcs
            .iter()
            .map(|a| {
                let phi = a.extent();
                0.5 * r2 * (phi - phi.sin())
            })
            .sum();
        let n = self.vertices.len();
        let shoelace: f64 = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            * 0.5;
        shoelace + segments
    }

    /// Support function `h(u) = max <p, u>` over the region; `u` must be a
    /// unit vector.
    pub fn support(&self, u: Point2) -> f64 {
        let theta = u.angle();
        let mut best = f64::NEG_INFINITY;
        for a in &self.arcs {
            if a.covers_angle(theta) {
                best = best.max(a.center.dot(u) + self.radius);
            }
        }
        for v in &self.vertices {
            best = best.max(v.dot(u));
        }
        best
    }

    /// Piecewise description of the support function over one full turn of
    /// normal angles, starting at the first arc's start angle.
    pub fn support_pieces(&self) -> Vec<SupportPiece> {
        if self.full_disk {
            return vec![SupportPiece {
                from: 0.0,
                to: TAU,
                anchor: self.arcs[0].center,
                offset: self.radius,
            }];
        }
        let n = self.arcs.len();
        let mut out = Vec::with_capacity(2 * n);
        let mut theta = self.arcs[0].start_angle;
        for i in 0..n {
            let a = &self.arcs[i];
            let b = &self.arcs[(i + 1) % n];
            let to = theta + a.extent();
            out.push(SupportPiece {
                from: theta,
                to,
                anchor: a.center,
                offset: self.radius,
            });
            theta = to;
            let gap = (b.start_angle - a.end_angle).rem_euclid(TAU);
            let gap = if gap > TAU - 1e-9 { 0.0 } else { gap };
            if gap > 0.0 {
                out.push(SupportPiece {
                    from: theta,
                    to: theta + gap,
                    anchor: self.vertices[i],
                    offset: 0.0,
                });
                theta += gap;
            }
        }
        out
    }

    /// Image under `p -> R(rotation) * F(p) + translation`, where `F` flips
    /// the second coordinate when `reflect` is set.
    pub fn transformed(&self, rotation: f64, reflect: bool, translation: Point2) -> Self {
        let map = |p: Point2| {
            let p = if reflect { Point2::new(p.x, -p.y) } else { p };
            p.rotated(rotation) + translation
        };
        if self.full_disk {
            return Self {
                radius: self.radius,
                arcs: vec![Arc {
                    center: map(self.arcs[0].center),
                    start_angle: 0.0,
                    end_angle: TAU,
                }],
                vertices: Vec::new(),
                full_disk: true,
            };
        }
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| {
                let (s, e) = if reflect {
                    (-a.end_angle, -a.start_angle)
                } else {
                    (a.start_angle, a.end_angle)
                };
                Arc {
                    center: map(a.center),
                    start_angle: s + rotation,
                    end_angle: e + rotation,
                }
            })
            .collect();
        if reflect {
            arcs.reverse();
        }
        Self::from_arcs_unchecked(self.radius, arcs)
    }

    pub fn translated(&self, t: Point2) -> Self {
        self.transformed(0.0, false, t)
    }
}

/// Outcome of an r-ball body or r-ball hull construction in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BallBodyResult {
    Empty,
    SinglePoint(Point2),
    Region(ArcPolygon),
}

impl BallBodyResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn region(&self) -> Option<&ArcPolygon> {
        match self {
            Self::Region(a) => Some(a),
            _ => None,
        }
    }

    pub fn into_region(self) -> Option<ArcPolygon> {
        match self {
            Self::Region(a) => Some(a),
            _ => None,
        }
    }

    /// Support pieces over `[0, 2pi)`-ish; `None` for the empty set.
    pub(crate) fn support_pieces(&self) -> Option<Vec<SupportPiece>> {
        match self {
            Self::Empty => None,
            Self::SinglePoint(p) => Some(vec![SupportPiece {
                from: 0.0,
                to: TAU,
                anchor: *p,
                offset: 0.0,
            }]),
            Self::Region(a) => Some(a.support_pieces()),
        }
    }
}

/// Maps an angle into `(-pi, pi]`.
pub(crate) fn wrap_pi(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > std::f64::consts::PI {
        t - TAU
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_lens() -> ArcPolygon {
        // disks of radius 1 about (-0.5, 0) and (0.5, 0)
        let w = (0.5f64).acos();
        ArcPolygon::from_arcs(
            1.0,
            vec![
                Arc {
                    center: Point2::new(-0.5, 0.0),
                    start_angle: -w,
                    end_angle: w,
                },
                Arc {
                    center: Point2::new(0.5, 0.0),
                    start_angle: std::f64::consts::PI - w,
                    end_angle: std::f64::consts::PI + w,
                },
            ],
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn lens_vertices_and_measures() {
        let l = unit_lens();
        let h = 0.75f64.sqrt();
        assert!(l.vertices()[0].dist(Point2::new(0.0, h)) < 1e-15);
        assert!(l.vertices()[1].dist(Point2::new(0.0, -h)) < 1e-15);
        let pi = std::f64::consts::PI;
        assert!((l.half_perimeter() - 2.0 * pi / 3.0).abs() < 1e-15);
        assert!((l.area() - (2.0 * pi / 3.0 - h)).abs() < 1e-15);
    }

    #[test]
    fn rejects_clockwise_or_broken_input() {
        let pi = std::f64::consts::PI;
        let reuleaux: Vec<Arc> = (0..3)
            .map(|k| {
                let th = 2.0 * pi * k as f64 / 3.0;
                let mid = th + pi;
                Arc {
                    center: Point2::from_angle(th) * (1.0 / 3f64.sqrt()),
                    start_angle: mid - pi / 6.0,
                    end_angle: mid + pi / 6.0,
                }
            })
            .collect();
        assert!(ArcPolygon::from_arcs(1.0, reuleaux.clone(), 1e-9).is_ok());
        let mut arcs = reuleaux;
        arcs.swap(1, 2);
        assert!(ArcPolygon::from_arcs(1.0, arcs, 1e-9).is_err());
        let l = unit_lens();
        let mut arcs = l.arcs().to_vec();
        arcs[0].end_angle -= 0.1;
        assert!(ArcPolygon::from_arcs(1.0, arcs, 1e-9).is_err());
        assert!(ArcPolygon::from_arcs(
            1.0,
            vec![Arc {
                center: Point2::ORIGIN,
                start_angle: 0.0,
                end_angle: 1.0
            }],
            1e-9
        )
        .is_err());
    }

    #[test]
    fn support_pieces_tile_a_full_turn() {
        let l = unit_lens();
        let pieces = l.support_pieces();
        let total: f64 = pieces.iter().map(|p| p.to - p.from).sum();
        assert!((total - TAU).abs() < 1e-12);
        for p in &pieces {
            let mid = 0.5 * (p.from + p.to);
            assert!((p.eval(mid) - l.support(Point2::from_angle(mid))).abs() < 1e-14);
        }
    }

    #[test]
    fn reflection_keeps_counterclockwise_order() {
        let l = unit_lens().translated(Point2::new(0.2, 0.1));
        let m = l.transformed(0.4, true, Point2::new(1.0, -2.0));
        let again = ArcPolygon::from_arcs(m.radius(), m.arcs().to_vec(), 1e-9);
        assert!(again.is_ok());
        assert!((m.area() - l.area()).abs() < 1e-14);
    }
}
