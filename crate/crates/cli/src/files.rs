//! JSON artifact formats.
//!
//! Numbers are written in shortest round-trip form, so a value read back
//! parses to the same double and saving again reproduces the file byte for
//! byte.

use std::path::Path;

use rball_core::{Arc, ArcPolygon, BallBodyResult, Point, Point2, PointSet, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// `{"dim", "r", "points"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub dim: usize,
    pub r: f64,
    pub points: Vec<Vec<f64>>,
}

impl PointSetFile {
    pub fn from_point_set(x: &PointSet) -> Self {
        Self {
            dim: x.dim(),
            r: x.radius(),
            points: x.points().iter().map(|p| p.coords().to_vec()).collect(),
        }
    }

    /// Validates the set; near-duplicate points are merged.
    pub fn to_point_set(&self, tol: &Tolerances) -> Result<PointSet, CliError> {
        let points = self
            .points
            .iter()
            .map(|c| Point::new(c.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::new(self.dim, self.r, points, tol.tol_merge)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcRecord {
    pub center: [f64; 2],
    pub start_angle: f64,
    pub end_angle: f64,
}

/// `{"r", "full_disk", "arcs", "vertices"}`; arcs run counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcPolygonFile {
    pub r: f64,
    pub full_disk: bool,
    pub arcs: Vec<ArcRecord>,
    pub vertices: Vec<[f64; 2]>,
}

fn pair(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

impl ArcPolygonFile {
    pub fn from_polygon(a: &ArcPolygon) -> Self {
        Self {
            r: a.radius(),
            full_disk: a.is_full_disk(),
            arcs: a
                .arcs()
                .iter()
                .map(|arc| ArcRecord {
                    center: pair(arc.center),
                    start_angle: arc.start_angle,
                    end_angle: arc.end_angle,
                })
                .collect(),
            vertices: a.vertices().iter().map(|&v| pair(v)).collect(),
        }
    }

    /// Rebuilds and validates the polygon; the stored flag and vertices must
    /// agree with the arcs.
    pub fn to_polygon(&self, tol: &Tolerances) -> Result<ArcPolygon, CliError> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc {
                center: Point2::new(a.center[0], a.center[1]),
                start_angle: a.start_angle,
                end_angle: a.end_angle,
            })
            .collect();
        let poly = ArcPolygon::from_arcs(self.r, arcs, tol.tol_geom)?;
        if poly.is_full_disk() != self.full_disk {
            return Err(CliError::Input("full_disk flag disagrees with the arcs".into()));
        }
        let band = tol.tol_geom * self.r.max(1.0);
        let agree = poly.vertices().len() == self.vertices.len()
            && poly
                .vertices()
                .iter()
                .zip(&self.vertices)
                .all(|(p, q)| p.dist(Point2::new(q[0], q[1])) <= band);
        if !agree {
            return Err(CliError::Input("vertices disagree with the arcs".into()));
        }
        Ok(poly)
    }
}

/// `{"result": "empty"}` or `{"result": "point", "point": [x, y]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Marker {
    pub result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
}

impl Marker {
    pub fn empty() -> Self {
        Self { result: "empty".into(), point: None }
    }

    pub fn point(p: &[f64]) -> Self {
        Self { result: "point".into(), point: Some(p.to_vec()) }
    }
}

/// Serializes a planar body as an arc-polygon file or a marker.
pub fn body_json(b: &BallBodyResult) -> String {
    match b {
        BallBodyResult::Empty => crate::to_json(&Marker::empty()),
        BallBodyResult::SinglePoint(p) => crate::to_json(&Marker::point(&pair(*p))),
        BallBodyResult::Region(a) => crate::to_json(&ArcPolygonFile::from_polygon(a)),
    }
}

/// Any document the commands read.
#[derive(Debug, Clone, PartialEq)]
pub enum InputFile {
    Points(PointSetFile),
    Polygon(ArcPolygonFile),
    Marker(Marker),
}

fn malformed(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("malformed JSON in {}: {e}", path.display()))
}

impl InputFile {
    /// Parses `text`, telling the formats apart by their keys.
    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| malformed(path, e))?;
        let Some(obj) = v.as_object() else {
            return Err(malformed(path, "expected a JSON object"));
        };
        let parsed = if obj.contains_key("points") {
            serde_json::from_value(v).map(Self::Points)
        } else if obj.contains_key("arcs") {
            serde_json::from_value(v).map(Self::Polygon)
        } else if obj.contains_key("result") {
            serde_json::from_value(v).map(Self::Marker)
        } else {
            return Err(malformed(path, "expected a point set, an arc polygon, or a result marker"));
        };
        parsed.map_err(|e| malformed(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(path, &text)
    }

    /// A planar shape from a polygon or marker file; `r` is needed for markers.
    pub fn to_body_2d(&self, r: Option<f64>, tol: &Tolerances) -> Result<(BallBodyResult, Option<f64>), CliError> {
        match self {
            Self::Polygon(f) => Ok((BallBodyResult::Region(f.to_polygon(tol)?), Some(f.r))),
            Self::Marker(m) => match (m.result.as_str(), &m.point) {
                ("empty", None) => Ok((BallBodyResult::Empty, r)),
                ("point", Some(p)) if p.len() == 2 => {
                    let q = Point2::new(p[0], p[1]);
                    if !q.is_finite() {
                        return Err(CliError::Input("point marker must be finite".into()));
                    }
                    Ok((BallBodyResult::SinglePoint(q), r))
                }
                _ => Err(CliError::Input(format!("unrecognized result marker {:?}", m.result))),
            },
            Self::Points(_) => Err(CliError::Input("expected an arc polygon or result marker, got a point set".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rball_core::ball2d::{ball_body_2d, make_lens};

    fn round_trip(text: &str) -> String {
        let tol = Tolerances::default();
        match InputFile::parse(Path::new("t.json"), text).unwrap() {
            InputFile::Polygon(f) => crate::to_json(&ArcPolygonFile::from_polygon(&f.to_polygon(&tol).unwrap())),
            InputFile::Points(f) => crate::to_json(&PointSetFile::from_point_set(&f.to_point_set(&tol).unwrap())),
            InputFile::Marker(m) => crate::to_json(&m),
        }
    }

    #[test]
    fn lens_file_round_trips_byte_for_byte() {
        let once = crate::to_json(&ArcPolygonFile::from_polygon(&make_lens(1.0, 1.0).unwrap()));
        let twice = round_trip(&once);
        assert_eq!(once, twice);
        assert_eq!(twice, round_trip(&twice));
    }

    #[test]
    fn disk_and_markers_round_trip() {
        let disk = crate::to_json(&ArcPolygonFile::from_polygon(&ArcPolygon::disk(Point2::new(0.1, -0.3), 2.0).unwrap()));
        assert_eq!(disk, round_trip(&disk));
        let m = crate::to_json(&Marker::point(&[0.25, 1.0 / 3.0]));
        assert_eq!(m, round_trip(&m));
    }

    #[test]
    fn polygon_from_random_points_round_trips() {
        let tol = Tolerances::default();
        let pts = [
            Point2::new(0.113, -0.271),
            Point2::new(-0.319, 0.05),
            Point2::new(0.2, 0.41),
            Point2::new(0.37, 0.1),
        ];
        let body = ball_body_2d(&PointSet::planar(1.0, &pts).unwrap(), &tol).unwrap();
        let once = body_json(&body);
        let twice = round_trip(&once);
        assert_eq!(once, twice);
        let back = InputFile::parse(Path::new("t"), &twice).unwrap().to_body_2d(None, &tol).unwrap().0;
        let (a, b) = (body.region().unwrap(), back.region().unwrap());
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            assert!(p.dist(*q) <= 1e-15 * p.norm().max(1.0));
        }
    }

    proptest::proptest! {
        #[test]
        fn save_load_save_is_byte_identical(
            pts in proptest::collection::vec((-0.45f64..0.45, -0.45f64..0.45), 1..8),
            hull in proptest::bool::ANY,
        ) {
            let tol = Tolerances::default();
            let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
            let x = PointSet::planar(1.0, &pts).unwrap();
            let b = if hull {
                rball_core::ball2d::ball_hull_2d(&x, &tol).unwrap()
            } else {
                ball_body_2d(&x, &tol).unwrap()
            };
            let once = body_json(&b);
            proptest::prop_assert_eq!(&once, &round_trip(&once));
            let ps = crate::to_json(&PointSetFile::from_point_set(&x));
            proptest::prop_assert_eq!(&ps, &round_trip(&ps));
        }
    }

    #[test]
    fn tampered_files_are_rejected() {
        let tol = Tolerances::default();
        let mut f = ArcPolygonFile::from_polygon(&make_lens(1.0, 1.0).unwrap());
        f.vertices[0][1] += 1e-3;
        assert!(matches!(f.to_polygon(&tol), Err(CliError::Input(_))));
        let mut f = ArcPolygonFile::from_polygon(&make_lens(1.0, 1.0).unwrap());
        f.full_disk = true;
        assert!(f.to_polygon(&tol).is_err());
        assert!(InputFile::parse(Path::new("t"), "{\"dim\": 2, \"r\": 1, \"points\": [[0, 1e400]]}").is_err());
        assert!(InputFile::parse(Path::new("t"), "[1, 2]").is_err());
        assert!(InputFile::parse(Path::new("t"), "{\"dim\": 2, \"r\": 1, \"points\": [], \"extra\": 0}").is_err());
    }
}
