//! SVG pictures of planar bodies at a fixed 200 px per unit length.

use std::fmt::Write;

use rball_core::{ArcPolygon, BallBodyResult, Point2};

pub const PX_PER_UNIT: f64 = 200.0;

/// One drawn shape.
#[derive(Debug, Clone)]
pub struct Layer<'a> {
    pub label: &'a str,
    pub shape: &'a BallBodyResult,
    pub color: &'a str,
    pub fill: bool,
    pub dashed: bool,
}

struct Frame {
    half: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        (x + self.half) * PX_PER_UNIT
    }

    fn y(&self, y: f64) -> f64 {
        (self.half - y) * PX_PER_UNIT
    }
}

fn extent(b: &BallBodyResult) -> f64 {
    match b {
        BallBodyResult::Empty => 0.0,
        BallBodyResult::SinglePoint(p) => p.x.abs().max(p.y.abs()),
        BallBodyResult::Region(a) => {
            let r = a.radius();
            let mut m: f64 = 0.0;
            for arc in a.arcs() {
                for i in 0..=32 {
                    let t = arc.start_angle + arc.extent() * i as f64 / 32.0;
                    let p = arc.point_at(r, t);
                    m = m.max(p.x.abs()).max(p.y.abs());
                }
            }
            m
        }
    }
}

fn arc_path(f: &Frame, a: &ArcPolygon) -> String {
    let r = a.radius();
    let arcs = a.arcs();
    let p0 = arcs[0].point_at(r, arcs[0].start_angle);
    let mut d = format!("M {:.3} {:.3}", f.x(p0.x), f.y(p0.y));
    let rad = r * PX_PER_UNIT;
    for arc in arcs {
        // consecutive arcs share endpoints, so each arc starts where the last ended
        let end = arc.point_at(r, arc.end_angle);
        // counterclockwise in the plane is clockwise on screen: sweep flag 0
        let large = u8::from(arc.extent() > std::f64::consts::PI);
        let _ = write!(d, " A {rad:.3} {rad:.3} 0 {large} 0 {:.3} {:.3}", f.x(end.x), f.y(end.y));
    }
    d.push_str(" Z");
    d
}

fn style(l: &Layer) -> String {
    let fill = if l.fill {
        format!("fill=\"{}\" fill-opacity=\"0.3\"", l.color)
    } else {
        "fill=\"none\"".to_string()
    };
    let dash = if l.dashed { " stroke-dasharray=\"8 5\"" } else { "" };
    format!("{fill} stroke=\"{}\" stroke-width=\"2\"{dash}", l.color)
}

/// Draws the reference disk `B[o, r]` and the layers, centered at the origin.
pub fn render(r: f64, layers: &[Layer]) -> String {
    let half = layers.iter().map(|l| extent(l.shape)).fold(r, f64::max) * 1.1;
    let f = Frame { half };
    let size = 2.0 * half * PX_PER_UNIT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" viewBox=\"0 0 {size:.3} {size:.3}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<circle id=\"reference-ball\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>",
        f.x(0.0),
        f.y(0.0),
        r * PX_PER_UNIT
    );
    for l in layers {
        match l.shape {
            BallBodyResult::Empty => {}
            BallBodyResult::SinglePoint(p) => {
                let _ = writeln!(
                    s,
                    "<circle id=\"{}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"{}\"/>",
                    l.label,
                    f.x(p.x),
                    f.y(p.y),
                    l.color
                );
            }
            BallBodyResult::Region(a) if a.is_full_disk() => {
                let c: Point2 = a.arcs()[0].center;
                let _ = writeln!(
                    s,
                    "<circle id=\"{}\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" {}/>",
                    l.label,
                    f.x(c.x),
                    f.y(c.y),
                    a.radius() * PX_PER_UNIT,
                    style(l)
                );
            }
            BallBodyResult::Region(a) => {
                let _ = writeln!(s, "<path id=\"{}\" d=\"{}\" {}/>", l.label, arc_path(&f, a), style(l));
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rball_core::ball2d::make_lens;

    #[test]
    fn lens_picture_has_two_arcs_at_scale() {
        let lens = BallBodyResult::Region(make_lens(1.0, 1.0).unwrap());
        let svg = render(
            1.0,
            &[Layer { label: "body", shape: &lens, color: "#1f5fa8", fill: true, dashed: false }],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("id=\"reference-ball\""));
        assert_eq!(svg.matches(" A 200.000 200.000 ").count(), 2);
        // the reference disk spans 400 px inside a 440 px canvas
        assert!(svg.contains("width=\"440\""));
    }
}
