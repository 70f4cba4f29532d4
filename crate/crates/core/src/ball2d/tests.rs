use super::*;
use crate::geom::{hausdorff_distance, is_congruent};
use proptest::prelude::*;
use std::f64::consts::PI;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn body(r: f64, pts: &[Point2]) -> BallBodyResult {
    ball_body_from_points(pts, r, &tol())
}

fn hull(r: f64, pts: &[Point2]) -> BallBodyResult {
    ball_hull_from_points(pts, r, &tol())
}

fn pair() -> [Point2; 2] {
    [Point2::new(-0.5, 0.0), Point2::new(0.5, 0.0)]
}

#[test]
fn singleton_gives_full_disk() {
    let b = body(1.0, &[Point2::new(0.2, 0.3)]);
    let a = b.region().unwrap();
    assert!(a.is_full_disk());
    let v = intrinsic_volumes_2d(&b);
    assert!((v.v1 - PI).abs() < 1e-15 && (v.v2 - PI).abs() < 1e-15);
}

#[test]
fn lens_closed_forms() {
    let b = body(1.0, &pair());
    let a = b.region().unwrap();
    assert_eq!(a.arcs().len(), 2);
    let h = 3f64.sqrt() / 2.0;
    let mut ys: Vec<f64> = a.vertices().iter().map(|v| v.y).collect();
    ys.sort_by(f64::total_cmp);
    assert!((ys[0] + h).abs() < 1e-15 && (ys[1] - h).abs() < 1e-15);
    assert!(a.vertices().iter().all(|v| v.x.abs() < 1e-15));
    let v = intrinsic_volumes_2d(&b);
    assert!((v.v1 - 2.0 * PI / 3.0).abs() < 1e-14);
    assert!((v.v2 - (2.0 * PI / 3.0 - h)).abs() < 1e-14);
}

#[test]
fn disjoint_pair_is_empty() {
    assert!(body(1.0, &[Point2::ORIGIN, Point2::new(2.5, 0.0)]).is_empty());
}

#[test]
fn circumradius_band_gives_point() {
    let pts: Vec<Point2> = (0..3).map(|i| Point2::from_angle(2.0 * PI * i as f64 / 3.0)).collect();
    match body(1.0, &pts) {
        BallBodyResult::SinglePoint(p) => assert!(p.norm() < 1e-12),
        other => panic!("expected a point, got {other:?}"),
    }
    match hull(1.0, &pts) {
        BallBodyResult::Region(a) => {
            assert!(a.is_full_disk());
            assert!(a.arcs()[0].center.norm() < 1e-12);
        }
        other => panic!("expected a disk, got {other:?}"),
    }
}

#[test]
fn hull_of_singleton_is_the_point() {
    match hull(1.0, &[Point2::new(1.0, 2.0)]) {
        BallBodyResult::SinglePoint(p) => assert_eq!(p, Point2::new(1.0, 2.0)),
        other => panic!("expected a point, got {other:?}"),
    }
}

#[test]
fn spindle_of_two_points() {
    let s = hull(1.0, &pair());
    let a = s.region().unwrap();
    let h = 3f64.sqrt() / 2.0;
    let mut cy: Vec<f64> = a.arcs().iter().map(|c| c.center.y).collect();
    cy.sort_by(f64::total_cmp);
    assert!((cy[0] + h).abs() < 1e-15 && (cy[1] - h).abs() < 1e-15);
    let v = intrinsic_volumes_2d(&s);
    assert!((v.v1 - PI / 3.0).abs() < 1e-14);
    assert!((v.v2 - (PI / 3.0 - h)).abs() < 1e-14);
}

#[test]
fn dual_of_disk_and_lens() {
    let d = ArcPolygon::disk(Point2::ORIGIN, 1.0).unwrap();
    assert_eq!(dual_2d(&d, 1.0, &tol()).unwrap(), BallBodyResult::SinglePoint(Point2::ORIGIN));
    let l = make_lens(1.0, 1.0).unwrap();
    let dl = dual_2d(&l, 1.0, &tol()).unwrap();
    assert!(hausdorff_distance(&dl, &hull(1.0, &pair())) < 1e-15);
    assert!(dual_2d(&l, 2.0, &tol()).is_err());
}

#[test]
fn lens_dual_matches_sampled_definition() {
    let l = make_lens(1.0, 1.0).unwrap();
    let dl = dual_2d(&l, 1.0, &tol()).unwrap();
    let boundary: Vec<Point2> = l
        .arcs()
        .iter()
        .flat_map(|a| (0..=400).map(move |i| a.point_at(1.0, a.start_angle + a.extent() * i as f64 / 400.0)))
        .collect();
    let mut disagreements = 0;
    for i in 0..100 {
        for j in 0..100 {
            let p = Point2::new(-1.0 + 0.02 * i as f64, -1.0 + 0.02 * j as f64);
            let far = boundary.iter().map(|q| q.dist(p)).fold(0.0, f64::max);
            if far > 1.0 - 1e-4 && far < 1.0 + 1e-4 {
                continue;
            }
            if (far <= 1.0) != contains_2d(&dl, p, &tol()) {
                disagreements += 1;
            }
        }
    }
    assert_eq!(disagreements, 0);
}

#[test]
fn disk_dual_is_concentric() {
    let t = tol();
    match disk_dual(Point2::ORIGIN, 0.6, 1.0, &t).unwrap() {
        BallBodyResult::Region(a) => assert!((a.radius() - 0.4).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
    assert!(matches!(disk_dual(Point2::ORIGIN, 1.0, 1.0, &t).unwrap(), BallBodyResult::SinglePoint(_)));
    assert!(disk_dual(Point2::ORIGIN, 1.2, 1.0, &t).unwrap().is_empty());
}

#[test]
fn support_examples() {
    let t = tol();
    let d = ArcPolygon::disk(Point2::ORIGIN, 1.0).unwrap();
    assert!((support_2d(&d, Point2::from_angle(0.7), &t).unwrap() - 1.0).abs() < 1e-15);
    let l = make_lens(1.0, 1.0).unwrap();
    assert!((support_2d(&l, Point2::new(1.0, 0.0), &t).unwrap() - 0.5).abs() < 1e-15);
    assert!((support_2d(&l, Point2::new(0.0, 1.0), &t).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!(support_2d(&l, Point2::ORIGIN, &t).is_err());
}

#[test]
fn lens_constructor_limits() {
    assert!(make_lens(1.0, 2.0).is_err());
    assert!(make_lens(1.0, 0.0).is_err());
    let thin = make_lens(1.0, 1e-6).unwrap();
    assert!((thin.area() - PI).abs() < 1e-5);
}

#[test]
fn lens_gap_inverts_area() {
    let v = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
    assert!((lens_gap_for_area(1.0, v).unwrap() - 1.0).abs() < 1e-10);
    assert!(lens_gap_for_area(1.0, PI - 1e-9).unwrap() <= 1e-3);
    assert!(lens_gap_for_area(1.0, 1e-9).unwrap() >= 2.0 - 1e-2);
    assert!(lens_gap_for_area(1.0, PI).is_err());
    assert!(lens_gap_for_area(1.0, 0.0).is_err());
    for &v in &[0.01, 0.5, 1.7, 3.0] {
        let t = lens_gap_for_area(1.3, v).unwrap();
        assert!((make_lens(1.3, t).unwrap().area() - v).abs() < 1e-12);
    }
}

#[test]
fn containment_examples() {
    let t = tol();
    let d = BallBodyResult::Region(ArcPolygon::disk(Point2::ORIGIN, 1.0).unwrap());
    assert!(contains_2d(&d, Point2::ORIGIN, &t));
    let l = BallBodyResult::Region(make_lens(1.0, 1.0).unwrap());
    assert!(!contains_2d(&l, Point2::new(0.0, 0.9), &t));
    assert!(contains_2d(&l, Point2::new(0.0, 0.8), &t));
    assert!(!contains_2d(&BallBodyResult::Empty, Point2::ORIGIN, &t));
}

#[test]
fn interior_generators_do_not_carry_arcs() {
    let pts = [Point2::new(-0.5, 0.0), Point2::new(0.5, 0.0), Point2::new(0.0, 0.01)];
    let a = body(1.0, &pts).into_region().unwrap();
    assert_eq!(a.arcs().len(), 2);
}

fn generators(max_n: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((0.0..0.6f64, 0.0..std::f64::consts::TAU), 1..=max_n)
        .prop_map(|v| v.into_iter().map(|(rho, th)| Point2::from_angle(th) * rho).collect())
}

fn region_body(pts: &[Point2]) -> Option<ArcPolygon> {
    match body(1.0, pts) {
        BallBodyResult::Region(a) if !a.is_full_disk() => Some(a),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arc_polygon_invariants_hold(pts in generators(9)) {
        if let Some(a) = region_body(&pts) {
            prop_assert!(ArcPolygon::from_arcs(1.0, a.arcs().to_vec(), 1e-9).is_ok());
            for v in a.vertices() {
                prop_assert!(pts.iter().all(|p| p.dist(*v) <= 1.0 + 1e-9));
            }
            let v = intrinsic_volumes_2d(&BallBodyResult::Region(a));
            prop_assert!(v.v2 <= (2.0 * v.v1).powi(2) / (4.0 * PI) + 1e-9);
        }
    }

    #[test]
    fn triple_dual_is_idempotent(pts in generators(8)) {
        if let Some(a) = region_body(&pts) {
            let once = dual_2d(&a, 1.0, &tol()).unwrap();
            let twice = dual_result_2d(&once, 1.0, &tol()).unwrap();
            prop_assert!(hausdorff_distance(&twice, &BallBodyResult::Region(a.clone())) <= 1e-9);
            let thrice = dual_result_2d(&twice, 1.0, &tol()).unwrap();
            prop_assert!(hausdorff_distance(&thrice, &once) <= 1e-9);
        }
    }

    #[test]
    fn hull_dual_recovers_body(pts in generators(8)) {
        let b = body(1.0, &pts);
        if let BallBodyResult::Region(_) = b {
            let h = hull(1.0, &pts);
            let back = dual_result_2d(&h, 1.0, &tol()).unwrap();
            prop_assert!(hausdorff_distance(&back, &b) <= 1e-9);
        }
    }

    #[test]
    fn hull_contains_generators(pts in generators(8)) {
        let h = hull(1.0, &pts);
        if !h.is_empty() {
            for p in &pts {
                prop_assert!(contains_2d(&h, *p, &tol()));
            }
        }
    }

    #[test]
    fn union_and_order_reversal(x in generators(5), y in generators(5), probes in prop::collection::vec((-1.2..1.2f64, -1.2..1.2f64), 100)) {
        let xy: Vec<Point2> = x.iter().chain(&y).copied().collect();
        let bx = body(1.0, &x);
        let by = body(1.0, &y);
        let bxy = body(1.0, &xy);
        let t = Tolerances { tol_geom: 1e-9, ..tol() };
        for (px, py) in probes {
            let p = Point2::new(px, py);
            let near = xy.iter().any(|g| (g.dist(p) - 1.0).abs() < 1e-7);
            if near {
                continue;
            }
            let in_xy = contains_2d(&bxy, p, &t);
            prop_assert_eq!(in_xy, contains_2d(&bx, p, &t) && contains_2d(&by, p, &t));
            if in_xy {
                prop_assert!(contains_2d(&bx, p, &t));
            }
        }
    }

    #[test]
    fn support_additivity_and_half_perimeter_sum(pts in generators(8)) {
        if let Some(a) = region_body(&pts) {
            let d = dual_2d(&a, 1.0, &tol()).unwrap();
            for i in 0..720 {
                let u = Point2::from_angle(2.0 * PI * i as f64 / 720.0);
                let s = a.support(u) + support_result_2d(&d, -u).unwrap();
                prop_assert!((s - 1.0).abs() <= 1e-9);
            }
            let v = intrinsic_volumes_2d(&BallBodyResult::Region(a)).v1 + intrinsic_volumes_2d(&d).v1;
            prop_assert!((v - PI).abs() <= 1e-9);
        }
    }

    #[test]
    fn volumes_invariant_under_rigid_motion(pts in generators(7), phi in 0.0..6.3f64, dx in -5.0..5.0f64, dy in -5.0..5.0f64, flip in any::<bool>()) {
        let moved: Vec<Point2> = pts
            .iter()
            .map(|p| {
                let q = if flip { Point2::new(p.x, -p.y) } else { *p };
                q.rotated(phi) + Point2::new(dx, dy)
            })
            .collect();
        let a = body(1.0, &pts);
        let b = body(1.0, &moved);
        let (va, vb) = (intrinsic_volumes_2d(&a), intrinsic_volumes_2d(&b));
        prop_assert!((va.v1 - vb.v1).abs() <= 1e-10 * va.v1.max(1.0));
        prop_assert!((va.v2 - vb.v2).abs() <= 1e-10 * va.v2.max(1.0));
        if let (BallBodyResult::Region(_), BallBodyResult::Region(_)) = (&a, &b) {
            prop_assert!(is_congruent(&a, &b, 1e-8));
        }
    }
}

