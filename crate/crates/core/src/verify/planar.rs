use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::{equality_band, hash_points, run_trials, sample_generators, CheckReport, TrialRecord, TrialSpec, RESAMPLE_CAP};
use crate::ball2d::{
    ball_body_from_points, ball_hull_from_points, contains_2d, dual_result_2d, intrinsic_volumes_2d, lens_gap_for_area,
    make_lens, min_enclosing_circle, support_result_2d,
};
use crate::error::{domain, Result};
use crate::geom::{ball_intrinsic_volume, congruence_distance, hausdorff_distance, ArcPolygon, BallBodyResult, Point2, Tolerances};
use crate::nd::matching_ball;

/// Directions used by the planar support identity.
pub const SUPPORT_DIRECTIONS: usize = 720;
/// Probe points per trial for the union and order-reversal checks.
pub const IDENTITY_PROBES: usize = 1000;

/// Result of comparing one body against the bound of a check.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub values: Vec<f64>,
    pub slack: f64,
    pub near_equality: bool,
    pub congruent: Option<bool>,
    pub violated: bool,
}

impl InstanceOutcome {
    fn inequality(values: Vec<f64>, slack: f64, band: f64, tol: &Tolerances, congruent: impl FnOnce() -> bool) -> Self {
        let near_equality = slack <= band;
        let congruent = near_equality.then(congruent);
        Self {
            values,
            slack,
            near_equality,
            congruent,
            violated: slack < -tol.tol_check || congruent == Some(false),
        }
    }

    fn identity(values: Vec<f64>, residual: f64, limit: f64) -> Self {
        Self {
            values,
            slack: -residual,
            near_equality: false,
            congruent: None,
            violated: !(residual <= limit),
        }
    }

    fn into_record(self, trial: u64, input_hash: String, attempts: u32) -> TrialRecord {
        TrialRecord {
            trial,
            input_hash,
            values: self.values,
            slack: self.slack,
            violated: self.violated,
            near_equality: self.near_equality,
            congruent: self.congruent,
            attempts,
        }
    }
}

fn congruence_limit(tol: &Tolerances) -> f64 {
    10.0 * tol.tol_geom
}

fn disk(radius: f64) -> BallBodyResult {
    BallBodyResult::Region(ArcPolygon::disk(Point2::ORIGIN, radius).expect("positive radius"))
}

fn vk(b: &BallBodyResult, k: u32) -> Result<f64> {
    intrinsic_volumes_2d(b).get(k)
}

/// The comparison for one planar body `A`: `V_k(A^r) <= V_k(B^r)` with
/// `B` the origin-centered disk of the same area. Values are
/// `[V_2(A), V_k(A^r), V_k(B^r), rho]`.
pub fn bs_instance_2d(a: &BallBodyResult, r: f64, k: u32, tol: &Tolerances) -> Result<InstanceOutcome> {
    let area = vk(a, 2)?;
    if !(area > 0.0) {
        return domain("the body must have positive area");
    }
    let lhs = vk(&dual_result_2d(a, r, tol)?, k)?;
    let m = matching_ball(area, 2, r, tol)?;
    let rhs = m.dual_vk(k)?;
    let slack = rhs - lhs;
    let band = equality_band(tol, lhs.max(rhs));
    Ok(InstanceOutcome::inequality(vec![area, lhs, rhs, m.rho], slack, band, tol, || {
        congruence_distance(a, &disk(m.rho)) <= congruence_limit(tol)
    }))
}

/// Product comparison `V_k(A) V_k(A^r) <= V_k(B[o, r/2])^2`. Values are
/// `[V_k(A), V_k(A^r), product, bound]`.
pub fn product_instance_2d(a: &BallBodyResult, r: f64, k: u32, tol: &Tolerances) -> Result<InstanceOutcome> {
    let va = vk(a, k)?;
    let vd = vk(&dual_result_2d(a, r, tol)?, k)?;
    let product = va * vd;
    let bound = ball_intrinsic_volume(2, k, 0.5 * r)?.powi(2);
    let slack = bound - product;
    let band = equality_band(tol, bound);
    Ok(InstanceOutcome::inequality(vec![va, vd, product, bound], slack, band, tol, || {
        congruence_distance(a, &disk(0.5 * r)) <= congruence_limit(tol)
    }))
}

/// Lens comparison at fixed area `v`: `V_k(A^r) >= V_k(L^r)` with `L` the
/// lens of area `v`. Values are `[V_2(A), V_k(A^r), V_k(L^r)]`.
pub fn mahler_instance_2d(a: &BallBodyResult, r: f64, k: u32, v: f64, tol: &Tolerances) -> Result<InstanceOutcome> {
    let lens = BallBodyResult::Region(make_lens(r, lens_gap_for_area(r, v)?)?);
    let baseline = vk(&dual_result_2d(&lens, r, tol)?, k)?;
    let lhs = vk(&dual_result_2d(a, r, tol)?, k)?;
    let slack = lhs - baseline;
    let band = equality_band(tol, baseline);
    Ok(InstanceOutcome::inequality(vec![vk(a, 2)?, lhs, baseline], slack, band, tol, || {
        congruence_distance(a, &lens) <= congruence_limit(tol)
    }))
}

/// `x^k (r - x)^k` for `0 <= x <= r`.
pub fn product_profile(x: f64, k: u32, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(0.0..=r).contains(&x) {
        return domain(format!("profile argument {x} outside [0, {r}]"));
    }
    Ok((x * (r - x)).powi(k as i32))
}

/// Rescales `x` about its centroid so that `conv_r` of the result has area
/// `v`, returning the scaled generators and their ball hull.
///
/// `conv_r(c + l (X - c)) = c + l conv_(r/l)(X - c)` grows with `l`, so the
/// area is increasing in `l` and is found by bisection on `(0, r / R)`
/// where `R` is the enclosing radius of `X`.
pub fn target_area_2d(x: &[Point2], r: f64, v: f64, tol: &Tolerances) -> Option<(Vec<Point2>, BallBodyResult)> {
    if x.is_empty() || !(v > 0.0 && v < PI * r * r) {
        return None;
    }
    let n = x.len() as f64;
    let c = x.iter().fold(Point2::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
    let (_, mec) = min_enclosing_circle(x);
    if !(mec > tol.tol_merge) {
        return None;
    }
    let scaled = |l: f64| -> Vec<Point2> { x.iter().map(|p| c + (*p - c) * l).collect() };
    let area = |pts: &[Point2]| intrinsic_volumes_2d(&ball_hull_from_points(pts, r, tol)).v2;
    let (mut lo, mut hi) = (0.0, r / mec);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if area(&scaled(mid)) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = [lo, hi]
        .into_iter()
        .map(|l| {
            let pts = scaled(l);
            let a = area(&pts);
            ((a - v).abs(), pts)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))?;
    if best.0 > 1e-9 * v {
        return None;
    }
    let hull = ball_hull_from_points(&best.1, r, tol);
    Some((best.1, hull))
}

fn to_planar(g: &[Vec<f64>]) -> Vec<Point2> {
    g.iter().map(|p| Point2::new(p[0], p[1])).collect()
}

fn planar_hash(pts: &[Point2]) -> String {
    let flat: Vec<[f64; 2]> = pts.iter().map(|p| [p.x, p.y]).collect();
    hash_points(flat.iter().map(|p| &p[..]))
}

/// Draws inputs until `build` accepts one, up to the resample cap.
fn draw<T>(spec: &TrialSpec, trial: u64, mut build: impl FnMut(&mut ChaCha8Rng, Vec<Point2>) -> Option<T>) -> Option<(T, u32)> {
    let mut rng = spec.trial_rng(trial);
    for attempt in 1..=RESAMPLE_CAP {
        let pts = to_planar(&sample_generators(spec, &mut rng));
        if let Some(t) = build(&mut rng, pts) {
            return Some((t, attempt));
        }
    }
    None
}

fn require_planar(spec: &TrialSpec) -> Result<()> {
    spec.validate()?;
    if spec.dim != 2 {
        return domain(format!("planar check needs dim 2, got {}", spec.dim));
    }
    Ok(())
}

fn hull_region(pts: &[Point2], spec: &TrialSpec) -> Option<BallBodyResult> {
    let h = ball_hull_from_points(pts, spec.r, &spec.tolerances);
    matches!(h, BallBodyResult::Region(_)).then_some(h)
}

fn body_region(pts: &[Point2], spec: &TrialSpec) -> Option<BallBodyResult> {
    let b = ball_body_from_points(pts, spec.r, &spec.tolerances);
    matches!(b, BallBodyResult::Region(_)).then_some(b)
}

fn instance_check(
    spec: &TrialSpec,
    name: &str,
    value_names: &[&str],
    make_body: impl Fn(&[Point2], &TrialSpec) -> Option<BallBodyResult> + Sync,
    instance: impl Fn(&BallBodyResult) -> Result<InstanceOutcome> + Sync,
) -> Result<CheckReport> {
    let records = run_trials(spec, |trial| {
        let ((pts, body), attempts) = draw(spec, trial, |_, pts| make_body(&pts, spec).map(|b| (pts, b)))?;
        let outcome = instance(&body).ok()?;
        Some(outcome.into_record(trial, planar_hash(&pts), attempts))
    });
    Ok(CheckReport::from_records(name, spec.seed, value_names, records))
}

/// `V_k(A^r) <= V_k(B^r)` over random planar ball hulls `A = conv_r X`.
pub fn check_blaschke_santalo_2d(spec: &TrialSpec, k: u32) -> Result<CheckReport> {
    require_planar(spec)?;
    if !(1..=2).contains(&k) {
        return domain(format!("k must be 1 or 2 in the plane, got {k}"));
    }
    instance_check(
        spec,
        &format!("blaschke_santalo_k{k}"),
        &["area", "vk_dual", "vk_ball_dual", "rho"],
        hull_region,
        |a| bs_instance_2d(a, spec.r, k, &spec.tolerances),
    )
}

/// `V_k(A) V_k(A^r) <= V_k(B[o, r/2])^2` over random planar ball hulls.
pub fn check_product(spec: &TrialSpec, k: u32) -> Result<CheckReport> {
    require_planar(spec)?;
    if !(1..=2).contains(&k) {
        return domain(format!("k must be 1 or 2 in the plane, got {k}"));
    }
    instance_check(
        spec,
        &format!("product_k{k}"),
        &["vk", "vk_dual", "product", "bound"],
        hull_region,
        |a| product_instance_2d(a, spec.r, k, &spec.tolerances),
    )
}

/// `max_u |h_A(u) + h_{A^r}(-u) - r| <= tol_check` over 720 equispaced
/// directions, `A = conv_r X`. Values are `[max residual]`.
pub fn check_support_identity(spec: &TrialSpec) -> Result<CheckReport> {
    require_planar(spec)?;
    let (r, tol) = (spec.r, spec.tolerances);
    instance_check(spec, "support_identity", &["max_residual"], hull_region, |a| {
        let d = dual_result_2d(a, r, &tol)?;
        let mut worst: f64 = 0.0;
        for i in 0..SUPPORT_DIRECTIONS {
            let u = Point2::from_angle(2.0 * PI * i as f64 / SUPPORT_DIRECTIONS as f64);
            let s = support_result_2d(a, u).unwrap_or(f64::NAN) + support_result_2d(&d, -u).unwrap_or(f64::NAN);
            worst = worst.max((s - r).abs());
            if s.is_nan() {
                worst = f64::INFINITY;
            }
        }
        Ok(InstanceOutcome::identity(vec![worst], worst, tol.tol_check))
    })
}

/// `|V_1(A) + V_1(A^r) - pi r| <= tol_check` for random bodies `A = X^r`.
/// Values are `[V_1(A), V_1(A^r), residual]`.
pub fn check_v1_sum(spec: &TrialSpec) -> Result<CheckReport> {
    require_planar(spec)?;
    let (r, tol) = (spec.r, spec.tolerances);
    instance_check(spec, "v1_sum", &["v1", "v1_dual", "residual"], body_region, |a| {
        let v1 = vk(a, 1)?;
        let v1d = vk(&dual_result_2d(a, r, &tol)?, 1)?;
        let res = (v1 + v1d - PI * r).abs();
        Ok(InstanceOutcome::identity(vec![v1, v1d, res], res, tol.tol_check))
    })
}

fn probe_box(b: &BallBodyResult) -> Option<(Point2, Point2)> {
    let e = |x: f64, y: f64| support_result_2d(b, Point2::new(x, y));
    let (xmax, xmin) = (e(1.0, 0.0)?, -e(-1.0, 0.0)?);
    let (ymax, ymin) = (e(0.0, 1.0)?, -e(0.0, -1.0)?);
    let (mx, my) = (0.05 * (xmax - xmin), 0.05 * (ymax - ymin));
    Some((Point2::new(xmin - mx, ymin - my), Point2::new(xmax + mx, ymax + my)))
}

/// Per trial: triple-dual idempotence, the union identity and order
/// reversal on probe points, hull-dual agreement, and the emptiness
/// biconditional on a rescaled copy of `X` whose enclosing radius straddles
/// `r`. Values are `[triple_dual, hull_dual, union_mismatches,
/// order_mismatches, emptiness_mismatch]`.
pub fn check_identities(spec: &TrialSpec) -> Result<CheckReport> {
    require_planar(spec)?;
    let (r, tol) = (spec.r, spec.tolerances);
    let records = run_trials(spec, |trial| {
        let ((x, y, bx), attempts) = draw(spec, trial, |rng, x| {
            let bx = body_region(&x, spec)?;
            let y = to_planar(&sample_generators(spec, rng));
            Some((x, y, bx))
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.trial_mc_seed(trial));
        let once = dual_result_2d(&bx, r, &tol).ok()?;
        let twice = dual_result_2d(&once, r, &tol).ok()?;
        let thrice = dual_result_2d(&twice, r, &tol).ok()?;
        let triple = hausdorff_distance(&thrice, &once);
        let idem = hausdorff_distance(&twice, &bx);
        let hull = ball_hull_from_points(&x, r, &tol);
        let hull_dual = hausdorff_distance(&dual_result_2d(&hull, r, &tol).ok()?, &bx);

        let xy: Vec<Point2> = x.iter().chain(&y).copied().collect();
        let by = ball_body_from_points(&y, r, &tol);
        let bxy = ball_body_from_points(&xy, r, &tol);
        let (lo, hi) = probe_box(&bx)?;
        let mut union_bad = 0u32;
        let mut order_bad = 0u32;
        for _ in 0..IDENTITY_PROBES {
            let p = Point2::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
            let in_x = contains_2d(&bx, p, &tol);
            let in_xy = contains_2d(&bxy, p, &tol);
            if in_xy != (in_x && contains_2d(&by, p, &tol)) {
                union_bad += 1;
            }
            if in_xy && !in_x {
                order_bad += 1;
            }
        }

        // emptiness: rescale X about its enclosing center to radius r(1 +- delta)
        let (c, mec) = min_enclosing_circle(&x);
        let mut empty_bad = 0u32;
        if mec > tol.tol_merge {
            let delta = rng.random_range(0.01..0.1) * if trial % 2 == 0 { 1.0 } else { -1.0 };
            let s = r * (1.0 + delta) / mec;
            let xs: Vec<Point2> = x.iter().map(|p| c + (*p - c) * s).collect();
            let body_empty = ball_body_from_points(&xs, r, &tol).is_empty();
            let hull_empty = ball_hull_from_points(&xs, r, &tol).is_empty();
            if body_empty != hull_empty || body_empty != (delta > 0.0) {
                empty_bad = 1;
            }
        }

        let geom = triple.max(idem).max(hull_dual);
        let mismatches = union_bad + order_bad + empty_bad;
        let outcome = InstanceOutcome {
            values: vec![
                triple.max(idem),
                hull_dual,
                union_bad as f64,
                order_bad as f64,
                empty_bad as f64,
            ],
            slack: -geom - mismatches as f64,
            near_equality: false,
            congruent: None,
            violated: !(geom <= tol.tol_geom) || mismatches > 0,
        };
        Some(outcome.into_record(trial, planar_hash(&x), attempts))
    });
    Ok(CheckReport::from_records(
        "identities",
        spec.seed,
        &["triple_dual", "hull_dual", "union_mismatches", "order_mismatches", "emptiness_mismatch"],
        records,
    ))
}

/// `V_k(A^r) >= V_k(L^r)` for random ball hulls rescaled to area `v`, with
/// `L` the lens of that area. Inputs whose area cannot be matched are
/// redrawn.
pub fn check_mahler_2d(spec: &TrialSpec, k: u32, v: f64) -> Result<CheckReport> {
    require_planar(spec)?;
    if !(1..=2).contains(&k) {
        return domain(format!("k must be 1 or 2 in the plane, got {k}"));
    }
    let full = PI * spec.r * spec.r;
    if !(v > 0.0 && v < full) {
        return domain(format!("target area must lie in (0, {full}), got {v}"));
    }
    let (r, tol) = (spec.r, spec.tolerances);
    let records = run_trials(spec, |trial| {
        let ((pts, a), attempts) = draw(spec, trial, |_, pts| target_area_2d(&pts, r, v, &tol))?;
        let outcome = mahler_instance_2d(&a, r, k, v, &tol).ok()?;
        Some(outcome.into_record(trial, planar_hash(&pts), attempts))
    });
    Ok(CheckReport::from_records(
        &format!("mahler2d_k{k}"),
        spec.seed,
        &["area", "vk_dual", "lens_vk_dual"],
        records,
    ))
}
