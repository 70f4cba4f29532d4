use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{equality_band, hash_points, run_trials, sample_generators, CheckReport, TrialRecord, TrialSpec, RESAMPLE_CAP};
use crate::error::{domain, Result};
use crate::geom::{Point, PointSet};
use crate::nd::{estimate_v1_nd, estimate_vd_nd, matching_ball, sphere_directions, NdBallBody, NdBallHull, VkEstimate};

/// Sampling effort and thresholds of the Monte Carlo checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdCheckParams {
    /// Hit-or-miss samples per volume estimate.
    pub mc_samples: u64,
    /// Directions per mean-width estimate.
    pub directions: usize,
    /// A trial is violated when its slack is below `-sigmas` combined
    /// standard errors.
    pub sigmas: f64,
    /// Boundary points used to approximate the dual in the support check.
    pub boundary_samples: usize,
    /// Directions tested in the support check.
    pub test_directions: usize,
    /// Accepted residual of the approximate support check.
    pub support_tol: f64,
}

impl Default for NdCheckParams {
    fn default() -> Self {
        Self {
            mc_samples: 20_000,
            directions: 2_000,
            sigmas: 3.0,
            boundary_samples: 10_000,
            test_directions: 100,
            support_tol: 0.02,
        }
    }
}

fn draw_body(spec: &TrialSpec, trial: u64) -> Option<(NdBallBody, String, u32)> {
    let mut rng = spec.trial_rng(trial);
    for attempt in 1..=RESAMPLE_CAP {
        let raw = sample_generators(spec, &mut rng);
        let hash = hash_points(raw.iter().map(|p| &p[..]));
        let points: Vec<Point> = raw.into_iter().filter_map(|c| Point::new(c).ok()).collect();
        let Ok(x) = PointSet::new(spec.dim, spec.r, points, spec.tolerances.tol_merge) else {
            continue;
        };
        let Ok(body) = NdBallBody::new(&x, &spec.tolerances) else {
            continue;
        };
        if body.bounding_box().is_some() {
            return Some((body, hash, attempt));
        }
    }
    None
}

/// The comparison `V_k(A^r) <= V_k(B^r)` for random `A = conv_r X`
/// in dimension `d`, with `k = 1` (mean width) or `k = d` (Monte Carlo).
///
/// `V_d(A)` is estimated by hit-or-miss in the hull; its error is carried
/// through the matching radius into the bound. A trial is violated when the
/// slack falls below `-sigmas` combined standard errors (plus `tol_check`).
/// Values are `[V_d(A), se, V_k(A^r), se, V_k(B^r), se, rho]`.
pub fn check_blaschke_santalo_nd(spec: &TrialSpec, k: u32, params: &NdCheckParams) -> Result<CheckReport> {
    spec.validate()?;
    let d = spec.dim as u32;
    if k != 1 && k != d {
        return domain(format!("k must be 1 or {d}, got {k}"));
    }
    let (r, tol) = (spec.r, spec.tolerances);
    let records = run_trials(spec, |trial| {
        let (body, hash, attempts) = draw_body(spec, trial)?;
        let seed = spec.trial_mc_seed(trial);
        let hull = NdBallHull::new(body.clone()).ok()?;
        let vol = hull.estimate_volume(params.mc_samples, seed).ok()?;
        if !(vol.value > 0.0) {
            return None;
        }
        let lhs: VkEstimate = if k == d {
            estimate_vd_nd(&body, params.mc_samples, seed ^ 0x9e37_79b9_7f4a_7c15).ok()?
        } else {
            estimate_v1_nd(&body, params.directions, tol.tol_geom).ok()?
        };
        let m = matching_ball(vol.value, d, r, &tol).ok()?;
        let rhs = m.dual_vk(k).ok()?;
        // d rho / d V = rho / (d V); V_k(B[o, r - rho]) is homogeneous of degree k
        let se_rho = m.rho / (d as f64 * vol.value) * vol.std_error;
        let gap = r - m.rho;
        let se_rhs = if gap > 0.0 { k as f64 * rhs / gap * se_rho } else { 0.0 };
        let sigma = lhs.std_error.hypot(se_rhs);
        let slack = rhs - lhs.value;
        let band = equality_band(&tol, rhs.max(lhs.value)).max(params.sigmas * sigma);
        Some(TrialRecord {
            trial,
            input_hash: hash,
            values: vec![vol.value, vol.std_error, lhs.value, lhs.std_error, rhs, se_rhs, m.rho],
            slack,
            violated: slack < -(params.sigmas * sigma + tol.tol_check),
            near_equality: slack <= band,
            congruent: None,
            attempts,
        })
    });
    Ok(CheckReport::from_records(
        &format!("blaschke_santalo_nd_d{d}_k{k}"),
        spec.seed,
        &["volume", "volume_se", "vk_dual", "vk_dual_se", "vk_ball_dual", "vk_ball_dual_se", "rho"],
        records,
    ))
}

/// `max_u |h_A(u) + h_{S^r}(-u) - r|` for `A = X^r`, where `S` holds the
/// support points of `A` in `m` quasi-uniform directions. `S^r` is the dual
/// of `conv_r S`, which approximates `A^r` from outside, so the residual
/// shrinks as `m` grows. The `n_dirs` test directions are drawn from `seed`.
pub fn support_residual_nd(body: &NdBallBody, m: usize, n_dirs: usize, seed: u64) -> Result<f64> {
    if body.bounding_box().is_none() {
        return domain("the body must have interior");
    }
    if m == 0 || n_dirs == 0 {
        return domain("sample and direction counts must be positive");
    }
    let dim = body.dim();
    let mut flat = Vec::with_capacity(m * dim);
    for u in sphere_directions(dim, m) {
        flat.extend(body.support_point(&u)?);
    }
    let approx = NdBallBody::from_flat(dim, body.radius(), flat, *body.tolerances());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n_dirs {
        let mut u: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= n);
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let s = body.support(&u)? + approx.support(&neg)?;
        worst = worst.max((s - body.radius()).abs());
    }
    Ok(worst)
}

/// Approximate support identity for random bodies `A = X^r` in dimension
/// `d`; see [`support_residual_nd`]. Values are `[max residual]`.
pub fn check_support_identity_nd(spec: &TrialSpec, params: &NdCheckParams) -> Result<CheckReport> {
    spec.validate()?;
    let records = run_trials(spec, |trial| {
        let (body, hash, attempts) = draw_body(spec, trial)?;
        let seed = spec.trial_mc_seed(trial);
        let res = support_residual_nd(&body, params.boundary_samples, params.test_directions, seed).ok()?;
        Some(TrialRecord {
            trial,
            input_hash: hash,
            values: vec![res],
            slack: -res,
            violated: !(res <= params.support_tol),
            near_equality: false,
            congruent: None,
            attempts,
        })
    });
    Ok(CheckReport::from_records(
        &format!("support_identity_nd_d{}", spec.dim),
        spec.seed,
        &["max_residual"],
        records,
    ))
}

