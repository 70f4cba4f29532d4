//! Derivative-free minimization of `V_k(A^r)` over ball hulls
//! `A = conv_r X` of `n` generators at fixed volume `V_d(A) = v`.
//!
//! Each restart draws a random generator set, rescales it onto the
//! constraint, and runs Nelder–Mead on the quadratic-penalty objective
//! through a geometric schedule of penalty weights. After every stage the
//! stage optimum is projected exactly onto `V_d(A) = v` by a homothety of
//! the generators, and the best projected configuration is kept. Restarts
//! run in parallel and are collected in index order, so the result depends
//! only on the configuration.
//!
//! In the plane every value is exact. In three dimensions volumes and mean
//! widths come from a fixed spherical quadrature, so the search there is
//! exploratory.

mod nelder_mead;
mod spatial;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball2d::{
    ball_body_from_points, ball_hull_from_points, dual_result_2d, intrinsic_volumes_2d, lens_gap_for_area, make_lens,
};
use crate::error::{domain, Error, Result};
use crate::geom::{ball_intrinsic_volume, normalize_pose, omega, ArcPolygon, BallBodyResult, Point, Point2, PointSet, Tolerances};
use crate::verify::target_area_2d;
use spatial::SphereRule;

pub use nelder_mead::NelderMeadParams;

/// Penalty weights `initial * factor^s` for stages `s = 0..stages`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltySchedule {
    pub initial: f64,
    pub factor: f64,
    pub stages: u32,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self {
            initial: 10.0,
            factor: 10.0,
            stages: 5,
        }
    }
}

impl PenaltySchedule {
    pub fn weight(&self, stage: u32) -> f64 {
        self.initial * self.factor.powi(stage as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub r: f64,
    pub k: u32,
    pub target_volume: f64,
    /// Restart `i` uses `n_min + i mod (n_max - n_min + 1)` generators.
    pub n_min: usize,
    pub n_max: usize,
    pub restarts: u32,
    /// Objective evaluations per restart, split evenly over the stages.
    pub max_evals: usize,
    pub seed: u64,
    pub simplex: NelderMeadParams,
    pub penalty: PenaltySchedule,
    /// Polar nodes of the spherical quadrature (3D only); the azimuthal
    /// count is twice this.
    pub quadrature: usize,
    pub tolerances: Tolerances,
}

impl SearchConfig {
    /// Planar search with 2 to 6 generators and 20 restarts.
    pub fn planar(r: f64, k: u32, target_volume: f64) -> Self {
        Self {
            dim: 2,
            r,
            k,
            target_volume,
            n_min: 2,
            n_max: 6,
            restarts: 20,
            max_evals: 4000,
            seed: 0,
            simplex: NelderMeadParams::default(),
            penalty: PenaltySchedule::default(),
            quadrature: 12,
            tolerances: Tolerances::default(),
        }
    }

    /// Exploratory search in three dimensions with 2 to 6 generators.
    pub fn spatial(r: f64, k: u32, target_volume: f64) -> Self {
        Self {
            dim: 3,
            restarts: 5,
            max_evals: 500,
            ..Self::planar(r, k, target_volume)
        }
    }

    /// `omega_d r^d`, the volume of `B[o, r]`.
    pub fn full_volume(&self) -> f64 {
        omega(self.dim as u32).unwrap_or(f64::NAN) * self.r.powi(self.dim as i32)
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if !(2..=3).contains(&self.dim) {
            return domain(format!("search runs in dimension 2 or 3, got {}", self.dim));
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return domain("radius r must be positive and finite");
        }
        let ks: &[u32] = if self.dim == 2 { &[1, 2] } else { &[1, 3] };
        if !ks.contains(&self.k) {
            return domain(format!("k must be one of {ks:?} in dimension {}, got {}", self.dim, self.k));
        }
        let full = self.full_volume();
        if !(self.target_volume > 0.0 && self.target_volume < full) {
            return domain(format!("target volume must lie in (0, {full}), got {}", self.target_volume));
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return domain(format!(
                "generator counts {}..={} invalid: at least two generators are needed for positive volume",
                self.n_min, self.n_max
            ));
        }
        if self.restarts == 0 || self.max_evals < 10 {
            return domain("need at least one restart and ten evaluations");
        }
        if !self.simplex.is_valid() {
            return domain("invalid simplex coefficients");
        }
        let p = &self.penalty;
        if !(p.initial > 0.0 && p.factor >= 1.0 && p.stages >= 1) || !p.weight(p.stages - 1).is_finite() {
            return domain("invalid penalty schedule");
        }
        if self.dim == 3 && self.quadrature < 2 {
            return domain("quadrature needs at least two polar nodes");
        }
        Ok(())
    }

    fn generators_for(&self, restart: u32) -> usize {
        self.n_min + restart as usize % (self.n_max - self.n_min + 1)
    }
}

/// Number of free coordinates for `n` generators: the first sits at the
/// origin, the second on the first axis, and in 3D the third in the first
/// coordinate plane.
pub fn param_len(dim: usize, n: usize) -> usize {
    match (dim, n) {
        (_, 0) => 0,
        (_, 1) => 0,
        (2, n) => 2 * n - 3,
        (_, 2) => 1,
        (d, n) => 3 + d * (n - 3),
    }
}

/// Generators encoded by `g` (see [`param_len`]).
pub fn generators_from_params(dim: usize, g: &[f64]) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; dim]];
    if g.is_empty() {
        return pts;
    }
    let mut p1 = vec![0.0; dim];
    p1[0] = g[0];
    pts.push(p1);
    let mut rest = &g[1..];
    if dim == 3 && rest.len() >= 2 {
        pts.push(vec![rest[0], rest[1], 0.0]);
        rest = &rest[2..];
    }
    pts.extend(rest.chunks_exact(dim).map(|c| c.to_vec()));
    pts
}

/// Inverse of [`generators_from_params`] up to a rigid motion: moves the
/// first point to the origin and rotates the next ones onto the
/// coordinate flags.
pub fn params_from_generators(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points[0].len();
    let o = &points[0];
    let rel: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(o).map(|(a, b)| a - b).collect()).collect();
    // orthonormal frame from the relative points, completed by unit vectors
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let candidates = rel.iter().skip(1).cloned().chain((0..dim).map(|i| {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        e
    }));
    for mut v in candidates {
        if frame.len() == dim {
            break;
        }
        for f in &frame {
            let d: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(f).for_each(|(a, b)| *a -= d * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            frame.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    let coords = |p: &[f64]| -> Vec<f64> { frame.iter().map(|f| f.iter().zip(p).map(|(a, b)| a * b).sum()).collect() };
    let mut g = Vec::with_capacity(param_len(dim, points.len()));
    for (i, p) in rel.iter().enumerate().skip(1) {
        let c = coords(p);
        match (dim, i) {
            (_, 1) => g.push(c[0]),
            (3, 2) => g.extend_from_slice(&c[..2]),
            _ => g.extend(c),
        }
    }
    g
}

/// `(V_k(X^r), V_d(conv_r X))`, or `None` for an empty hull.
fn evaluate(config: &SearchConfig, points: &[Vec<f64>], rule: Option<&SphereRule>) -> Option<(f64, f64)> {
    let (r, tol) = (config.r, &config.tolerances);
    if config.dim == 2 {
        let pts: Vec<Point2> = points.iter().map(|p| Point2::new(p[0], p[1])).collect();
        let body = ball_body_from_points(&pts, r, tol);
        if body.is_empty() {
            return None;
        }
        let hull = ball_hull_from_points(&pts, r, tol);
        let vk = intrinsic_volumes_2d(&body).get(config.k).ok()?;
        Some((vk, intrinsic_volumes_2d(&hull).v2))
    } else {
        spatial::evaluate(points, r, config.k, rule?, tol)
    }
}

fn sentinel(config: &SearchConfig, weight: f64) -> f64 {
    let full = config.full_volume();
    let top = ball_intrinsic_volume(config.dim as u32, config.k, config.r).unwrap_or(f64::MAX / 4.0);
    2.0 * top + weight * config.target_volume.max(full - config.target_volume).powi(2)
}

fn penalized(config: &SearchConfig, points: &[Vec<f64>], weight: f64, rule: Option<&SphereRule>) -> f64 {
    match evaluate(config, points, rule) {
        Some((vk, vol)) => vk + weight * (vol - config.target_volume).powi(2),
        None => sentinel(config, weight),
    }
}

/// `V_k(A^r) + weight (V_d(A) - v)^2` for `A = conv_r` of the generators
/// encoded by `g`; an empty hull scores `2 V_k(B[o, r]) + weight D^2`
/// with `D` the larger of `v` and `omega_d r^d - v`.
pub fn objective(config: &SearchConfig, g: &[f64], weight: f64) -> Result<f64> {
    config.validate()?;
    if count(config.dim, g.len()).is_none() {
        return domain(format!("{} coordinates do not encode a generator set in dimension {}", g.len(), config.dim));
    }
    let rule = (config.dim == 3).then(|| SphereRule::new(config.quadrature));
    Ok(penalized(config, &generators_from_params(config.dim, g), weight, rule.as_ref()))
}

fn count(dim: usize, len: usize) -> Option<usize> {
    (2..=64).find(|&n| param_len(dim, n) == len)
}

/// Rescales `points` about their centroid onto `V_d(conv_r X) = v`.
fn project(config: &SearchConfig, points: &[Vec<f64>], rule: Option<&SphereRule>) -> Option<Vec<Vec<f64>>> {
    let v = config.target_volume;
    if config.dim == 2 {
        let pts: Vec<Point2> = points.iter().map(|p| Point2::new(p[0], p[1])).collect();
        let (scaled, _) = target_area_2d(&pts, config.r, v, &config.tolerances)?;
        return Some(scaled.iter().map(|p| vec![p.x, p.y]).collect());
    }
    let rule = rule?;
    let dim = config.dim;
    let n = points.len() as f64;
    let c: Vec<f64> = (0..dim).map(|i| points.iter().map(|p| p[i]).sum::<f64>() / n).collect();
    let refs: Vec<&[f64]> = points.iter().map(|p| &p[..]).collect();
    let (_, mec) = crate::geom::min_enclosing_ball(&refs);
    if !(mec > config.tolerances.tol_merge) {
        return None;
    }
    let scaled = |l: f64| -> Vec<Vec<f64>> {
        points.iter().map(|p| p.iter().zip(&c).map(|(x, ci)| ci + l * (x - ci)).collect()).collect()
    };
    let vol = |l: f64| spatial::volume(&scaled(l), config.r, rule, &config.tolerances);
    let (mut lo, mut hi) = (0.0, config.r / mec * (1.0 - 1e-12));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if vol(mid)? < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let l = if (vol(lo)? - v).abs() <= (vol(hi)? - v).abs() { lo } else { hi };
    Some(scaled(l))
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub restart: u32,
    pub generators: usize,
    /// `V_k(A^r)` of the best projected configuration; `None` when no
    /// configuration could be put on the constraint.
    pub objective: Option<f64>,
    /// Best projected objective after each stage, as a running minimum.
    pub trace: Vec<f64>,
    pub evaluations: usize,
    #[serde(skip)]
    points: Vec<Vec<f64>>,
    #[serde(skip)]
    volume: f64,
}

fn run_restart(config: &SearchConfig, restart: u32) -> RestartOutcome {
    let rule = (config.dim == 3).then(|| SphereRule::new(config.quadrature));
    let rule = rule.as_ref();
    let n = config.generators_for(restart);
    let dim = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut outcome = RestartOutcome {
        restart,
        generators: n,
        objective: None,
        trace: Vec::new(),
        evaluations: 0,
        points: Vec::new(),
        volume: f64::NAN,
    };

    let mut start = None;
    for _ in 0..20 {
        let raw: Vec<Vec<f64>> = (0..n).map(|_| random_in_ball(&mut rng, dim, 0.4 * config.r)).collect();
        if let Some(p) = project(config, &raw, rule) {
            start = Some(p);
            break;
        }
    }
    let Some(start) = start else {
        return outcome;
    };
    let mut x = params_from_generators(&start);
    let stages = config.penalty.stages;
    let budget = (config.max_evals / stages as usize).max(2);
    let mut best: Option<(f64, Vec<Vec<f64>>, f64)> = None;
    let consider = |pts: Vec<Vec<f64>>, best: &mut Option<(f64, Vec<Vec<f64>>, f64)>| {
        if let Some(p) = project(config, &pts, rule) {
            if let Some((vk, vol)) = evaluate(config, &p, rule) {
                if best.as_ref().is_none_or(|b| vk < b.0) {
                    *best = Some((vk, p, vol));
                }
            }
        }
    };
    consider(start, &mut best);
    for stage in 0..stages {
        let w = config.penalty.weight(stage);
        let f = |g: &[f64]| penalized(config, &generators_from_params(dim, g), w, rule);
        let scale = config.simplex.initial_scale * config.r * 0.5f64.powi(stage as i32);
        let mut used = 0;
        let mut current = f(&x);
        used += 1;
        // restart the simplex from its optimum while the stage budget lasts
        while used < budget {
            let m = nelder_mead::nelder_mead(&f, &x, scale, &config.simplex, budget - used);
            used += m.evals;
            let improved = m.fx < current - config.simplex.ftol;
            if m.fx <= current {
                x = m.x;
                current = m.fx;
            }
            if !improved {
                break;
            }
        }
        outcome.evaluations += used;
        consider(generators_from_params(dim, &x), &mut best);
        if let Some(b) = &best {
            outcome.trace.push(b.0);
        }
    }
    if let Some((vk, pts, vol)) = best {
        outcome.objective = Some(vk);
        outcome.points = pts;
        outcome.volume = vol;
    }
    outcome
}

fn random_in_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-radius..radius)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
            return p;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_generators: PointSet,
    /// `V_k(A^r)` at the best feasible configuration.
    pub best_objective: f64,
    /// `V_d(A)` at that configuration.
    pub volume: f64,
    /// `|V_d(A) - v|`.
    pub constraint_residual: f64,
    /// The lens value in the plane; in 3D the two-generator configuration
    /// of the same volume, evaluated by the same quadrature.
    pub baseline: f64,
    /// `best_objective - baseline`.
    pub gap: f64,
    pub best_restart: u32,
    pub restarts: Vec<RestartOutcome>,
    /// Pose-normalized `A` (plane only).
    pub normalized_shape: Option<ArcPolygon>,
    /// True in 3D, where no optimum is known.
    pub exploratory: bool,
}

impl SearchResult {
    /// Best objective sequence of every restart.
    pub fn traces(&self) -> Vec<Vec<f64>> {
        self.restarts.iter().map(|r| r.trace.clone()).collect()
    }

    /// The best body `A = conv_r X` (plane only).
    pub fn best_hull_2d(&self) -> Option<BallBodyResult> {
        if self.config.dim != 2 {
            return None;
        }
        let pts = self.best_generators.points_2d().ok()?;
        Some(ball_hull_from_points(&pts, self.config.r, &self.config.tolerances))
    }
}

/// `V_k(L^r)` for the lens `L` of area `v`.
pub fn lens_baseline(r: f64, v: f64, k: u32) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return domain(format!("k must be 1 or 2, got {k}"));
    }
    let lens = BallBodyResult::Region(make_lens(r, lens_gap_for_area(r, v)?)?);
    intrinsic_volumes_2d(&dual_result_2d(&lens, r, &Tolerances::default())?).get(k)
}

/// `V_k(X^r)` for the two-generator configuration whose spindle
/// `conv_r X` has volume `v`, using the search quadrature.
pub fn two_generator_baseline_3d(config: &SearchConfig) -> Result<f64> {
    if config.dim != 3 {
        return domain("the two-generator baseline is for dimension 3");
    }
    config.validate()?;
    let rule = SphereRule::new(config.quadrature);
    let pts = vec![vec![-0.25 * config.r, 0.0, 0.0], vec![0.25 * config.r, 0.0, 0.0]];
    let p = project(config, &pts, Some(&rule)).ok_or_else(|| Error::Infeasible("cannot reach the target volume".into()))?;
    evaluate(config, &p, Some(&rule))
        .map(|(vk, _)| vk)
        .ok_or_else(|| Error::Infeasible("empty two-generator hull".into()))
}

/// Multi-restart penalized Nelder–Mead with terminal projection.
pub fn minimize(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts).into_par_iter().map(|i| run_restart(config, i)).collect();
    let best = outcomes
        .iter()
        .filter_map(|o| o.objective.map(|v| (v, o)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.restart.cmp(&b.1.restart)))
        .map(|(_, o)| o)
        .ok_or_else(|| Error::Infeasible("every restart failed to reach the volume constraint".into()))?;
    let points: Vec<Point> = best.points.iter().map(|p| Point::new(p.clone())).collect::<Result<_>>()?;
    let best_generators = PointSet::new(config.dim, config.r, points, config.tolerances.tol_merge)?;
    let baseline = if config.dim == 2 {
        lens_baseline(config.r, config.target_volume, config.k)?
    } else {
        two_generator_baseline_3d(config)?
    };
    let objective = best.objective.expect("filtered");
    let normalized_shape = if config.dim == 2 {
        let pts: Vec<Point2> = best.points.iter().map(|p| Point2::new(p[0], p[1])).collect();
        normalize_pose(&ball_hull_from_points(&pts, config.r, &config.tolerances)).ok()
    } else {
        None
    };
    Ok(SearchResult {
        config: *config,
        best_generators,
        best_objective: objective,
        volume: best.volume,
        constraint_residual: (best.volume - config.target_volume).abs(),
        baseline,
        gap: objective - baseline,
        best_restart: best.restart,
        restarts: outcomes.clone(),
        normalized_shape,
        exploratory: config.dim == 3,
    })
}

#[cfg(test)]
mod tests;
