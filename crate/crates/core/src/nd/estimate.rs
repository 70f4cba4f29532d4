use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::directions::sphere_directions;
use super::linalg::least_squares;
use super::{BoundingBox, NdBallBody, NdBallHull};
use crate::error::{domain, Error, Result};
use crate::geom::{ball_intrinsic_volume, dist_sq, omega, omega_unchecked, Tolerances};

/// Samples per Monte Carlo chunk. Each chunk draws from its own stream of
/// the seeded generator, so estimates do not depend on the thread count.
pub const MC_CHUNK: u64 = 8192;

const MAX_STEINER_COND: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VkMethod {
    #[serde(rename = "exact2d")]
    Exact2d,
    #[serde(rename = "monte_carlo")]
    MonteCarlo,
    #[serde(rename = "mean_width")]
    MeanWidth,
    #[serde(rename = "steiner_fit")]
    SteinerFit,
}

/// An intrinsic-volume value with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VkEstimate {
    pub k: u32,
    pub value: f64,
    /// Zero for exact values.
    pub std_error: f64,
    pub method: VkMethod,
    /// Monte Carlo samples or directions used; 0 for exact values.
    pub samples: u64,
    pub seed: u64,
}

impl VkEstimate {
    pub fn exact(k: u32, value: f64) -> Self {
        Self {
            k,
            value,
            std_error: 0.0,
            method: VkMethod::Exact2d,
            samples: 0,
            seed: 0,
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn n_chunks(n: u64) -> u64 {
    n.div_ceil(MC_CHUNK)
}

fn chunk_len(n: u64, c: u64) -> u64 {
    MC_CHUNK.min(n - c * MC_CHUNK)
}

fn sample_box(rng: &mut ChaCha8Rng, bbox: &BoundingBox, out: &mut [f64]) {
    for (k, x) in out.iter_mut().enumerate() {
        let u: f64 = rng.random();
        *x = bbox.lo[k] + (bbox.hi[k] - bbox.lo[k]) * u;
    }
}

/// Number of uniform samples from `bbox` accepted by `inside`.
pub(crate) fn hit_or_miss(bbox: &BoundingBox, n: u64, seed: u64, inside: impl Fn(&[f64]) -> bool + Sync) -> u64 {
    let dim = bbox.lo.len();
    (0..n_chunks(n))
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut p = vec![0.0; dim];
            let mut hits = 0u64;
            for _ in 0..chunk_len(n, c) {
                sample_box(&mut rng, bbox, &mut p);
                if inside(&p) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

fn hit_or_miss_estimate(k: u32, bbox: &BoundingBox, n: u64, seed: u64, hits: u64) -> VkEstimate {
    let vol = bbox.volume();
    let p = hits as f64 / n as f64;
    VkEstimate {
        k,
        value: vol * p,
        std_error: vol * (p * (1.0 - p) / n as f64).sqrt(),
        method: VkMethod::MonteCarlo,
        samples: n,
        seed,
    }
}

fn zero_estimate(k: u32, method: VkMethod, samples: u64, seed: u64) -> VkEstimate {
    VkEstimate {
        k,
        value: 0.0,
        std_error: 0.0,
        method,
        samples,
        seed,
    }
}

fn check_samples(n: u64) -> Result<()> {
    if n < 1000 {
        return domain(format!("Monte Carlo needs at least 1000 samples, got {n}"));
    }
    Ok(())
}

/// Hit-or-miss estimate of the volume `V_d` over the body's bounding box.
/// Empty and single-point bodies have volume exactly 0.
pub fn estimate_vd_nd(body: &NdBallBody, n_samples: u64, seed: u64) -> Result<VkEstimate> {
    check_samples(n_samples)?;
    let k = body.dim() as u32;
    let Some(bbox) = body.bounding_box() else {
        return Ok(zero_estimate(k, VkMethod::MonteCarlo, n_samples, seed));
    };
    let hits = hit_or_miss(bbox, n_samples, seed, |p| body.contains(p));
    Ok(hit_or_miss_estimate(k, bbox, n_samples, seed, hits))
}

impl NdBallHull {
    /// Hit-or-miss estimate of the volume of `conv_r X`.
    pub fn estimate_volume(&self, n_samples: u64, seed: u64) -> Result<VkEstimate> {
        check_samples(n_samples)?;
        let k = self.body().dim() as u32;
        let Some(bbox) = self.bounding_box() else {
            return Ok(zero_estimate(k, VkMethod::MonteCarlo, n_samples, seed));
        };
        let hits = hit_or_miss(bbox, n_samples, seed, |p| self.contains(p));
        Ok(hit_or_miss_estimate(k, bbox, n_samples, seed, hits))
    }

    /// `V_1` of `conv_r X` from its mean width.
    pub fn estimate_v1(&self, n_directions: usize) -> Result<VkEstimate> {
        let dim = self.body().dim();
        if self.is_empty() {
            return Ok(zero_estimate(1, VkMethod::MeanWidth, n_directions as u64, 0));
        }
        let (w, se) = mean_width_from(dim, n_directions, |u| self.support(u))?;
        let c = v1_coefficient(dim);
        Ok(VkEstimate {
            k: 1,
            value: c * w,
            std_error: c * se,
            method: VkMethod::MeanWidth,
            samples: n_directions as u64,
            seed: 0,
        })
    }
}

/// `V_1 = coefficient * mean width`, the coefficient being
/// `d omega_d / (2 omega_(d-1))`.
fn v1_coefficient(dim: usize) -> f64 {
    let d = dim as u32;
    dim as f64 * omega_unchecked(d) / (2.0 * omega_unchecked(d - 1))
}

/// Mean of `h(u) + h(-u)` over quasi-uniform directions, with the standard
/// error of that mean.
pub(crate) fn mean_width_from(
    dim: usize,
    n_directions: usize,
    support: impl Fn(&[f64]) -> Result<f64> + Sync,
) -> Result<(f64, f64)> {
    if n_directions < 2 {
        return domain("mean width needs at least two directions");
    }
    let dirs = sphere_directions(dim, n_directions);
    let widths: Vec<f64> = dirs
        .par_iter()
        .map(|u| {
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            Ok(support(u)? + support(&neg)?)
        })
        .collect::<Result<_>>()?;
    let n = widths.len() as f64;
    let mean = widths.iter().sum::<f64>() / n;
    let var = widths.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// `V_1` from the mean width over `n_directions` low-discrepancy directions.
///
/// Support values are exact; `tol` is the feasibility tolerance each support
/// point is certified against. The standard error is the direction-sample
/// standard error of the mean width, scaled by the same coefficient.
pub fn estimate_v1_nd(body: &NdBallBody, n_directions: usize, tol: f64) -> Result<VkEstimate> {
    let dim = body.dim();
    if body.is_empty() || body.single_point().is_some() {
        return Ok(zero_estimate(1, VkMethod::MeanWidth, n_directions as u64, 0));
    }
    let (w, se) = mean_width_from(dim, n_directions, |u| super::support_nd(body, u, tol))?;
    let c = v1_coefficient(dim);
    Ok(VkEstimate {
        k: 1,
        value: c * w,
        std_error: c * se,
        method: VkMethod::MeanWidth,
        samples: n_directions as u64,
        seed: 0,
    })
}

/// `V_k` from a least-squares fit of the Steiner polynomial
/// `vol(A + tB) = sum_j omega_(d-j) V_j(A) t^(d-j)` to Monte Carlo volumes of
/// the parallel bodies at the radii in `t_grid`.
///
/// The same samples serve every radius: a sample counts for `t` when its
/// distance to the body (from the exact projection) is at most `t`. `V_0` is
/// fixed at 1, so `V_1..V_d` are fitted; the standard error is propagated
/// from the multinomial covariance of the nested counts.
pub fn steiner_vk_nd(body: &NdBallBody, k: u32, t_grid: &[f64], n_samples: u64, seed: u64) -> Result<VkEstimate> {
    let dim = body.dim();
    let d = dim as u32;
    if k < 1 || k > d {
        return domain(format!("intrinsic volume index k={k} outside 1..={d}"));
    }
    check_samples(n_samples)?;
    if t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return domain("Steiner radii must be positive and finite");
    }
    let mut ts = t_grid.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if ts.len() < dim + 1 {
        return domain(format!("Steiner fit in dimension {dim} needs at least {} distinct radii", dim + 1));
    }
    let Some(bbox) = body.bounding_box() else {
        return Ok(zero_estimate(k, VkMethod::SteinerFit, n_samples, seed));
    };
    let t_max = *ts.last().expect("nonempty grid");
    let outer = bbox.inflated(t_max);
    let counts: Vec<u64> = (0..n_chunks(n_samples))
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = chunk_rng(seed, c);
            let mut p = vec![0.0; dim];
            let mut cnt = vec![0u64; ts.len()];
            for _ in 0..chunk_len(n_samples, c) {
                sample_box(&mut rng, &outer, &mut p);
                let lower = body
                    .generators()
                    .map(|x| dist_sq(&p, x).sqrt() - body.radius())
                    .fold(f64::NEG_INFINITY, f64::max);
                if lower > t_max {
                    continue;
                }
                let dist = if lower <= 0.0 { 0.0 } else { body.distance(&p)? };
                for (j, t) in ts.iter().enumerate() {
                    if dist <= *t {
                        cnt[j] += 1;
                    }
                }
            }
            Ok(cnt)
        })
        .try_reduce(
            || vec![0u64; ts.len()],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let vol = outer.volume();
    let n = n_samples as f64;
    let probs: Vec<f64> = counts.iter().map(|c| *c as f64 / n).collect();
    let y: Vec<f64> = ts
        .iter()
        .zip(&probs)
        .map(|(t, p)| vol * p - omega_unchecked(d) * t.powi(dim as i32))
        .collect();
    let design: Vec<Vec<f64>> = ts
        .iter()
        .map(|t| (1..=d).map(|j| omega_unchecked(d - j) * t.powi((d - j) as i32)).collect())
        .collect();
    let m = ts.len();
    let mut cov_y = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            // the events are nested, so P(both) is the smaller probability
            let both = probs[a.min(b)];
            cov_y[a][b] = vol * vol * (both - probs[a] * probs[b]) / n;
        }
    }
    let (beta, cov) = least_squares(&design, &y, &cov_y, MAX_STEINER_COND).map_err(|cond| {
        Error::IllConditioned(format!(
            "Steiner design has condition number {cond:.3e}; use a wider or better spread t grid"
        ))
    })?;
    let idx = (k - 1) as usize;
    Ok(VkEstimate {
        k,
        value: beta[idx],
        std_error: cov[idx][idx].max(0.0).sqrt(),
        method: VkMethod::SteinerFit,
        samples: n_samples,
        seed,
    })
}

/// Dual `B^r` of a ball `B[o, rho]`: a concentric ball, the center, or
/// nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NdDual {
    Empty,
    Point,
    Ball { radius: f64 },
}

/// The origin-centered ball with a given volume, and its dual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingBall {
    pub dim: u32,
    pub rho: f64,
    pub dual: NdDual,
}

impl MatchingBall {
    /// `V_k` of the matching ball itself.
    pub fn vk(&self, k: u32) -> Result<f64> {
        ball_intrinsic_volume(self.dim, k, self.rho)
    }

    /// `V_k(B^r)`; zero for a point or empty dual.
    pub fn dual_vk(&self, k: u32) -> Result<f64> {
        match self.dual {
            NdDual::Ball { radius } => ball_intrinsic_volume(self.dim, k, radius),
            _ => ball_intrinsic_volume(self.dim, k, 0.0),
        }
    }
}

/// `B[o, rho]` with `omega_d rho^d = body_volume`, together with `B^r`.
pub fn matching_ball(body_volume: f64, d: u32, r: f64, tol: &Tolerances) -> Result<MatchingBall> {
    if !(body_volume > 0.0) || !body_volume.is_finite() {
        return domain("matching ball needs a positive finite volume");
    }
    if !(r > 0.0) || !r.is_finite() {
        return domain("radius r must be positive and finite");
    }
    let rho = (body_volume / omega(d)?).powf(1.0 / d as f64);
    let dual = if rho > r + tol.tol_geom {
        NdDual::Empty
    } else if (rho - r).abs() <= tol.tol_geom {
        NdDual::Point
    } else {
        NdDual::Ball { radius: r - rho }
    };
    Ok(MatchingBall { dim: d, rho, dual })
}
