//! Deterministic quadrature of `V_3(conv_r X)`, `V_3(X^r)` and `V_1(X^r)`
//! for the three-dimensional search.

use std::f64::consts::PI;

use crate::geom::quadrature::gauss_legendre;
use crate::geom::Tolerances;
use crate::nd::{NdBallBody, NdBallHull};

/// Product rule on the unit sphere: Gauss–Legendre in `cos(theta)` times
/// the trapezoid rule in `phi`. Weights sum to `4 pi`.
#[derive(Debug, Clone)]
pub(crate) struct SphereRule {
    dirs: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(polar: usize) -> Self {
        let (z, wz) = gauss_legendre(polar);
        let azimuth = 2 * polar;
        let dphi = 2.0 * PI / azimuth as f64;
        let mut dirs = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        for (zi, wi) in z.iter().zip(&wz) {
            let s = (1.0 - zi * zi).max(0.0).sqrt();
            for j in 0..azimuth {
                let phi = (j as f64 + 0.5) * dphi;
                dirs.push([s * phi.cos(), s * phi.sin(), *zi]);
                weights.push(wi * dphi);
            }
        }
        Self { dirs, weights }
    }

    fn integrate(&self, mut f: impl FnMut(&[f64; 3]) -> Option<f64>) -> Option<f64> {
        let mut sum = 0.0;
        for (u, w) in self.dirs.iter().zip(&self.weights) {
            sum += w * f(u)?;
        }
        Some(sum)
    }
}

const BISECTION_STEPS: usize = 42;

fn ray(c: &[f64], u: &[f64; 3], s: f64) -> [f64; 3] {
    [c[0] + s * u[0], c[1] + s * u[1], c[2] + s * u[2]]
}

/// Volume of `conv_r X` by the radial formula `V = (1/3) int rho^3` about
/// the enclosing center, locating the boundary on each ray by bisection on
/// the farthest-point membership test.
pub(crate) fn hull_volume(hull: &NdBallHull, rule: &SphereRule) -> Option<f64> {
    let body = hull.body();
    let r = body.radius();
    if body.single_point().is_some() {
        return Some(4.0 / 3.0 * PI * r.powi(3));
    }
    body.bounding_box()?;
    let c = body.enclosing_center();
    let v = rule.integrate(|u| {
        let (mut lo, mut hi) = (0.0, 2.0 * r);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if hull.farthest_distance(&ray(c, u, mid))? <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((0.5 * (lo + hi)).powi(3))
    })?;
    Some(v / 3.0)
}

/// Volume of `X^r` from its exact radial function about the enclosing
/// center (the first exit from the generator balls).
pub(crate) fn body_volume(body: &NdBallBody, rule: &SphereRule) -> Option<f64> {
    body.bounding_box()?;
    let c = body.enclosing_center();
    let r = body.radius();
    let v = rule.integrate(|u| {
        let mut rho = f64::INFINITY;
        for x in body.generators() {
            let d = [c[0] - x[0], c[1] - x[1], c[2] - x[2]];
            let b = u[0] * d[0] + u[1] * d[1] + u[2] * d[2];
            let q = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] - r * r;
            rho = rho.min(-b + (b * b - q).max(0.0).sqrt());
        }
        Some(rho.powi(3))
    })?;
    Some(v / 3.0)
}

/// `V_1(X^r) = (1/pi) int h(u) du` in three dimensions.
pub(crate) fn body_v1(body: &NdBallBody, rule: &SphereRule) -> Option<f64> {
    body.bounding_box()?;
    let s = rule.integrate(|u| body.support(u).ok())?;
    Some(s / PI)
}

/// `(V_k(X^r), V_3(conv_r X))` for `k` in `{1, 3}`; `None` when the hull is
/// empty. A single-point `X^r` gives the full ball and a zero dual.
pub(crate) fn evaluate(points: &[Vec<f64>], r: f64, k: u32, rule: &SphereRule, tol: &Tolerances) -> Option<(f64, f64)> {
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let body = NdBallBody::from_flat(3, r, flat, *tol);
    if body.is_empty() {
        return None;
    }
    if body.single_point().is_some() {
        return Some((0.0, 4.0 / 3.0 * PI * r.powi(3)));
    }
    let vk = if k == 3 { body_volume(&body, rule)? } else { body_v1(&body, rule)? };
    let hull = NdBallHull::new(body).ok()?;
    Some((vk, hull_volume(&hull, rule)?))
}

/// Hull volume only, for the homothety projection.
pub(crate) fn volume(points: &[Vec<f64>], r: f64, rule: &SphereRule, tol: &Tolerances) -> Option<f64> {
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let body = NdBallBody::from_flat(3, r, flat, *tol);
    if body.is_empty() {
        return None;
    }
    hull_volume(&NdBallHull::new(body).ok()?, rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(p: &[[f64; 3]]) -> Vec<Vec<f64>> {
        p.iter().map(|q| q.to_vec()).collect()
    }

    #[test]
    fn rule_integrates_polynomials() {
        let rule = SphereRule::new(8);
        let area = rule.integrate(|_| Some(1.0)).unwrap();
        assert!((area - 4.0 * PI).abs() < 1e-12);
        let z2 = rule.integrate(|u| Some(u[2] * u[2])).unwrap();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
        let x2y2 = rule.integrate(|u| Some(u[0] * u[0] * u[1] * u[1])).unwrap();
        assert!((x2y2 - 4.0 * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn ball_values() {
        let rule = SphereRule::new(6);
        let t = Tolerances::default();
        let (v3, _) = evaluate(&pts(&[[0.0; 3], [1e-3, 0.0, 0.0]]), 1.0, 3, &rule, &t).unwrap();
        // two nearly coincident generators: X^r is nearly the unit ball
        assert!((v3 - 4.0 * PI / 3.0).abs() < 1e-2);
        let (v1, _) = evaluate(&pts(&[[0.0; 3], [1e-9, 0.0, 0.0]]), 1.0, 1, &rule, &t).unwrap();
        assert!((v1 - 4.0).abs() < 1e-6);
    }

    #[test]
    fn two_generator_volumes_match_closed_forms() {
        // spindle of vertex gap 1 and the two-ball lens of center gap 1
        let spindle = PI * (11.0 / 12.0 - 3f64.sqrt() * PI / 6.0);
        let lens = 5.0 * PI / 12.0;
        let rule = SphereRule::new(24);
        let (v3, hull) = evaluate(&pts(&[[-0.5, 0.0, 0.0], [0.5, 0.0, 0.0]]), 1.0, 3, &rule, &Tolerances::default()).unwrap();
        assert!((v3 - lens).abs() < 5e-3 * lens, "{v3} vs {lens}");
        assert!((hull - spindle).abs() < 5e-3 * spindle, "{hull} vs {spindle}");
    }

    #[test]
    fn empty_hull_is_none() {
        let rule = SphereRule::new(4);
        assert!(evaluate(&pts(&[[-1.1, 0.0, 0.0], [1.1, 0.0, 0.0]]), 1.0, 3, &rule, &Tolerances::default()).is_none());
    }
}
