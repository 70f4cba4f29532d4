use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::affine::Stratum;

const SHUFFLE_SEED: u64 = 0x05EE_D0F_BA11;

/// Smallest ball containing all `points`, returned as `(center, radius)`.
///
/// Welzl's algorithm on a fixed pseudo-random permutation, so the result is
/// deterministic. Expected linear time for fixed dimension.
pub fn min_enclosing_ball(points: &[&[f64]]) -> (Vec<f64>, f64) {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let dim = points[0].len();
    let mut order: Vec<&[f64]> = points.to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let mut support: Vec<&[f64]> = Vec::with_capacity(dim + 1);
    let ball = welzl(&order, order.len(), &mut support, dim);
    (ball.center, ball.radius)
}

struct Sphere {
    center: Vec<f64>,
    radius: f64,
}

impl Sphere {
    fn contains(&self, p: &[f64]) -> bool {
        if self.radius < 0.0 {
            return false;
        }
        super::dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-300
    }
}

fn sphere_through(support: &[&[f64]], dim: usize) -> Sphere {
    if support.is_empty() {
        return Sphere {
            center: vec![0.0; dim],
            radius: -1.0,
        };
    }
    let s = Stratum::through_lenient(support);
    // the circumradius is recomputed from the points, which is more accurate
    // than sqrt(circ_sq) when the support is nearly degenerate
    let radius = support
        .iter()
        .map(|p| super::dist(&s.center, p))
        .fold(0.0, f64::max);
    Sphere {
        center: s.center,
        radius,
    }
}

fn welzl<'a>(pts: &[&'a [f64]], n: usize, support: &mut Vec<&'a [f64]>, dim: usize) -> Sphere {
    let mut ball = sphere_through(support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..n {
        if !ball.contains(pts[i]) {
            support.push(pts[i]);
            ball = welzl(pts, i, support, dim);
            support.pop();
        }
    }
    ball
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute_force_radius_2d(pts: &[[f64; 2]]) -> f64 {
        // exhaustive over pairs and triples
        let mut best = f64::INFINITY;
        let fits = |c: [f64; 2], r: f64| {
            pts.iter()
                .all(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt() <= r * (1.0 + 1e-9) + 1e-12)
        };
        for i in 0..pts.len() {
            for j in i..pts.len() {
                let c = [(pts[i][0] + pts[j][0]) / 2.0, (pts[i][1] + pts[j][1]) / 2.0];
                let r = ((pts[i][0] - c[0]).powi(2) + (pts[i][1] - c[1]).powi(2)).sqrt();
                if fits(c, r) {
                    best = best.min(r);
                }
                for k in j + 1..pts.len() {
                    let sub: [&[f64]; 3] = [&pts[i], &pts[j], &pts[k]];
                    if let Some(s) = Stratum::through(&sub) {
                        let c = [s.center[0], s.center[1]];
                        let r = s.circ_sq.sqrt();
                        if fits(c, r) {
                            best = best.min(r);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_in_the_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(1..12);
            let pts: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let refs: Vec<&[f64]> = pts.iter().map(|p| &p[..]).collect();
            let (_, r) = min_enclosing_ball(&refs);
            let want = brute_force_radius_2d(&pts);
            assert!((r - want).abs() < 1e-9, "{r} vs {want}");
        }
    }

    #[test]
    fn contains_all_points_in_higher_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in 3..=6 {
            let pts: Vec<Vec<f64>> = (0..40)
                .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let refs: Vec<&[f64]> = pts.iter().map(|p| &p[..]).collect();
            let (c, r) = min_enclosing_ball(&refs);
            for p in &pts {
                assert!(crate::geom::dist(&c, p) <= r + 1e-12);
            }
            // at least two points on the boundary
            let on = pts.iter().filter(|p| (crate::geom::dist(&c, p) - r).abs() < 1e-9).count();
            assert!(on >= 2);
        }
    }

    #[test]
    fn single_point_has_zero_radius() {
        let p: &[f64] = &[0.3, -0.2];
        let (c, r) = min_enclosing_ball(&[p]);
        assert_eq!(r, 0.0);
        assert_eq!(c, vec![0.3, -0.2]);
    }
}
