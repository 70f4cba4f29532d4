use super::directions::sphere_directions;
use super::solver::{subsets, Objective};
use super::{BoundingBox, NdBallBody};
use crate::error::{Error, Result};
use crate::geom::{dist_sq, SphereStratum};

/// Enumerated farthest-point queries get expensive past this many strata.
const MAX_STRATA: usize = 200_000;

/// `conv_r X`, the intersection of all radius-`r` balls containing `X`.
///
/// A point `p` belongs to it iff every point of `X^r` is within `r` of `p`,
/// so membership reduces to the farthest point of `X^r` from `p`. That point
/// is the farthest point of the sphere cut out by its active generators, so
/// it is found by scanning the precomputed sphere strata of generator
/// subsets and keeping the feasible candidates.
#[derive(Debug, Clone)]
pub struct NdBallHull {
    body: NdBallBody,
    strata: Vec<SphereStratum>,
    /// Points of `X^r` used to reject far-away queries quickly.
    probes: Vec<Vec<f64>>,
    bbox: Option<BoundingBox>,
}

impl NdBallHull {
    pub fn new(body: NdBallBody) -> Result<Self> {
        let dim = body.dim();
        let mut strata = Vec::new();
        let mut probes = Vec::new();
        let mut bbox = None;
        if let Some(c) = body.single_point() {
            let r = body.radius();
            probes.push(c.to_vec());
            bbox = Some(BoundingBox {
                lo: c.iter().map(|x| x - r).collect(),
                hi: c.iter().map(|x| x + r).collect(),
            });
        } else if body.bounding_box().is_some() {
            let balls = body.balls();
            let subs = subsets(body.len(), dim);
            if subs.len() > MAX_STRATA {
                return Err(Error::Domain(format!(
                    "ball hull of {} generators in dimension {dim} needs {} strata (limit {MAX_STRATA})",
                    body.len(),
                    subs.len()
                )));
            }
            strata = subs.iter().filter_map(|s| balls.stratum(s)).collect();
            let r = body.radius();
            let mut lo = vec![0.0; dim];
            let mut hi = vec![0.0; dim];
            let mut e = vec![0.0; dim];
            for k in 0..dim {
                e[k] = 1.0;
                let top = body.support_point(&e)?;
                lo[k] = top[k] - r;
                probes.push(top);
                e[k] = -1.0;
                let bottom = body.support_point(&e)?;
                hi[k] = r + bottom[k];
                probes.push(bottom);
                e[k] = 0.0;
            }
            for u in sphere_directions(dim, 4 * dim) {
                probes.push(body.support_point(&u)?);
            }
            bbox = Some(BoundingBox { lo, hi });
        }
        Ok(Self {
            body,
            strata,
            probes,
            bbox,
        })
    }

    /// The generating body `X^r`, which is also the dual of the hull.
    pub fn body(&self) -> &NdBallBody {
        &self.body
    }

    /// Tight box around the hull; `None` when it is empty.
    pub fn bounding_box(&self) -> Option<&BoundingBox> {
        self.bbox.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// Largest distance from `q` to a point of `X^r`.
    pub fn farthest_distance(&self, q: &[f64]) -> Option<f64> {
        if self.body.is_empty() {
            return None;
        }
        if let Some(c) = self.body.single_point() {
            return Some(dist_sq(c, q).sqrt());
        }
        let balls = self.body.balls();
        let obj = Objective::Farthest(q);
        let mut best: f64 = 0.0;
        for s in &self.strata {
            let p = obj.candidate(s);
            if balls.feasible(&p) {
                best = best.max(dist_sq(&p, q));
            }
        }
        Some(best.sqrt())
    }

    /// Membership in `conv_r X` with slack `tol_geom`.
    pub fn contains(&self, q: &[f64]) -> bool {
        if self.body.is_empty() {
            return false;
        }
        let r = self.body.radius() + self.body.tolerances().tol_geom;
        if self.probes.iter().any(|p| dist_sq(p, q) > r * r) {
            return false;
        }
        self.farthest_distance(q).is_some_and(|d| d <= r)
    }

    /// `h(u) = r - h_{X^r}(-u)`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        Ok(self.body.radius() - self.body.support(&neg)?)
    }
}
