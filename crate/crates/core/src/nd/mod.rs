//! r-ball bodies in dimensions 2 to 8.
//!
//! Membership, support values, nearest points and farthest points are exact
//! up to rounding (see the active-set solver in `solver`); volumes and other
//! intrinsic volumes are estimated by seeded Monte Carlo or low-discrepancy
//! direction sums.

mod directions;
mod estimate;
mod hull;
mod linalg;
pub(crate) mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geom::{dist_sq, min_enclosing_ball, Point, PointSet, Tolerances};
use solver::{Balls, Objective};

pub use directions::sphere_directions;
pub use estimate::{
    estimate_v1_nd, estimate_vd_nd, matching_ball, steiner_vk_nd, MatchingBall, NdDual, VkEstimate, VkMethod,
    MC_CHUNK,
};
pub use hull::NdBallHull;

/// Axis-aligned box `[lo_k, hi_k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l).max(0.0)).product()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| *x >= *l && *x <= *h)
    }

    /// The box grown by `t` on every side.
    pub fn inflated(&self, t: f64) -> Self {
        Self {
            lo: self.lo.iter().map(|l| l - t).collect(),
            hi: self.hi.iter().map(|h| h + t).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Empty,
    Point(Vec<f64>),
    Solid(BoundingBox),
}

/// `X^r` for a finite generator set in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NdBallBody {
    dim: usize,
    r: f64,
    gens: Vec<f64>,
    tol: Tolerances,
    mec_center: Vec<f64>,
    mec_radius: f64,
    shape: Shape,
}

impl NdBallBody {
    /// Nonempty iff the smallest enclosing ball of the generators has radius
    /// at most `r + tol_geom`; within `tol_geom` of `r` the body is the
    /// enclosing ball's center.
    pub fn new(x: &PointSet, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let dim = x.dim();
        let gens: Vec<f64> = x.points().iter().flat_map(|p| p.coords().iter().copied()).collect();
        Ok(Self::from_flat(dim, x.radius(), gens, *tol))
    }

    pub(crate) fn from_flat(dim: usize, r: f64, gens: Vec<f64>, tol: Tolerances) -> Self {
        let refs: Vec<&[f64]> = gens.chunks_exact(dim).collect();
        let (mec_center, mec_radius) = min_enclosing_ball(&refs);
        let mut body = Self {
            dim,
            r,
            gens,
            tol,
            mec_center: mec_center.clone(),
            mec_radius,
            shape: Shape::Empty,
        };
        body.shape = if mec_radius > r + tol.tol_geom {
            Shape::Empty
        } else if mec_radius >= r - tol.tol_geom {
            Shape::Point(mec_center)
        } else {
            let mut lo = vec![0.0; dim];
            let mut hi = vec![0.0; dim];
            let mut e = vec![0.0; dim];
            for k in 0..dim {
                e[k] = 1.0;
                hi[k] = body.support_unchecked(&e).expect("solid body");
                e[k] = -1.0;
                lo[k] = -body.support_unchecked(&e).expect("solid body");
                e[k] = 0.0;
            }
            Shape::Solid(BoundingBox { lo, hi })
        };
        body
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn len(&self) -> usize {
        self.gens.len() / self.dim
    }

    pub fn generator(&self, i: usize) -> &[f64] {
        &self.gens[i * self.dim..(i + 1) * self.dim]
    }

    pub fn generators(&self) -> impl Iterator<Item = &[f64]> {
        self.gens.chunks_exact(self.dim)
    }

    pub fn is_empty(&self) -> bool {
        self.shape == Shape::Empty
    }

    /// `Some(c)` when the body degenerates to the single point `c`.
    pub fn single_point(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Point(c) => Some(c),
            _ => None,
        }
    }

    /// Radius of the smallest ball enclosing the generators.
    pub fn enclosing_radius(&self) -> f64 {
        self.mec_radius
    }

    pub fn enclosing_center(&self) -> &[f64] {
        &self.mec_center
    }

    /// Tight axis-aligned box around a body with interior.
    pub fn bounding_box(&self) -> Option<&BoundingBox> {
        match &self.shape {
            Shape::Solid(b) => Some(b),
            _ => None,
        }
    }

    pub(crate) fn balls(&self) -> Balls<'_> {
        Balls {
            dim: self.dim,
            r: self.r,
            gens: &self.gens,
            slack: 1e-12 * self.r.max(1.0),
        }
    }

    /// Membership with slack `tol_geom`.
    pub fn contains(&self, p: &[f64]) -> bool {
        let lim = (self.r + self.tol.tol_geom).powi(2);
        self.generators().all(|x| dist_sq(p, x) <= lim)
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return domain(format!("expected dimension {}, got {}", self.dim, v.len()));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return domain("coordinates must be finite");
        }
        Ok(())
    }

    fn support_unchecked(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(&self.support_point_unchecked(u)?, u))
    }

    fn support_point_unchecked(&self, u: &[f64]) -> Result<Vec<f64>> {
        let start = (0..self.len())
            .min_by(|&a, &b| dot(self.generator(a), u).total_cmp(&dot(self.generator(b), u)))
            .expect("nonempty generator set");
        self.balls().solve(Objective::Support(u), start)
    }

    /// A point of the body maximizing `<p, u>`.
    pub fn support_point(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(u)?;
        match &self.shape {
            Shape::Empty => Err(Error::Infeasible("support of an empty r-ball body".into())),
            Shape::Point(c) => Ok(c.clone()),
            Shape::Solid(_) => self.support_point_unchecked(u),
        }
    }

    /// `h(u) = max <p, u>` over the body.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(&self.support_point(u)?, u))
    }

    /// Nearest point of the body to `q` and the distance to it.
    pub fn nearest_point(&self, q: &[f64]) -> Result<(Vec<f64>, f64)> {
        self.check_dim(q)?;
        match &self.shape {
            Shape::Empty => Err(Error::Infeasible("projection onto an empty r-ball body".into())),
            Shape::Point(c) => Ok((c.clone(), dist_sq(c, q).sqrt())),
            Shape::Solid(_) => {
                let balls = self.balls();
                let (j, viol) = balls.worst(q);
                if viol <= 0.0 {
                    return Ok((q.to_vec(), 0.0));
                }
                let p = balls.solve(Objective::Nearest(q), j)?;
                let d = dist_sq(&p, q).sqrt();
                Ok((p, d))
            }
        }
    }

    /// Distance from `q` to the body (zero inside).
    pub fn distance(&self, q: &[f64]) -> Result<f64> {
        Ok(self.nearest_point(q)?.1)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    crate::geom::dot(a, b)
}

/// Membership of `p` in the body, with slack `tol_geom`.
pub fn membership_nd(body: &NdBallBody, p: &Point) -> Result<bool> {
    body.check_dim(p.coords())?;
    Ok(body.contains(p.coords()))
}

/// Support value `max <p, u>` over the body.
///
/// The value is exact up to rounding: the optimum is located by an
/// active-set iteration whose subproblems are solved in closed form, and the
/// returned point is certified feasible to within `tol` (or to within
/// `1e-12 r`, whichever is smaller). An empty body is an error, and so is a
/// direction that is not of unit length within `tol_geom`.
pub fn support_nd(body: &NdBallBody, u: &[f64], tol: f64) -> Result<f64> {
    body.check_dim(u)?;
    if !(tol > 0.0) {
        return domain("support tolerance must be positive");
    }
    let n = dot(u, u).sqrt();
    if !(n > 0.0) {
        return domain("support direction must be nonzero");
    }
    if (n - 1.0).abs() > body.tol.tol_geom {
        return domain(format!("support direction must have unit length, got {n}"));
    }
    let p = body.support_point(u)?;
    if let Shape::Solid(_) = body.shape {
        let (_, viol) = body.balls().worst(&p);
        if viol > tol.max(body.tol.tol_geom) {
            return Err(Error::NoConvergence(format!("support point violates a ball by {viol:e}")));
        }
    }
    Ok(dot(&p, u))
}
