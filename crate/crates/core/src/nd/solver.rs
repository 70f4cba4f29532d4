//! Exact optimization over an intersection of congruent balls.
//!
//! Every optimum of a linear or distance objective over `X^r` lies on the
//! sphere cut out by its active generators, at the point of that sphere
//! that is best for the objective. Small active sets are therefore solved by
//! enumerating generator subsets, and the full problem by an active-set loop
//! that adds the most violated generator until none is violated.

use crate::error::{Error, Result};
use crate::geom::{dist_sq, dot, SphereStratum};

#[derive(Debug, Clone, Copy)]
pub(crate) enum Objective<'a> {
    /// Maximize `<p, u>`.
    Support(&'a [f64]),
    /// Minimize `|p - q|`.
    Nearest(&'a [f64]),
    /// Maximize `|p - q|`.
    Farthest(&'a [f64]),
}

impl Objective<'_> {
    /// Larger is better.
    fn score(&self, p: &[f64]) -> f64 {
        match *self {
            Objective::Support(u) => dot(p, u),
            Objective::Nearest(q) => -dist_sq(p, q),
            Objective::Farthest(q) => dist_sq(p, q),
        }
    }

    /// Best point of a stratum sphere.
    pub fn candidate(&self, s: &SphereStratum) -> Vec<f64> {
        match *self {
            Objective::Support(u) => s.extreme(u),
            Objective::Nearest(q) => {
                let v: Vec<f64> = q.iter().zip(s.center()).map(|(a, c)| a - c).collect();
                s.extreme(&v)
            }
            Objective::Farthest(q) => {
                let v: Vec<f64> = s.center().iter().zip(q).map(|(c, a)| c - a).collect();
                s.extreme(&v)
            }
        }
    }
}

/// Flat generator storage with the radius and the feasibility slack.
pub(crate) struct Balls<'a> {
    pub dim: usize,
    pub r: f64,
    pub gens: &'a [f64],
    pub slack: f64,
}

impl Balls<'_> {
    pub fn len(&self) -> usize {
        self.gens.len() / self.dim
    }

    pub fn gen(&self, i: usize) -> &[f64] {
        &self.gens[i * self.dim..(i + 1) * self.dim]
    }

    /// Index and amount of the largest violation `|p - x_i| - r`.
    pub fn worst(&self, p: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for i in 0..self.len() {
            let v = dist_sq(p, self.gen(i)).sqrt() - self.r;
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }

    pub fn feasible_in(&self, p: &[f64], set: &[usize]) -> bool {
        let lim = (self.r + self.slack) * (self.r + self.slack);
        set.iter().all(|&i| dist_sq(p, self.gen(i)) <= lim)
    }

    pub fn feasible(&self, p: &[f64]) -> bool {
        let lim = (self.r + self.slack) * (self.r + self.slack);
        (0..self.len()).all(|i| dist_sq(p, self.gen(i)) <= lim)
    }

    pub fn stratum(&self, subset: &[usize]) -> Option<SphereStratum> {
        let pts: Vec<&[f64]> = subset.iter().map(|&i| self.gen(i)).collect();
        SphereStratum::new(&pts, self.r)
    }

    /// Exact optimum over the balls indexed by `work`, by enumerating
    /// subsets of at most `dim` of them. Returns the point and its active
    /// subset.
    fn solve_small(&self, obj: Objective, work: &[usize]) -> Option<(Vec<f64>, Vec<usize>)> {
        let m = work.len();
        let mut best: Option<(f64, Vec<f64>, Vec<usize>)> = None;
        for mask in 1u32..(1u32 << m) {
            if mask.count_ones() as usize > self.dim {
                continue;
            }
            let subset: Vec<usize> = (0..m).filter(|b| mask & (1 << b) != 0).map(|b| work[b]).collect();
            let Some(s) = self.stratum(&subset) else { continue };
            let p = obj.candidate(&s);
            if !self.feasible_in(&p, work) {
                continue;
            }
            let sc = obj.score(&p);
            if best.as_ref().is_none_or(|b| sc > b.0) {
                best = Some((sc, p, subset));
            }
        }
        best.map(|(_, p, s)| (p, s))
    }

    /// Active-set solve of a convex objective (support or nearest point).
    pub fn solve(&self, obj: Objective, start: usize) -> Result<Vec<f64>> {
        let cap = 20 * self.len() + 200;
        let mut work = vec![start];
        for _ in 0..cap {
            let (p, active) = self.solve_small(obj, &work).ok_or_else(|| {
                Error::NoConvergence("no feasible point on the working set; body may be degenerate".into())
            })?;
            let (j, viol) = self.worst(&p);
            if viol <= self.slack {
                return Ok(p);
            }
            work = active;
            if work.contains(&j) {
                return Err(Error::NoConvergence(format!(
                    "active-set step repeated generator {j} (violation {viol:e})"
                )));
            }
            work.push(j);
        }
        Err(Error::NoConvergence(format!("active-set solve exceeded {cap} iterations")))
    }
}

/// All index subsets of `0..n` with between 1 and `max` elements.
pub(crate) fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..n {
            cur.push(i);
            out.push(cur.clone());
            if cur.len() < max {
                rec(i + 1, n, max, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, max, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(5, 3).len(), 5 + 10 + 10);
        assert_eq!(subsets(3, 8).len(), 7);
    }

    #[test]
    fn support_of_two_ball_body() {
        let gens = [-0.5, 0.0, 0.0, 0.5, 0.0, 0.0];
        let b = Balls {
            dim: 3,
            r: 1.0,
            gens: &gens,
            slack: 1e-12,
        };
        let p = b.solve(Objective::Support(&[1.0, 0.0, 0.0]), 0).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        let p = b.solve(Objective::Support(&[0.0, 0.0, 1.0]), 1).unwrap();
        assert!((p[2] - 0.75f64.sqrt()).abs() < 1e-15);
        let q = [2.0, 0.0, 0.0];
        let p = b.solve(Objective::Nearest(&q), 0).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && p[1].abs() < 1e-15);
    }
}
