//! Circumspheres of small point subsets and the spheres cut out by
//! intersecting radius-`r` spheres about them.

/// Circumscribed sphere of an affinely independent point subset, taken
/// within the subset's affine hull.
#[derive(Debug, Clone)]
pub(crate) struct Stratum {
    pub center: Vec<f64>,
    pub circ_sq: f64,
    /// Orthonormal basis of the direction space of the affine hull.
    pub basis: Vec<Vec<f64>>,
}

impl Stratum {
    /// `None` when the points are affinely dependent.
    pub fn through(points: &[&[f64]]) -> Option<Self> {
        Self::build(points, false)
    }

    /// Like [`Stratum::through`], but points lying in the span of their
    /// predecessors are skipped instead of failing.
    pub fn through_lenient(points: &[&[f64]]) -> Self {
        Self::build(points, true).expect("lenient stratum always exists")
    }

    fn build(points: &[&[f64]], lenient: bool) -> Option<Self> {
        let x0 = points.first()?;
        let dim = x0.len();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(points.len().saturating_sub(1));
        let mut alpha: Vec<f64> = Vec::with_capacity(basis.capacity());
        for x in &points[1..] {
            let diff: Vec<f64> = x.iter().zip(x0.iter()).map(|(a, b)| a - b).collect();
            let scale = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut w = diff.clone();
            let mut lower = Vec::with_capacity(basis.len());
            for e in &basis {
                let c = super::dot(&diff, e);
                lower.push(c);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
            // re-orthogonalize once for stability
            for e in &basis {
                let c = super::dot(&w, e);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
                if lenient {
                    continue;
                }
                return None;
            }
            w.iter_mut().for_each(|v| *v /= norm);
            let rhs = 0.5 * scale * scale;
            let acc: f64 = lower.iter().zip(&alpha).map(|(l, a)| l * a).sum();
            alpha.push((rhs - acc) / norm);
            basis.push(w);
        }
        let mut center = x0.to_vec();
        for (e, a) in basis.iter().zip(&alpha) {
            for (ci, ei) in center.iter_mut().zip(e) {
                *ci += a * ei;
            }
        }
        let circ_sq = alpha.iter().map(|a| a * a).sum();
        debug_assert_eq!(center.len(), dim);
        Some(Self {
            center,
            circ_sq,
            basis,
        })
    }

    /// Removes from `v` its component in the affine hull's direction space.
    pub fn project_out(&self, v: &mut [f64]) {
        for e in &self.basis {
            let c = super::dot(v, e);
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= c * ei;
            }
        }
    }
}

/// The set of points at distance exactly `r` from every point of a subset:
/// a sphere of radius `radius` about `center`, lying in the orthogonal
/// complement of the subset's direction space.
#[derive(Debug, Clone)]
pub(crate) struct SphereStratum {
    pub stratum: Stratum,
    pub radius: f64,
}

impl SphereStratum {
    pub fn new(points: &[&[f64]], r: f64) -> Option<Self> {
        let stratum = Stratum::through(points)?;
        let gap = r * r - stratum.circ_sq;
        if gap < -1e-12 * r * r {
            return None;
        }
        Some(Self {
            radius: gap.max(0.0).sqrt(),
            stratum,
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.stratum.center
    }

    /// Dimension of the ambient space minus the subset's affine dimension.
    #[cfg(test)]
    pub fn codim(&self) -> usize {
        self.stratum.center.len() - self.stratum.basis.len()
    }

    /// Unit vector in the complement pointing along `v`, or an arbitrary
    /// complement direction when `v` has no component there.
    pub fn complement_direction(&self, v: &[f64]) -> Vec<f64> {
        let mut w = v.to_vec();
        self.stratum.project_out(&mut w);
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-14 * vn.max(1e-300) {
            w.iter_mut().for_each(|x| *x /= n);
            return w;
        }
        let dim = v.len();
        let mut best = vec![0.0; dim];
        let mut best_norm = -1.0;
        for axis in 0..dim {
            let mut e = vec![0.0; dim];
            e[axis] = 1.0;
            self.stratum.project_out(&mut e);
            let en = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            if en > best_norm {
                best_norm = en;
                best = e;
            }
        }
        best.iter_mut().for_each(|x| *x /= best_norm);
        best
    }

    /// Point of the sphere maximizing `<p, v>`.
    pub fn extreme(&self, v: &[f64]) -> Vec<f64> {
        let dir = self.complement_direction(v);
        self.center()
            .iter()
            .zip(&dir)
            .map(|(c, d)| c + self.radius * d)
            .collect()
    }
}
