use serde::{Deserialize, Serialize};

/// Simplex coefficients and stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadParams {
    /// Edge length of the initial simplex, in units of `r`.
    pub initial_scale: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once the spread of simplex values is below `ftol` and every
    /// vertex is within `xtol` of the best one (max norm).
    pub ftol: f64,
    pub xtol: f64,
}

impl Default for NelderMeadParams {
    fn default() -> Self {
        Self {
            initial_scale: 0.1,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            ftol: 1e-13,
            xtol: 1e-9,
        }
    }
}

impl NelderMeadParams {
    pub fn is_valid(&self) -> bool {
        self.initial_scale > 0.0
            && self.reflection > 0.0
            && self.expansion > 1.0
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.ftol >= 0.0
            && self.xtol >= 0.0
    }
}

pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

fn axpy(a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    // a + t (a - b)
    a.iter().zip(b).map(|(x, y)| x + t * (x - y)).collect()
}

/// Nelder–Mead from `x0` with at most `max_evals` evaluations of `f`.
pub(crate) fn nelder_mead(f: &impl Fn(&[f64]) -> f64, x0: &[f64], scale: f64, p: &NelderMeadParams, max_evals: usize) -> Minimum {
    let n = x0.len();
    let evals = std::cell::Cell::new(0);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale;
        let fx = eval(&x);
        simplex.push((x, fx));
    }
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if evals.get() >= max_evals || (worst - best <= p.ftol && size <= p.xtol) {
            break;
        }
        let mut c = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            c.iter_mut().zip(x).for_each(|(ci, xi)| *ci += xi / n as f64);
        }
        let xr = axpy(&c, p.reflection, &simplex[n].0);
        let fr = eval(&xr);
        if fr < best {
            let xe = axpy(&c, p.reflection * p.expansion, &simplex[n].0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        // contraction: outside when the reflection improved on the worst
        let (xc, fc) = if fr < worst {
            let xc = axpy(&c, p.reflection * p.contraction, &simplex[n].0);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = axpy(&c, -p.contraction, &simplex[n].0);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x0 = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = x0.iter().zip(&v.0).map(|(a, b)| a + p.shrink * (b - a)).collect();
            let fx = eval(&x);
            *v = (x, fx);
        }
    }
    let (x, fx) = simplex.swap_remove(0);
    Minimum { x, fx, evals: evals.get() }
}
