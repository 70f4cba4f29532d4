use rand::Rng;
use rand_distr::StandardNormal;

use super::{GeneratorLaw, TrialSpec};

fn normal_vec(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn uniform_in_ball(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    let mut v = normal_vec(rng, dim);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let s = radius * rng.random::<f64>().powf(1.0 / dim as f64) / n;
    v.iter_mut().for_each(|x| *x *= s);
    v
}

/// Draws one generator set according to `spec` (count uniform in
/// `n_min..=n_max`).
pub fn sample_generators(spec: &TrialSpec, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = rng.random_range(spec.n_min..=spec.n_max);
    let dim = spec.dim;
    match spec.law {
        GeneratorLaw::UniformInDisk { radius } => (0..n).map(|_| uniform_in_ball(rng, dim, radius)).collect(),
        GeneratorLaw::Gaussian { sigma } => (0..n)
            .map(|_| normal_vec(rng, dim).into_iter().map(|x| x * sigma).collect())
            .collect(),
        GeneratorLaw::Clustered { radius, spread } => {
            let k = rng.random_range(1..=3usize);
            let centers: Vec<Vec<f64>> = (0..k).map(|_| uniform_in_ball(rng, dim, 0.5 * radius)).collect();
            (0..n)
                .map(|_| {
                    let c = &centers[rng.random_range(0..k)];
                    c.iter().map(|x| x + spread * rng.sample::<f64, _>(StandardNormal)).collect()
                })
                .collect()
        }
    }
}
