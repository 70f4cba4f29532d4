//! Deterministic quasi-uniform directions on the unit sphere.

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    out
}

/// `n` unit vectors in dimension `dim` (at most 16): Halton points pushed
/// through the Box-Muller transform and normalized.
pub fn sphere_directions(dim: usize, n: usize) -> Vec<Vec<f64>> {
    assert!((1..=PRIMES.len()).contains(&dim), "direction dimension out of range");
    let pairs = dim.div_ceil(2);
    (1..=n as u64)
        .map(|i| {
            let mut v = Vec::with_capacity(2 * pairs);
            for j in 0..pairs {
                let a = radical_inverse(i, PRIMES[2 * j]);
                let b = radical_inverse(i, PRIMES[(2 * j + 1) % PRIMES.len()]);
                let rad = (-2.0 * a.ln()).sqrt();
                let th = std::f64::consts::TAU * b;
                v.push(rad * th.cos());
                v.push(rad * th.sin());
            }
            v.truncate(dim);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            v
        })
        .collect()
}
