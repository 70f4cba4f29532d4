use crate::error::{domain, Result};

/// Volume of the `d`-dimensional unit ball, `pi^(d/2) / Gamma(1 + d/2)`.
///
/// The Gamma factor is evaluated through its closed form at integer and
/// half-integer arguments, so the result is exact up to the final rounding of
/// a short product.
pub fn omega(d: u32) -> Result<f64> {
    if d == 0 {
        return domain("omega is defined for d >= 1");
    }
    Ok(omega_unchecked(d))
}

/// `omega` extended by `omega(0) = 1`.
pub(crate) fn omega_unchecked(d: u32) -> f64 {
    use std::f64::consts::PI;
    let m = d / 2;
    if d % 2 == 0 {
        // pi^m / m!
        (1..=m).fold(1.0, |acc, j| acc * PI / j as f64)
    } else {
        // 2^(m+1) pi^m / (2m+1)!!
        (1..=m).fold(2.0, |acc, j| acc * 2.0 * PI / (2 * j + 1) as f64)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `V_k` of a `d`-dimensional ball of radius `radius`:
/// `binom(d, k) * omega_d / omega_(d-k) * radius^k`.
pub fn ball_intrinsic_volume(d: u32, k: u32, radius: f64) -> Result<f64> {
    if k < 1 || k > d {
        return domain(format!("intrinsic volume index k={k} outside 1..={d}"));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return domain("ball radius must be finite and nonnegative");
    }
    Ok(binomial(d, k) * omega_unchecked(d) / omega_unchecked(d - k) * radius.powi(k as i32))
}
