//! Dense helpers for the small least-squares systems of the Steiner fit.

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub(crate) fn spd_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut inv = vec![vec![0.0; n]; n];
    for col in 0..n {
        // solve L y = e_col, then L^T x = y
        let mut y = vec![0.0; n];
        for i in 0..n {
            let e = if i == col { 1.0 } else { 0.0 };
            y[i] = (e - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            x[i] = (y[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
        }
        for i in 0..n {
            inv[i][col] = x[i];
        }
    }
    Some(inv)
}

/// Ordinary least squares `min |M b - y|` with the covariance of `b` for a
/// given covariance of `y`. Columns are scaled to unit norm before the
/// condition check. Returns `Err(cond)` when the scaled design's condition
/// number exceeds `max_cond`.
pub(crate) fn least_squares(
    m: &[Vec<f64>],
    y: &[f64],
    cov_y: &[Vec<f64>],
    max_cond: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), f64> {
    let rows = m.len();
    let cols = m[0].len();
    let scale: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt())
        .collect();
    if scale.iter().any(|s| !(*s > 0.0)) {
        return Err(f64::INFINITY);
    }
    let ms: Vec<Vec<f64>> = m.iter().map(|row| row.iter().zip(&scale).map(|(v, s)| v / s).collect()).collect();
    let mut gram = vec![vec![0.0; cols]; cols];
    for i in 0..cols {
        for j in 0..cols {
            gram[i][j] = (0..rows).map(|k| ms[k][i] * ms[k][j]).sum();
        }
    }
    let ev = symmetric_eigenvalues(gram.clone());
    let max = ev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = ev.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if min > 0.0 { (max / min).sqrt() } else { f64::INFINITY };
    if !(cond <= max_cond) {
        return Err(cond);
    }
    let inv = spd_inverse(&gram).ok_or(f64::INFINITY)?;
    // g = inv * ms^T, one row per coefficient, then undo the column scaling
    let g: Vec<Vec<f64>> = (0..cols)
        .map(|i| {
            (0..rows)
                .map(|k| (0..cols).map(|j| inv[i][j] * ms[k][j]).sum::<f64>() / scale[i])
                .collect()
        })
        .collect();
    let beta: Vec<f64> = g.iter().map(|gi| gi.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut cov = vec![vec![0.0; cols]; cols];
    for a in 0..cols {
        for b in 0..cols {
            let mut s = 0.0;
            for i in 0..rows {
                for j in 0..rows {
                    s += g[a][i] * cov_y[i][j] * g[b][j];
                }
            }
            cov[a][b] = s;
        }
    }
    Ok((beta, cov))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_small_matrix() {
        let mut ev = symmetric_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn exact_polynomial_fit() {
        let ts = [0.5, 1.0, 1.5, 2.0, 3.0];
        let m: Vec<Vec<f64>> = ts.iter().map(|t| vec![*t, t * t]).collect();
        let y: Vec<f64> = ts.iter().map(|t| 3.0 * t - 0.5 * t * t).collect();
        let cov = vec![vec![0.0; 5]; 5];
        let (b, _) = least_squares(&m, &y, &cov, 1e8).unwrap();
        assert!((b[0] - 3.0).abs() < 1e-12 && (b[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_design_is_rejected() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]];
        let cov = vec![vec![0.0; 3]; 3];
        assert!(least_squares(&m, &[1.0, 2.0, 3.0], &cov, 1e8).is_err());
    }
}
