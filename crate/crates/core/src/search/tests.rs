use std::f64::consts::PI;

use super::*;
use crate::geom::hausdorff_distance;

const S3: f64 = 1.7320508075688772;

fn unit_lens_area() -> f64 {
    2.0 * PI / 3.0 - S3 / 2.0
}

#[test]
fn baseline_values() {
    let v = unit_lens_area();
    assert!((lens_baseline(1.0, v, 1).unwrap() - PI / 3.0).abs() < 1e-9);
    assert!((lens_baseline(1.0, v, 2).unwrap() - (PI / 3.0 - S3 / 2.0)).abs() < 1e-9);
    let near_disk = lens_baseline(1.0, PI - 1e-9, 1).unwrap();
    assert!(near_disk >= 0.0 && near_disk < 1e-2);
    assert!(lens_baseline(1.0, PI, 1).is_err());
    assert!(lens_baseline(1.0, 1.0, 3).is_err());
}

#[test]
fn parametrization_round_trips() {
    for dim in [2, 3] {
        for n in 2..7 {
            let len = param_len(dim, n);
            let g: Vec<f64> = (0..len).map(|i| 0.1 * (i as f64 + 1.0).sin()).collect();
            let pts = generators_from_params(dim, &g);
            assert_eq!(pts.len(), n);
            let back = params_from_generators(&pts);
            for (a, b) in g.iter().zip(&back) {
                // the second point may flip to the negative axis side only if g[0] < 0
                assert!((a.abs() - b.abs()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn canonical_pose_preserves_distances() {
    let pts = vec![vec![0.3, -0.2, 0.1], vec![-0.1, 0.4, 0.2], vec![0.2, 0.2, -0.3], vec![0.0, 0.1, 0.1]];
    let back = generators_from_params(3, &params_from_generators(&pts));
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            let d0: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b).powi(2)).sum();
            let d1: f64 = back[i].iter().zip(&back[j]).map(|(a, b)| (a - b).powi(2)).sum();
            assert!((d0 - d1).abs() < 1e-12);
        }
    }
}

#[test]
fn objective_of_the_two_generator_lens() {
    // conv_1 of two points at distance sqrt 3 is the lens of center gap 1
    let v = unit_lens_area();
    let config = SearchConfig::planar(1.0, 1, v);
    let f = objective(&config, &[S3], 1e6).unwrap();
    assert!((f - PI / 3.0).abs() < 1e-9, "{f}");
    let f2 = objective(&SearchConfig::planar(1.0, 2, v), &[S3], 1e6).unwrap();
    assert!((f2 - (PI / 3.0 - S3 / 2.0)).abs() < 1e-9);
}

#[test]
fn objective_sentinel_for_empty_hulls() {
    let config = SearchConfig::planar(1.0, 1, 1.0);
    let w = 10.0;
    let s = objective(&config, &[2.5], w).unwrap();
    assert_eq!(s, 2.0 * PI + w * (PI - 1.0f64).max(1.0).powi(2));
    // every nonempty configuration scores below the sentinel
    let f = objective(&config, &[1.9], w).unwrap();
    assert!(f < s);
}

#[test]
fn invalid_configs() {
    let mut c = SearchConfig::planar(1.0, 1, 1.0);
    c.n_min = 1;
    assert!(c.validate().is_err());
    assert!(SearchConfig::planar(1.0, 1, PI).validate().is_err());
    assert!(SearchConfig::planar(1.0, 3, 1.0).validate().is_err());
    assert!(SearchConfig::spatial(1.0, 2, 1.0).validate().is_err());
    assert!(SearchConfig::spatial(1.0, 3, 4.2).validate().is_err());
    let c = SearchConfig::planar(1.0, 1, 1.0);
    assert!(objective(&c, &[0.1, 0.2], 1.0).is_err());
}

fn quick(k: u32, seed: u64) -> SearchConfig {
    SearchConfig {
        restarts: 5,
        max_evals: 1500,
        seed,
        ..SearchConfig::planar(1.0, k, unit_lens_area())
    }
}

#[test]
fn planar_search_finds_the_lens() {
    for k in [1, 2] {
        let res = minimize(&quick(k, 0)).unwrap();
        assert!(res.constraint_residual <= 1e-6 * res.config.target_volume);
        assert!(res.gap >= -1e-6, "{}", res.gap);
        assert!(res.gap <= 1e-6, "k={k} gap {}", res.gap);
        let lens = BallBodyResult::Region(make_lens(1.0, 1.0).unwrap());
        let shape = BallBodyResult::Region(res.normalized_shape.clone().unwrap());
        let target = BallBodyResult::Region(normalize_pose(&lens).unwrap());
        assert!(hausdorff_distance(&shape, &target) < 1e-3);
        for o in &res.restarts {
            assert!(o.trace.windows(2).all(|w| w[1] <= w[0]));
            if let Some(v) = o.objective {
                assert!(v >= res.baseline - 1e-6);
            }
        }
    }
}

#[test]
fn search_is_deterministic() {
    let a = minimize(&quick(2, 3)).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let b = pool.install(|| minimize(&quick(2, 3)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn spatial_search_runs_and_reports_against_two_generators() {
    let config = SearchConfig {
        restarts: 2,
        max_evals: 60,
        quadrature: 6,
        n_min: 2,
        n_max: 3,
        penalty: PenaltySchedule { stages: 2, ..PenaltySchedule::default() },
        ..SearchConfig::spatial(1.0, 3, 1.0)
    };
    let res = minimize(&config).unwrap();
    assert!(res.exploratory);
    assert!(res.normalized_shape.is_none());
    assert!(res.constraint_residual <= 1e-6 * 1.0);
    // the two-generator restart lands on the baseline itself
    let two = res.restarts.iter().find(|o| o.generators == 2).unwrap();
    assert!((two.objective.unwrap() - res.baseline).abs() < 1e-6 * res.baseline);
    assert!(res.best_objective <= res.baseline + 1e-9);
}
