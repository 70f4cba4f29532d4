//! Randomized checks of the duality identities and volume inequalities.
//!
//! Every check draws its trials from a [`TrialSpec`]; trial `i` uses its own
//! stream of a generator seeded from the spec, and trials run in parallel
//! with results collected in index order, so a report depends only on the
//! spec.

mod planar;
mod sampling;
mod spatial;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geom::{Tolerances, MAX_DIM};

pub use planar::{
    bs_instance_2d, check_blaschke_santalo_2d, check_identities, check_mahler_2d, check_product, check_support_identity,
    check_v1_sum, mahler_instance_2d, product_instance_2d, product_profile, target_area_2d, InstanceOutcome,
};
pub use sampling::sample_generators;
pub use spatial::{check_blaschke_santalo_nd, check_support_identity_nd, support_residual_nd, NdCheckParams};

/// How trial generators are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GeneratorLaw {
    /// Uniform in the ball of radius `radius` about the origin.
    UniformInDisk { radius: f64 },
    /// Independent normal coordinates with deviation `sigma`.
    Gaussian { sigma: f64 },
    /// One to three centers uniform in the ball of radius `radius / 2`, each
    /// generator a normal perturbation of deviation `spread` of a center.
    Clustered { radius: f64, spread: f64 },
}

/// Parameters of a randomized check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub dim: usize,
    pub r: f64,
    /// Inclusive range of generator counts.
    pub n_min: usize,
    pub n_max: usize,
    pub law: GeneratorLaw,
    pub trials: u64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Attempts per trial before the trial is given up as infeasible.
pub const RESAMPLE_CAP: u32 = 200;

impl TrialSpec {
    /// Planar trials with 2 to 8 generators uniform in the disk of radius
    /// `0.6 r`.
    pub fn planar(r: f64, trials: u64, seed: u64) -> Self {
        Self {
            dim: 2,
            r,
            n_min: 2,
            n_max: 8,
            law: GeneratorLaw::UniformInDisk { radius: 0.6 * r },
            trials,
            seed,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if !(2..=MAX_DIM).contains(&self.dim) {
            return domain(format!("dimension must lie in 2..={MAX_DIM}, got {}", self.dim));
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return domain("radius r must be positive and finite");
        }
        if self.n_min < 1 || self.n_min > self.n_max {
            return domain(format!("invalid generator count range {}..={}", self.n_min, self.n_max));
        }
        let ok = match self.law {
            GeneratorLaw::UniformInDisk { radius } => radius > 0.0 && radius.is_finite(),
            GeneratorLaw::Gaussian { sigma } => sigma > 0.0 && sigma.is_finite(),
            GeneratorLaw::Clustered { radius, spread } => {
                radius > 0.0 && spread > 0.0 && radius.is_finite() && spread.is_finite()
            }
        };
        if !ok {
            return domain("generator law parameters must be positive and finite");
        }
        Ok(())
    }

    pub(crate) fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    /// Seed for Monte Carlo work inside a trial, distinct per trial.
    pub(crate) fn trial_mc_seed(&self, trial: u64) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.seed);
        h.write_u64(trial);
        h.finish()
    }
}

/// One trial's record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// FNV-1a hash of the generator coordinates' bit patterns, in hex.
    pub input_hash: String,
    /// Check-specific values, named by the report's `value_names`.
    pub values: Vec<f64>,
    /// Right side minus left side of the asserted inequality; for identities,
    /// minus the residual.
    pub slack: f64,
    pub violated: bool,
    pub near_equality: bool,
    /// Outcome of the congruence test on near-equality trials.
    pub congruent: Option<bool>,
    /// Attempts spent drawing a usable input.
    pub attempts: u32,
}

/// Summary and per-trial records of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub seed: u64,
    pub trials_run: u64,
    /// Extra draws needed because an input was infeasible.
    pub resampled: u64,
    /// Trials given up after `RESAMPLE_CAP` attempts.
    pub discarded: u64,
    pub violations: u64,
    /// Smallest slack observed (most negative when violated).
    pub worst_margin: f64,
    pub equality_cases: u64,
    pub equality_congruent: u64,
    pub value_names: Vec<String>,
    pub records: Vec<TrialRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub(crate) fn from_records(name: &str, seed: u64, value_names: &[&str], outcomes: Vec<Option<TrialRecord>>) -> Self {
        let discarded = outcomes.iter().filter(|o| o.is_none()).count() as u64;
        let records: Vec<TrialRecord> = outcomes.into_iter().flatten().collect();
        Self {
            check_name: name.to_string(),
            seed,
            trials_run: records.len() as u64,
            resampled: records.iter().map(|r| (r.attempts.max(1) - 1) as u64).sum(),
            discarded,
            violations: records.iter().filter(|r| r.violated).count() as u64,
            worst_margin: records.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
            equality_cases: records.iter().filter(|r| r.near_equality).count() as u64,
            equality_congruent: records.iter().filter(|r| r.congruent == Some(true)).count() as u64,
            value_names: value_names.iter().map(|s| s.to_string()).collect(),
            records,
        }
    }

    /// Merges reports of the same check (e.g. several seeds); records are
    /// concatenated in argument order.
    pub fn merge(name: &str, reports: &[CheckReport]) -> Self {
        let records: Vec<TrialRecord> = reports.iter().flat_map(|r| r.records.iter().cloned()).collect();
        Self {
            check_name: name.to_string(),
            seed: reports.first().map_or(0, |r| r.seed),
            trials_run: reports.iter().map(|r| r.trials_run).sum(),
            resampled: reports.iter().map(|r| r.resampled).sum(),
            discarded: reports.iter().map(|r| r.discarded).sum(),
            violations: reports.iter().map(|r| r.violations).sum(),
            worst_margin: reports.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min),
            equality_cases: reports.iter().map(|r| r.equality_cases).sum(),
            equality_congruent: reports.iter().map(|r| r.equality_congruent).sum(),
            value_names: reports.first().map_or_else(Vec::new, |r| r.value_names.clone()),
            records,
        }
    }
}

/// Equality band for a comparison of quantities of size `scale`.
pub fn equality_band(tol: &Tolerances, scale: f64) -> f64 {
    (10.0 * tol.tol_check).max(1e-6 * scale.abs())
}

/// Runs `trial` for every index in parallel, keeping index order.
pub(crate) fn run_trials<F>(spec: &TrialSpec, trial: F) -> Vec<Option<TrialRecord>>
where
    F: Fn(u64) -> Option<TrialRecord> + Sync + Send,
{
    (0..spec.trials).into_par_iter().map(trial).collect()
}

/// 64-bit FNV-1a.
pub(crate) struct Fnv(u64);

impl Fnv {
    pub fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    pub fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

pub(crate) fn hash_points<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut h = Fnv::new();
    for p in points {
        for c in p {
            h.write_u64(c.to_bits());
        }
    }
    format!("{:016x}", h.finish())
}
