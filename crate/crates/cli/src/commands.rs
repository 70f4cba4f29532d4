use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rball_core::ball2d::{ball_body_2d, ball_hull_2d, dual_result_2d, intrinsic_volumes_2d, make_lens, lens_gap_for_area};
use rball_core::geom::normalize_pose;
use rball_core::nd::{estimate_v1_nd, estimate_vd_nd, steiner_vk_nd, BoundingBox, NdBallBody, NdBallHull, VkEstimate};
use rball_core::search::{minimize, SearchConfig};
use rball_core::verify::{
    check_blaschke_santalo_2d, check_blaschke_santalo_nd, check_identities, check_mahler_2d, check_product,
    check_support_identity, check_support_identity_nd, check_v1_sum, CheckReport, GeneratorLaw, NdCheckParams,
    TrialRecord, TrialSpec,
};
use rball_core::{BallBodyResult, PointSet, Tolerances};
use serde::Serialize;

use crate::files::{body_json, InputFile, Marker, PointSetFile};
use crate::svg::{render, Layer};
use crate::{emit, error_record, to_json, write_atomic, CliError, EXIT_ERROR, EXIT_OK, EXIT_VIOLATIONS};

#[derive(Debug, Parser)]
#[command(name = "rball", version, about = "r-ball bodies and hulls, their duals, checks, and searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The r-ball body X^r of a point set.
    Body(GeometryArgs),
    /// The r-ball hull of a point set.
    Hull(GeometryArgs),
    /// The r-dual of a planar body file.
    Dual(DualArgs),
    /// Intrinsic volumes of a body file or of a point set's body or hull.
    Volumes(VolumesArgs),
    /// Randomized verification suites.
    Verify(VerifyArgs),
    /// Minimize V_k of the dual at fixed volume.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct TolArg {
    /// Geometric and check tolerance (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
}

impl TolArg {
    fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        if let Some(x) = self.tol {
            t.tol_geom = x;
            t.tol_check = x;
            t.tol_merge = t.tol_merge.min(x);
        }
        t.validate().map_err(|e| CliError::Usage(format!("--tol: {e}")))?;
        Ok(t)
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Monte Carlo samples for volume estimates (dimension 3 and up).
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Directions for mean-width estimates.
    #[arg(long, default_value_t = 2000)]
    directions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Point-set file.
    #[arg(long)]
    input: PathBuf,
    /// Output file (standard output when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the file's radius.
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    tol: TolArg,
    #[command(flatten)]
    est: EstimateArgs,
}

#[derive(Debug, Args)]
struct DualArgs {
    /// Arc-polygon or point-marker file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Dual radius; defaults to the polygon's radius, required for a point.
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Of {
    Body,
    Hull,
}

#[derive(Debug, Args)]
struct VolumesArgs {
    /// Point-set, arc-polygon, or point-marker file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    r: Option<f64>,
    /// For point sets: measure the body X^r or the hull.
    #[arg(long, value_enum, default_value_t = Of::Body)]
    of: Of,
    #[command(flatten)]
    tol: TolArg,
    #[command(flatten)]
    est: EstimateArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Bs,
    Product,
    Support,
    Identities,
    Mahler2d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Law {
    Uniform,
    Gaussian,
    Clustered,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Intrinsic volume index; every valid index when absent.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Target area (mahler2d).
    #[arg(long)]
    v: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Law::Uniform)]
    law: Law,
    /// Disk radius (uniform, clustered) or deviation (gaussian); defaults to
    /// 0.6 r and 0.3 r.
    #[arg(long)]
    law_scale: Option<f64>,
    /// Cluster spread; defaults to 0.05 r.
    #[arg(long)]
    spread: Option<f64>,
    /// Monte Carlo samples per volume estimate (dimension 3 and up).
    #[arg(long)]
    samples: Option<u64>,
    /// Directions per mean-width estimate (dimension 3 and up).
    #[arg(long)]
    directions: Option<usize>,
    /// Writes PREFIX.jsonl and PREFIX.csv.
    #[arg(long, value_name = "PREFIX")]
    output: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Target volume, in (0, omega_d r^d).
    #[arg(long)]
    v: f64,
    /// Fixed generator count (overrides --n-min and --n-max).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    restarts: Option<u32>,
    /// Objective evaluations per restart.
    #[arg(long)]
    max_evals: Option<usize>,
    /// Polar quadrature nodes (dimension 3).
    #[arg(long)]
    quadrature: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    /// SVG of the best body, its dual, and the lens of the same area (plane).
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArg,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprintln!("{}", error_record("usage", e.to_string().trim_end()));
            return EXIT_ERROR;
        }
    };
    let result = match cli.command {
        Command::Body(a) => body(&a, false),
        Command::Hull(a) => body(&a, true),
        Command::Dual(a) => dual(&a),
        Command::Volumes(a) => volumes(&a),
        Command::Verify(a) => verify(&a),
        Command::Search(a) => search(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.record());
            EXIT_ERROR
        }
    }
}

fn read_points(path: &Path, r: Option<f64>, tol: &Tolerances) -> Result<PointSet, CliError> {
    match InputFile::read(path)? {
        InputFile::Points(f) => {
            let x = f.to_point_set(tol)?;
            Ok(match r {
                Some(r) => x.with_radius(r)?,
                None => x,
            })
        }
        _ => Err(CliError::Input(format!("{} is not a point-set file", path.display()))),
    }
}

#[derive(Serialize)]
struct NdRecord {
    result: &'static str,
    dim: usize,
    r: f64,
    generators: Vec<Vec<f64>>,
    enclosing_center: Vec<f64>,
    enclosing_radius: f64,
    bounding_box: Option<BoundingBox>,
    volume: VkEstimate,
    v1: VkEstimate,
}

fn body(a: &GeometryArgs, hull: bool) -> Result<i32, CliError> {
    let tol = a.tol.tolerances()?;
    let x = read_points(&a.input, a.r, &tol)?;
    if x.dim() == 2 {
        let b = if hull { ball_hull_2d(&x, &tol)? } else { ball_body_2d(&x, &tol)? };
        emit(a.output.as_deref(), &body_json(&b))?;
        return Ok(EXIT_OK);
    }
    let nd = NdBallBody::new(&x, &tol)?;
    if nd.is_empty() {
        emit(a.output.as_deref(), &to_json(&Marker::empty()))?;
        return Ok(EXIT_OK);
    }
    if !hull {
        if let Some(p) = nd.single_point() {
            emit(a.output.as_deref(), &to_json(&Marker::point(p)))?;
            return Ok(EXIT_OK);
        }
    }
    let generators = PointSetFile::from_point_set(&x).points;
    let (enclosing_center, enclosing_radius) = (nd.enclosing_center().to_vec(), nd.enclosing_radius());
    let record = if hull {
        let h = NdBallHull::new(nd)?;
        NdRecord {
            result: "hull",
            dim: x.dim(),
            r: x.radius(),
            generators,
            enclosing_center,
            enclosing_radius,
            bounding_box: h.bounding_box().cloned(),
            volume: h.estimate_volume(a.est.samples, a.est.seed)?,
            v1: h.estimate_v1(a.est.directions)?,
        }
    } else {
        NdRecord {
            result: "body",
            dim: x.dim(),
            r: x.radius(),
            generators,
            enclosing_center,
            enclosing_radius,
            bounding_box: nd.bounding_box().cloned(),
            volume: estimate_vd_nd(&nd, a.est.samples, a.est.seed)?,
            v1: estimate_v1_nd(&nd, a.est.directions, tol.tol_geom)?,
        }
    };
    emit(a.output.as_deref(), &to_json(&record))?;
    Ok(EXIT_OK)
}

fn dual(a: &DualArgs) -> Result<i32, CliError> {
    let tol = a.tol.tolerances()?;
    let (b, file_r) = InputFile::read(&a.input)?.to_body_2d(a.r, &tol)?;
    let Some(r) = a.r.or(file_r) else {
        return Err(CliError::Usage("--r is required for the dual of a point".into()));
    };
    if b.is_empty() {
        return Err(CliError::Input("the dual of the empty set is the whole plane".into()));
    }
    emit(a.output.as_deref(), &body_json(&dual_result_2d(&b, r, &tol)?))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VolumesRecord {
    dim: usize,
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    of: Option<Of>,
    values: Vec<VkEstimate>,
}

fn planar_values(b: &BallBodyResult) -> Vec<VkEstimate> {
    let v = intrinsic_volumes_2d(b);
    vec![VkEstimate::exact(1, v.v1), VkEstimate::exact(2, v.v2)]
}

fn volumes(a: &VolumesArgs) -> Result<i32, CliError> {
    let tol = a.tol.tolerances()?;
    let record = match InputFile::read(&a.input)? {
        InputFile::Points(f) => {
            let mut x = f.to_point_set(&tol)?;
            if let Some(r) = a.r {
                x = x.with_radius(r)?;
            }
            let values = if x.dim() == 2 {
                let b = match a.of {
                    Of::Body => ball_body_2d(&x, &tol)?,
                    Of::Hull => ball_hull_2d(&x, &tol)?,
                };
                planar_values(&b)
            } else {
                nd_values(&x, a, &tol)?
            };
            VolumesRecord { dim: x.dim(), r: Some(x.radius()), of: Some(a.of), values }
        }
        other => {
            let (b, r) = other.to_body_2d(a.r, &tol)?;
            VolumesRecord { dim: 2, r, of: None, values: planar_values(&b) }
        }
    };
    emit(a.output.as_deref(), &to_json(&record))?;
    Ok(EXIT_OK)
}

/// `V_1..V_d`: volume by hit-or-miss, `V_1` from the mean width, and the
/// intermediate indices of a body by a Steiner fit.
fn nd_values(x: &PointSet, a: &VolumesArgs, tol: &Tolerances) -> Result<Vec<VkEstimate>, CliError> {
    let d = x.dim() as u32;
    let body = NdBallBody::new(x, tol)?;
    let (vd, v1) = match a.of {
        Of::Body => (
            estimate_vd_nd(&body, a.est.samples, a.est.seed)?,
            estimate_v1_nd(&body, a.est.directions, tol.tol_geom)?,
        ),
        Of::Hull => {
            if body.is_empty() {
                return Err(CliError::Input("the hull is empty: no ball of radius r contains the points".into()));
            }
            let h = NdBallHull::new(body)?;
            return Ok(vec![h.estimate_v1(a.est.directions)?, h.estimate_volume(a.est.samples, a.est.seed)?]);
        }
    };
    let mut out = vec![v1];
    let grid: Vec<f64> = (1..=6).map(|i| 0.25 * i as f64 * x.radius()).collect();
    for k in 2..d {
        out.push(if body.bounding_box().is_some() {
            steiner_vk_nd(&body, k, &grid, a.est.samples, a.est.seed)?
        } else {
            VkEstimate { k, value: 0.0, ..vd }
        });
    }
    out.push(vd);
    Ok(out)
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    record: &'static str,
    check_name: &'a str,
    seed: u64,
    trials_run: u64,
    resampled: u64,
    discarded: u64,
    violations: u64,
    worst_margin: f64,
    equality_cases: u64,
    equality_congruent: u64,
    value_names: &'a [String],
    spec: &'a TrialSpec,
}

#[derive(Serialize)]
struct TrialLine<'a> {
    record: &'static str,
    check_name: &'a str,
    #[serde(flatten)]
    trial: &'a TrialRecord,
}

fn trial_spec(a: &VerifyArgs, tol: Tolerances) -> Result<TrialSpec, CliError> {
    let r = a.r;
    let law = match a.law {
        Law::Uniform => GeneratorLaw::UniformInDisk { radius: a.law_scale.unwrap_or(0.6 * r) },
        Law::Gaussian => GeneratorLaw::Gaussian { sigma: a.law_scale.unwrap_or(0.3 * r) },
        Law::Clustered => GeneratorLaw::Clustered {
            radius: a.law_scale.unwrap_or(0.6 * r),
            spread: a.spread.unwrap_or(0.05 * r),
        },
    };
    let spec = TrialSpec {
        dim: a.dim,
        r,
        n_min: a.n_min,
        n_max: a.n_max,
        law,
        trials: a.trials,
        seed: a.seed,
        tolerances: tol,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

fn ks(a: &VerifyArgs, valid: &[u32]) -> Result<Vec<u32>, CliError> {
    match a.k {
        None => Ok(valid.to_vec()),
        Some(k) if valid.contains(&k) => Ok(vec![k]),
        Some(k) => Err(CliError::Usage(format!("--k {k} not available here; valid indices are {valid:?}"))),
    }
}

fn planar_only(a: &VerifyArgs, suite: &str) -> Result<(), CliError> {
    if a.dim != 2 {
        return Err(CliError::Usage(format!("suite {suite} runs in dimension 2 only")));
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let spec = trial_spec(a, a.tol.tolerances()?)?;
    let mut params = NdCheckParams::default();
    if let Some(s) = a.samples {
        params.mc_samples = s;
    }
    if let Some(d) = a.directions {
        params.directions = d;
    }
    let d = a.dim as u32;
    let mut reports: Vec<CheckReport> = Vec::new();
    match a.suite {
        Suite::Bs if a.dim == 2 => {
            for k in ks(a, &[1, 2])? {
                reports.push(check_blaschke_santalo_2d(&spec, k)?);
            }
        }
        Suite::Bs => {
            for k in ks(a, &[1, d])? {
                reports.push(check_blaschke_santalo_nd(&spec, k, &params)?);
            }
        }
        Suite::Product => {
            planar_only(a, "product")?;
            for k in ks(a, &[1, 2])? {
                reports.push(check_product(&spec, k)?);
            }
        }
        Suite::Support if a.dim == 2 => {
            reports.push(check_support_identity(&spec)?);
            reports.push(check_v1_sum(&spec)?);
        }
        Suite::Support => reports.push(check_support_identity_nd(&spec, &params)?),
        Suite::Identities => {
            planar_only(a, "identities")?;
            reports.push(check_identities(&spec)?);
        }
        Suite::Mahler2d => {
            planar_only(a, "mahler2d")?;
            let Some(v) = a.v else {
                return Err(CliError::Usage("suite mahler2d needs --v".into()));
            };
            let full = std::f64::consts::PI * a.r * a.r;
            if !(v > 0.0 && v < full) {
                return Err(CliError::Usage(format!("--v must satisfy 0 < v < pi r^2 = {full}, got {v}")));
            }
            for k in ks(a, &[1, 2])? {
                reports.push(check_mahler_2d(&spec, k, v)?);
            }
        }
    }
    let csv = summary_csv(&reports);
    if let Some(prefix) = &a.output {
        write_atomic(&with_suffix(prefix, "jsonl"), &jsonl(&reports, &spec))?;
        write_atomic(&with_suffix(prefix, "csv"), &csv)?;
    }
    emit(None, &csv)?;
    Ok(if reports.iter().all(CheckReport::passed) { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// `check,trials,violations,worst_margin,seed`.
pub(crate) fn summary_csv(reports: &[CheckReport]) -> String {
    let mut s = String::from("check,trials,violations,worst_margin,seed\n");
    for r in reports {
        s.push_str(&format!("{},{},{},{:e},{}\n", r.check_name, r.trials_run, r.violations, r.worst_margin, r.seed));
    }
    s
}

fn jsonl(reports: &[CheckReport], spec: &TrialSpec) -> String {
    let mut s = String::new();
    for r in reports {
        let summary = SummaryLine {
            record: "summary",
            check_name: &r.check_name,
            seed: r.seed,
            trials_run: r.trials_run,
            resampled: r.resampled,
            discarded: r.discarded,
            violations: r.violations,
            worst_margin: r.worst_margin,
            equality_cases: r.equality_cases,
            equality_congruent: r.equality_congruent,
            value_names: &r.value_names,
            spec,
        };
        s.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
        s.push('\n');
        for t in &r.records {
            let line = TrialLine { record: "trial", check_name: &r.check_name, trial: t };
            s.push_str(&serde_json::to_string(&line).expect("trial serializes"));
            s.push('\n');
        }
    }
    s
}

fn search(a: &SearchArgs) -> Result<i32, CliError> {
    let tol = a.tol.tolerances()?;
    let mut c = match a.dim {
        2 => SearchConfig::planar(a.r, a.k, a.v),
        3 => SearchConfig::spatial(a.r, a.k, a.v),
        d => return Err(CliError::Usage(format!("search runs in dimension 2 or 3, got {d}"))),
    };
    c.tolerances = tol;
    c.seed = a.seed;
    if let Some(n) = a.n {
        c.n_min = n;
        c.n_max = n;
    }
    if let Some(n) = a.n_min {
        c.n_min = n;
    }
    if let Some(n) = a.n_max {
        c.n_max = n;
    }
    if let Some(x) = a.restarts {
        c.restarts = x;
    }
    if let Some(x) = a.max_evals {
        c.max_evals = x;
    }
    if let Some(x) = a.quadrature {
        c.quadrature = x;
    }
    let full = c.full_volume();
    if !(a.v > 0.0 && a.v < full) {
        let bound = if a.dim == 2 { "pi r^2" } else { "(4/3) pi r^3" };
        return Err(CliError::Usage(format!("v must satisfy 0 < v < {bound} = {full}, got {}", a.v)));
    }
    c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let res = minimize(&c)?;
    if let Some(path) = &a.svg {
        if a.dim != 2 {
            return Err(CliError::Usage("--svg is available in the plane only".into()));
        }
        write_atomic(path, &search_svg(&res.best_hull_2d(), a.r, a.v, &tol)?)?;
    }
    emit(a.output.as_deref(), &to_json(&res))?;
    Ok(EXIT_OK)
}

/// The pose-normalized best body, its dual, and the lens of the same area.
fn search_svg(best: &Option<BallBodyResult>, r: f64, v: f64, tol: &Tolerances) -> Result<String, CliError> {
    let body = match best {
        Some(b @ BallBodyResult::Region(_)) => BallBodyResult::Region(normalize_pose(b)?),
        Some(other) => other.clone(),
        None => BallBodyResult::Empty,
    };
    let dual = if body.is_empty() { BallBodyResult::Empty } else { dual_result_2d(&body, r, tol)? };
    let lens = BallBodyResult::Region(make_lens(r, lens_gap_for_area(r, v)?)?);
    let lens = BallBodyResult::Region(normalize_pose(&lens)?);
    Ok(render(
        r,
        &[
            Layer { label: "dual", shape: &dual, color: "#d9822b", fill: true, dashed: false },
            Layer { label: "body", shape: &body, color: "#1f5fa8", fill: true, dashed: false },
            Layer { label: "lens-baseline", shape: &lens, color: "#c0392b", fill: false, dashed: true },
        ],
    ))
}
