//! The `mc` experiment suites: desk-scale Monte Carlo verification runs.
//!
//! Suites run without thresholds by default (smoke-friendly, exit 0); when a
//! threshold flag is configured and violated, the report is still written
//! and the command exits 4.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use periomax_core::montecarlo::{
    configure_workers, exact_max_exp_cdf, gumbel_cdf, ks_distance, power_curve, replicate,
    DensityMode, EmpiricalSample, PowerPoint, Sinusoid,
};
use periomax_core::peaks::{fisher_g, max_test, NormalizedOrdinates};
use periomax_core::processes::{
    check_conditions, fourier_approx_gap, gen_linear, gen_recursion, innovation_diff_norm,
    m_approx_linear, m_approx_recursion, Process, RecursionKind, SeedSpec, Transform,
};
use periomax_core::series::{periodogram, FourierGrid};
use serde::{Deserialize, Serialize};

use crate::cmd_test::MethodArg;
use crate::config::{parse_f64_list, parse_usize_list, pick, resolve_seed, Config};
use crate::data::render_series;
use crate::errors::{CliError, CliResult};
use crate::pipeline::{KernelArg, SpectralSettings};
use crate::procspec::ProcessFlags;
use crate::report::{write_report, Echo, Report};

/// Salt separating the conditional-mean redraw stream from the generator
/// stream inside one approximation replicate.
const M_APPROX_SALT: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityArg {
    /// Closed-form density of the model (linear processes only).
    Known,
    /// Lag-window estimate recomputed per replicate.
    Estimated,
}

impl DensityArg {
    fn name(self) -> &'static str {
        match self {
            DensityArg::Known => "known",
            DensityArg::Estimated => "estimated",
        }
    }
}

/// Flags shared by every suite.
#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Master seed (PERIOMAX_SEED as fallback, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replicates.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Worker-thread cap for replication (never changes results).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory receiving single-column CSV exports of the raw samples.
    #[arg(long = "export-samples")]
    pub export_samples: Option<PathBuf>,
    /// Flat key-value config file mirroring the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

struct Common {
    cfg: Config,
    seed: u64,
    reps: usize,
    out: Option<PathBuf>,
    export: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(&self, default_reps: usize, echo: &mut Echo) -> CliResult<Common> {
        let cfg = Config::load(self.config.as_deref())?;
        let seed = resolve_seed(self.seed, &cfg)?;
        let reps = pick(self.reps, cfg.usize("reps")?, default_reps);
        if let Some(workers) = self.workers.or(cfg.usize("workers")?) {
            echo.put("workers", workers);
            configure_workers(workers)?;
        }
        let out = self.out.clone().or(cfg.string("out")?.map(PathBuf::from));
        let export =
            self.export_samples.clone().or(cfg.string("export-samples")?.map(PathBuf::from));
        Ok(Common { cfg, seed, reps, out, export })
    }

    /// Resolve and echo seed and reps; for the replicated suites.
    fn resolve_replicated(&self, default_reps: usize, echo: &mut Echo) -> CliResult<Common> {
        let common = self.resolve(default_reps, echo)?;
        echo.put("seed", common.seed);
        echo.put("reps", common.reps);
        Ok(common)
    }
}

#[derive(Debug, clap::Subcommand)]
pub enum McSuite {
    /// Distribution of a centered statistic against its Gumbel limit.
    GumbelConvergence(GumbelArgs),
    /// Detection power and frequency recovery for a planted sinusoid.
    Power(PowerArgs),
    /// Coupling estimates of the dependence coefficients vs closed forms.
    Dependence(DependenceArgs),
    /// Quality of the m-dependent approximation across series lengths.
    MApprox(MApproxArgs),
    /// Summability condition checks for a process model.
    Conditions(ConditionsArgs),
}

pub fn run(suite: &McSuite) -> CliResult<()> {
    match suite {
        McSuite::GumbelConvergence(a) => run_gumbel(a),
        McSuite::Power(a) => run_power(a),
        McSuite::Dependence(a) => run_dependence(a),
        McSuite::MApprox(a) => run_m_approx(a),
        McSuite::Conditions(a) => run_conditions(a),
    }
}

/// Stamps timing, writes the report, then surfaces threshold violations.
fn finish(
    mut report: Report,
    start: Instant,
    out: Option<&Path>,
    violations: Vec<String>,
) -> CliResult<()> {
    report.timing_ms = start.elapsed().as_millis() as u64;
    write_report(&report, out)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Threshold(violations.join("; ")))
    }
}

fn export_sample(dir: Option<&Path>, sample: &EmpiricalSample) -> CliResult<()> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(format!("{}.csv", sample.label()));
    std::fs::write(&path, render_series(sample.values()))
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// gumbel-convergence

#[derive(Debug, clap::Args)]
pub struct GumbelArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Series length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Centered statistic: max or fisher.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Normalizing density.
    #[arg(long, value_enum)]
    pub density: Option<DensityArg>,
    /// Lag-window kernel (density estimated).
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Bandwidth exponent (density estimated).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Density floor fraction (density estimated).
    #[arg(long)]
    pub floor: Option<f64>,
    /// Fail (exit 4) when the K-S distance to the Gumbel limit exceeds this.
    #[arg(long = "ks-threshold")]
    pub ks_threshold: Option<f64>,
    /// Fail (exit 4) when the K-S distance to the exact finite-q law of the
    /// maximum exceeds this (method max only).
    #[arg(long = "ks-exact-threshold")]
    pub ks_exact_threshold: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GumbelResults {
    n: usize,
    q: usize,
    reps: usize,
    method: String,
    density: String,
    /// K-S distance of the sample to the standard Gumbel law.
    ks_gumbel: f64,
    /// K-S distance to the exact law of the centered maximum of q iid
    /// exponentials (method max only).
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_exact: Option<f64>,
    sample: EmpiricalSample,
}

fn run_gumbel(args: &GumbelArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut echo = Echo::new();
    let common = args.common.resolve_replicated(2000, &mut echo)?;
    let cfg = &common.cfg;
    let spec = args.process.resolve(cfg, &mut echo)?;
    let n = pick(args.n, cfg.usize("n")?, 1024);
    let method = pick(args.method, cfg.value_enum("method")?, MethodArg::Max);
    let density = pick(args.density, cfg.value_enum("density")?, DensityArg::Known);
    echo.put("n", n);
    echo.put("method", method_name(method)?);
    echo.put("density", density.name());
    let settings = match density {
        DensityArg::Known => None,
        DensityArg::Estimated => {
            Some(SpectralSettings::resolve(args.kernel, args.eta, args.floor, cfg, &mut echo)?)
        }
    };
    let ks_threshold = args.ks_threshold.or(cfg.f64("ks-threshold")?);
    let ks_exact_threshold = args.ks_exact_threshold.or(cfg.f64("ks-exact-threshold")?);

    let process = spec.build()?;
    let known = match density {
        DensityArg::Known => Some(process.known_density()?),
        DensityArg::Estimated => None,
    };
    let q = FourierGrid::new(n)?.q();

    let label = format!("gumbel-convergence-{}-n{n}", method_name(method)?);
    let sample = replicate(
        |s| {
            let series = process.generate(n, s)?;
            let v = match (&known, &settings) {
                (Some(density), _) => {
                    NormalizedOrdinates::from_density(&periodogram(&series), density)?
                }
                (None, Some(settings)) => settings.normalized(&series)?,
                (None, None) => unreachable!("one normalization mode is always resolved"),
            };
            match method {
                MethodArg::Max => Ok(max_test(&v).statistic),
                MethodArg::Fisher => Ok(fisher_g(&v)?.statistic),
                _ => unreachable!("validated above"),
            }
        },
        common.reps,
        SeedSpec::new(common.seed, 0),
        &label,
    )?;

    let ks_gumbel = ks_distance(&sample, gumbel_cdf);
    let ks_exact = match method {
        MethodArg::Max => Some(ks_distance(&sample, |x| exact_max_exp_cdf(x, q))),
        _ => None,
    };

    export_sample(common.export.as_deref(), &sample)?;
    let mut violations = Vec::new();
    if let Some(t) = ks_threshold {
        if ks_gumbel > t {
            violations.push(format!("K-S to Gumbel {ks_gumbel:.4} exceeds threshold {t}"));
        }
        echo.put("ks-threshold", t);
    }
    if let Some(t) = ks_exact_threshold {
        match ks_exact {
            Some(ks) if ks > t => {
                violations.push(format!("K-S to exact law {ks:.4} exceeds threshold {t}"));
            }
            Some(_) => {}
            None => {
                return Err(CliError::Config(
                    "--ks-exact-threshold applies to method max only".into(),
                ))
            }
        }
        echo.put("ks-exact-threshold", t);
    }

    let results = GumbelResults {
        n,
        q,
        reps: common.reps,
        method: method_name(method)?.to_string(),
        density: density.name().to_string(),
        ks_gumbel,
        ks_exact,
        sample,
    };
    let mut report = Report::new("mc/gumbel-convergence", echo.0);
    report.set_results(&results)?;
    finish(report, start, common.out.as_deref(), violations)
}

fn method_name(method: MethodArg) -> CliResult<&'static str> {
    match method {
        MethodArg::Max => Ok("max"),
        MethodArg::Fisher => Ok("fisher"),
        MethodArg::U | MethodArg::R => Err(CliError::Config(
            "this suite supports methods max and fisher; u and r have no Gumbel limit here".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// power

#[derive(Debug, clap::Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Series length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sinusoid angular frequency in (0, pi).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Sinusoid phase.
    #[arg(long)]
    pub phase: Option<f64>,
    /// Amplitude grid, comma separated.
    #[arg(long)]
    pub amplitudes: Option<String>,
    /// Test level.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Normalizing density.
    #[arg(long, value_enum)]
    pub density: Option<DensityArg>,
    /// Lag-window kernel (density estimated).
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Bandwidth exponent (density estimated).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Density floor fraction (density estimated).
    #[arg(long)]
    pub floor: Option<f64>,
    /// Fail (exit 4) when any amplitude's rejection rate is below this.
    #[arg(long = "min-rejection")]
    pub min_rejection: Option<f64>,
    /// Fail (exit 4) when any amplitude's recovery rate is below this.
    #[arg(long = "min-recovery")]
    pub min_recovery: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PowerResults {
    n: usize,
    q: usize,
    gamma: f64,
    /// Grid index nearest to gamma; recovery means reporting this peak.
    target_index: usize,
    phase: f64,
    alpha: f64,
    reps: usize,
    points: Vec<PowerPoint>,
}

fn run_power(args: &PowerArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut echo = Echo::new();
    let common = args.common.resolve_replicated(500, &mut echo)?;
    let cfg = &common.cfg;
    let spec = args.process.resolve(cfg, &mut echo)?;
    let n = pick(args.n, cfg.usize("n")?, 512);
    let gamma = pick(args.gamma, cfg.f64("gamma")?, std::f64::consts::FRAC_PI_4);
    let phase = pick(args.phase, cfg.f64("phase")?, 0.0);
    let alpha = pick(args.alpha, cfg.f64("alpha")?, 0.05);
    let amplitudes = match &args.amplitudes {
        Some(text) => parse_f64_list(text, "--amplitudes")?,
        None => cfg.f64_list("amplitudes")?.unwrap_or_else(|| vec![0.5]),
    };
    let density_arg = pick(args.density, cfg.value_enum("density")?, DensityArg::Known);
    echo.put("n", n);
    echo.put("gamma", gamma);
    echo.put("phase", phase);
    echo.put("alpha", alpha);
    echo.put("amplitudes", &amplitudes);
    echo.put("density", density_arg.name());
    let density = match density_arg {
        DensityArg::Known => DensityMode::Known,
        DensityArg::Estimated => {
            let s = SpectralSettings::resolve(args.kernel, args.eta, args.floor, cfg, &mut echo)?;
            DensityMode::Estimated { kernel: s.kernel, eta: s.eta, floor_frac: s.floor }
        }
    };
    let min_rejection = args.min_rejection.or(cfg.f64("min-rejection")?);
    let min_recovery = args.min_recovery.or(cfg.f64("min-recovery")?);
    if let Some(t) = min_rejection {
        echo.put("min-rejection", t);
    }
    if let Some(t) = min_recovery {
        echo.put("min-recovery", t);
    }

    let noise = spec.build()?;
    let points = power_curve(
        &noise,
        &Sinusoid { gamma, phase },
        &amplitudes,
        n,
        alpha,
        &density,
        common.reps,
        SeedSpec::new(common.seed, 0),
    )?;

    let mut violations = Vec::new();
    for point in &points {
        if let Some(t) = min_rejection {
            if point.rejection_rate < t {
                violations.push(format!(
                    "amplitude {}: rejection rate {:.3} below threshold {t}",
                    point.amplitude, point.rejection_rate
                ));
            }
        }
        if let Some(t) = min_recovery {
            if point.recovery_rate < t {
                violations.push(format!(
                    "amplitude {}: recovery rate {:.3} below threshold {t}",
                    point.amplitude, point.recovery_rate
                ));
            }
        }
    }

    let grid = FourierGrid::new(n)?;
    let results = PowerResults {
        n,
        q: grid.q(),
        gamma,
        target_index: grid.nearest_index(gamma),
        phase,
        alpha,
        reps: common.reps,
        points,
    };
    let mut report = Report::new("mc/power", echo.0);
    report.set_results(&results)?;
    finish(report, start, common.out.as_deref(), violations)
}

// ---------------------------------------------------------------------------
// dependence

#[derive(Debug, clap::Args)]
pub struct DependenceArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Moment order p of the dependence coefficients.
    #[arg(long)]
    pub p: Option<f64>,
    /// Lags to estimate, comma separated.
    #[arg(long = "k-list")]
    pub k_list: Option<String>,
    /// Fail (exit 4) when any |estimate - exact| / s.e. exceeds this.
    #[arg(long = "max-z")]
    pub max_z: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DependenceRow {
    k: usize,
    estimate: f64,
    std_error: f64,
    reps: usize,
    /// Closed-form value, when the model admits one.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    /// |estimate - exact| / s.e., when exact is available.
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DependenceResults {
    p: f64,
    reps: usize,
    rows: Vec<DependenceRow>,
}

/// Closed-form theta for one-sided identity-linear models and AR(1).
fn exact_theta(process: &Process, k: usize, p: f64) -> Option<f64> {
    match process {
        Process::Linear(model) if model.transform() == Transform::Identity => {
            let (lo, _) = model.coeffs().support();
            if lo >= 0 {
                let norm = innovation_diff_norm(model.innovation(), p)?;
                Some(model.coeffs().get(k as i64).abs() * norm)
            } else {
                None
            }
        }
        Process::Recursion(model) => match model.kind() {
            RecursionKind::Ar1 { phi } => {
                let norm = innovation_diff_norm(model.innovation(), p)?;
                Some(phi.abs().powi(k as i32) * norm)
            }
            _ => None,
        },
        _ => None,
    }
}

fn run_dependence(args: &DependenceArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut echo = Echo::new();
    let common = args.common.resolve_replicated(2000, &mut echo)?;
    let cfg = &common.cfg;
    let spec = args.process.resolve(cfg, &mut echo)?;
    let p = pick(args.p, cfg.f64("p")?, 2.0);
    let k_list = match &args.k_list {
        Some(text) => parse_usize_list(text, "--k-list")?,
        None => match cfg.string("k-list")? {
            Some(text) => parse_usize_list(&text, "k-list")?,
            None => vec![0, 1, 2, 3, 4, 6, 8],
        },
    };
    if k_list.is_empty() {
        return Err(CliError::Config("--k-list must name at least one lag".into()));
    }
    echo.put("p", p);
    echo.put("k-list", &k_list);
    let max_z = args.max_z.or(cfg.f64("max-z")?);
    if let Some(t) = max_z {
        echo.put("max-z", t);
    }

    let process = spec.build()?;
    let root = SeedSpec::new(common.seed, 0);
    let mut rows = Vec::with_capacity(k_list.len());
    let mut violations = Vec::new();
    for (i, &k) in k_list.iter().enumerate() {
        let est = process.coupled_theta(k, p, common.reps, root.child(i as u64))?;
        let exact = exact_theta(&process, k, p);
        let z = exact.map(|e| (est.value - e).abs() / est.std_error.max(f64::MIN_POSITIVE));
        if let (Some(t), Some(z)) = (max_z, z) {
            if z > t {
                violations.push(format!("lag {k}: |z| = {z:.2} exceeds threshold {t}"));
            }
        }
        rows.push(DependenceRow {
            k,
            estimate: est.value,
            std_error: est.std_error,
            reps: est.reps,
            exact,
            z,
        });
    }

    let results = DependenceResults { p, reps: common.reps, rows };
    let mut report = Report::new("mc/dependence", echo.0);
    report.set_results(&results)?;
    finish(report, start, common.out.as_deref(), violations)
}

// ---------------------------------------------------------------------------
// m-approx

#[derive(Debug, clap::Args)]
pub struct MApproxArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Series lengths, comma separated.
    #[arg(long = "n-list")]
    pub n_list: Option<String>,
    /// Window exponent: m = floor(n^m-eta).
    #[arg(long = "m-eta")]
    pub m_eta: Option<f64>,
    /// Conditional-mean replicates per time point (recursions and
    /// non-identity transforms; identity-linear models ignore it).
    #[arg(long = "cond-reps")]
    pub cond_reps: Option<usize>,
    /// Fail (exit 4) unless the median scaled gap strictly decreases along
    /// the length grid.
    #[arg(long = "require-decreasing")]
    pub require_decreasing: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct MApproxRow {
    n: usize,
    m: usize,
    /// Median over replicates of max-gap / sqrt(n / log n).
    median_scaled_gap: f64,
    sample: EmpiricalSample,
}

#[derive(Debug, Serialize, Deserialize)]
struct MApproxResults {
    m_eta: f64,
    cond_reps: usize,
    reps: usize,
    rows: Vec<MApproxRow>,
}

fn run_m_approx(args: &MApproxArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut echo = Echo::new();
    let common = args.common.resolve_replicated(50, &mut echo)?;
    let cfg = &common.cfg;
    let spec = args.process.resolve(cfg, &mut echo)?;
    let n_list = match &args.n_list {
        Some(text) => parse_usize_list(text, "--n-list")?,
        None => match cfg.string("n-list")? {
            Some(text) => parse_usize_list(&text, "n-list")?,
            None => vec![512, 2048, 8192],
        },
    };
    if n_list.is_empty() {
        return Err(CliError::Config("--n-list must name at least one length".into()));
    }
    let m_eta = pick(args.m_eta, cfg.f64("m-eta")?, 0.3);
    if !(m_eta > 0.0 && m_eta < 1.0) {
        return Err(CliError::Config(format!("--m-eta must lie in (0,1), got {m_eta}")));
    }
    let cond_reps = pick(args.cond_reps, cfg.usize("cond-reps")?, 200);
    let require_decreasing =
        args.require_decreasing || cfg.bool("require-decreasing")?.unwrap_or(false);
    echo.put("n-list", &n_list);
    echo.put("m-eta", m_eta);
    echo.put("cond-reps", cond_reps);
    echo.put("require-decreasing", require_decreasing);

    let process = spec.build()?;
    let root = SeedSpec::new(common.seed, 0);
    let mut rows = Vec::with_capacity(n_list.len());
    for (i, &n) in n_list.iter().enumerate() {
        let m = (n as f64).powf(m_eta).floor() as usize;
        let scale = (n as f64 / (n as f64).ln()).sqrt();
        let label = format!("m-approx-n{n}-m{m}");
        let sample = replicate(
            |s| {
                let gap = match &process {
                    Process::Linear(model) => {
                        let sample = gen_linear(model, n, s)?;
                        let approx =
                            m_approx_linear(model, &sample, m, cond_reps, s.child(M_APPROX_SALT))?;
                        fourier_approx_gap(sample.series(), &approx.series)?
                    }
                    Process::Recursion(model) => {
                        let sample = gen_recursion(model, n, s)?;
                        let approx = m_approx_recursion(
                            model,
                            &sample,
                            m,
                            cond_reps,
                            s.child(M_APPROX_SALT),
                        )?;
                        fourier_approx_gap(sample.series(), &approx.series)?
                    }
                };
                Ok(gap / scale)
            },
            common.reps,
            root.child(i as u64),
            &label,
        )?;
        export_sample(common.export.as_deref(), &sample)?;
        rows.push(MApproxRow { n, m, median_scaled_gap: sample.quantile(0.5)?, sample });
    }

    let mut violations = Vec::new();
    if require_decreasing {
        for pair in rows.windows(2) {
            if pair[1].median_scaled_gap >= pair[0].median_scaled_gap {
                violations.push(format!(
                    "median scaled gap did not decrease from n = {} ({:.5}) to n = {} ({:.5})",
                    pair[0].n, pair[0].median_scaled_gap, pair[1].n, pair[1].median_scaled_gap
                ));
            }
        }
    }

    let results = MApproxResults { m_eta, cond_reps, reps: common.reps, rows };
    let mut report = Report::new("mc/m-approx", echo.0);
    report.set_results(&results)?;
    finish(report, start, common.out.as_deref(), violations)
}

// ---------------------------------------------------------------------------
// conditions

#[derive(Debug, clap::Args)]
pub struct ConditionsArgs {
    #[command(flatten)]
    pub process: ProcessFlags,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Grid of lengths for the summability products, comma separated.
    #[arg(long = "n-list")]
    pub n_list: Option<String>,
    /// Fail (exit 4) unless every condition passes.
    #[arg(long = "require-pass")]
    pub require_pass: bool,
}

/// A product value in JSON: a number, or the strings "inf" / "-inf" / "nan"
/// for the values JSON cannot carry (a divergent tail moment is a legitimate,
/// reportable outcome).
#[derive(Debug, Serialize)]
#[serde(untagged)]
enum ProductValue {
    Finite(f64),
    Divergent(&'static str),
}

impl ProductValue {
    fn from(value: f64) -> Self {
        if value.is_finite() {
            ProductValue::Finite(value)
        } else if value.is_nan() {
            ProductValue::Divergent("nan")
        } else if value > 0.0 {
            ProductValue::Divergent("inf")
        } else {
            ProductValue::Divergent("-inf")
        }
    }
}

#[derive(Debug, Serialize)]
struct ConditionPointView {
    n: usize,
    value: ProductValue,
}

#[derive(Debug, Serialize)]
struct ConditionRowView {
    name: String,
    products: Vec<ConditionPointView>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct ConditionsResults {
    rows: Vec<ConditionRowView>,
    pass: bool,
}

fn run_conditions(args: &ConditionsArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut echo = Echo::new();
    let common = args.common.resolve(1, &mut echo)?;
    let cfg = &common.cfg;
    let spec = args.process.resolve(cfg, &mut echo)?;
    let n_list = match &args.n_list {
        Some(text) => parse_usize_list(text, "--n-list")?,
        None => match cfg.string("n-list")? {
            Some(text) => parse_usize_list(&text, "n-list")?,
            None => vec![4, 16, 64, 256, 1024],
        },
    };
    let require_pass = args.require_pass || cfg.bool("require-pass")?.unwrap_or(false);
    echo.put("n-list", &n_list);
    echo.put("require-pass", require_pass);

    let process = spec.build()?;
    let conditions = check_conditions(&process, &n_list)?;

    let mut violations = Vec::new();
    if require_pass && !conditions.pass {
        let failed: Vec<&str> = conditions
            .rows
            .iter()
            .filter(|row| !row.pass)
            .map(|row| row.name.as_str())
            .collect();
        violations.push(format!("conditions failed: {}", failed.join(", ")));
    }

    let results = ConditionsResults {
        rows: conditions
            .rows
            .into_iter()
            .map(|row| ConditionRowView {
                name: row.name,
                products: row
                    .products
                    .into_iter()
                    .map(|p| ConditionPointView { n: p.n, value: ProductValue::from(p.value) })
                    .collect(),
                pass: row.pass,
                note: row.note,
            })
            .collect(),
        pass: conditions.pass,
    };
    let mut report = Report::new("mc/conditions", echo.0);
    report.set_results(&results)?;
    finish(report, start, common.out.as_deref(), violations)
}
