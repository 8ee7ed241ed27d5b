//! Process-model flags shared by `simulate` and the experiment suites.

use clap::ValueEnum;
use periomax_core::processes::{CoeffConfig, InnovationSpec, ProcessSpec, RecursionKind, Transform};
use periomax_core::processes::DEFAULT_BURN_IN;

use crate::config::{parse_f64_list, pick, Config};
use crate::errors::{CliError, CliResult};
use crate::report::Echo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessArg {
    /// Independent draws from the innovation law.
    Iid,
    /// Two-sided moving average with an optional pointwise transform.
    Linear,
    /// Autoregression of order one.
    Ar1,
    /// Threshold autoregression.
    Tar,
    /// GARCH(1,1) volatility recursion.
    Garch11,
    /// Bilinear recursion.
    Bilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InnovationArg {
    Gaussian,
    StudentT,
    TwoPoint,
    Pareto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffsArg {
    Geometric,
    Polynomial,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Identity,
    Abs,
    SoftClip,
    Cosine,
}

/// Flags describing the process model; every key mirrors a config key.
#[derive(Debug, Clone, clap::Args)]
pub struct ProcessFlags {
    /// Process family.
    #[arg(long, value_enum)]
    pub process: Option<ProcessArg>,
    /// Innovation law.
    #[arg(long, value_enum)]
    pub innovation: Option<InnovationArg>,
    /// Student t degrees of freedom (innovation student-t).
    #[arg(long)]
    pub nu: Option<f64>,
    /// Pareto tail exponent (innovation pareto).
    #[arg(long = "pareto-s")]
    pub pareto_s: Option<f64>,
    /// Coefficient family (process linear).
    #[arg(long, value_enum)]
    pub coeffs: Option<CoeffsArg>,
    /// Geometric coefficient ratio, a_j = rho^j.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Polynomial decay exponent, a_j = (1+j)^-kappa.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Polynomial coefficient count.
    #[arg(long)]
    pub len: Option<usize>,
    /// Smallest index of an explicit coefficient window.
    #[arg(long = "min-j")]
    pub min_j: Option<i64>,
    /// Explicit coefficients, comma separated.
    #[arg(long)]
    pub a: Option<String>,
    /// Pointwise transform of the linear filter output.
    #[arg(long, value_enum)]
    pub transform: Option<TransformArg>,
    /// Soft-clip level c (transform soft-clip).
    #[arg(long = "clip-c")]
    pub clip_c: Option<f64>,
    /// AR(1) coefficient.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Threshold AR coefficient on the positive branch.
    #[arg(long = "phi-pos")]
    pub phi_pos: Option<f64>,
    /// Threshold AR coefficient on the negative branch.
    #[arg(long = "phi-neg")]
    pub phi_neg: Option<f64>,
    /// GARCH(1,1) intercept.
    #[arg(long = "garch-omega")]
    pub garch_omega: Option<f64>,
    /// GARCH(1,1) squared-return weight.
    #[arg(long = "garch-alpha")]
    pub garch_alpha: Option<f64>,
    /// GARCH(1,1) variance persistence.
    #[arg(long = "garch-beta")]
    pub garch_beta: Option<f64>,
    /// Bilinear linear coefficient.
    #[arg(long = "bilinear-a")]
    pub bilinear_a: Option<f64>,
    /// Bilinear interaction coefficient.
    #[arg(long = "bilinear-b")]
    pub bilinear_b: Option<f64>,
    /// Recursion warm-up steps discarded before sampling.
    #[arg(long = "burn-in")]
    pub burn_in: Option<usize>,
}

impl ProcessFlags {
    /// Merges flags with config values and builds the declarative spec,
    /// echoing every resolved key that the chosen family uses.
    pub fn resolve(&self, cfg: &Config, echo: &mut Echo) -> CliResult<ProcessSpec> {
        let process = pick(self.process, cfg.value_enum("process")?, ProcessArg::Iid);
        let innovation = self.resolve_innovation(cfg, echo)?;
        echo.put(
            "process",
            process.to_possible_value().expect("no skipped variants").get_name(),
        );

        let spec = match process {
            ProcessArg::Iid => ProcessSpec::Iid { innovation },
            ProcessArg::Linear => {
                let coeffs = self.resolve_coeffs(cfg, echo)?;
                let transform = self.resolve_transform(cfg, echo)?;
                ProcessSpec::Linear { coeffs, innovation, transform }
            }
            ProcessArg::Ar1 => {
                let phi = pick(self.phi, cfg.f64("phi")?, 0.5);
                echo.put("phi", phi);
                self.recursion(RecursionKind::Ar1 { phi }, innovation, cfg, echo)?
            }
            ProcessArg::Tar => {
                let phi_pos = pick(self.phi_pos, cfg.f64("phi-pos")?, 0.4);
                let phi_neg = pick(self.phi_neg, cfg.f64("phi-neg")?, 0.2);
                echo.put("phi-pos", phi_pos);
                echo.put("phi-neg", phi_neg);
                self.recursion(RecursionKind::Tar { phi_pos, phi_neg }, innovation, cfg, echo)?
            }
            ProcessArg::Garch11 => {
                let omega = pick(self.garch_omega, cfg.f64("garch-omega")?, 0.1);
                let alpha = pick(self.garch_alpha, cfg.f64("garch-alpha")?, 0.05);
                let beta = pick(self.garch_beta, cfg.f64("garch-beta")?, 0.9);
                echo.put("garch-omega", omega);
                echo.put("garch-alpha", alpha);
                echo.put("garch-beta", beta);
                self.recursion(RecursionKind::Garch11 { omega, alpha, beta }, innovation, cfg, echo)?
            }
            ProcessArg::Bilinear => {
                let a = pick(self.bilinear_a, cfg.f64("bilinear-a")?, 0.5);
                let b = pick(self.bilinear_b, cfg.f64("bilinear-b")?, 0.3);
                echo.put("bilinear-a", a);
                echo.put("bilinear-b", b);
                self.recursion(RecursionKind::Bilinear { a, b }, innovation, cfg, echo)?
            }
        };
        Ok(spec)
    }

    fn resolve_innovation(&self, cfg: &Config, echo: &mut Echo) -> CliResult<InnovationSpec> {
        let arg = pick(self.innovation, cfg.value_enum("innovation")?, InnovationArg::Gaussian);
        let spec = match arg {
            InnovationArg::Gaussian => {
                echo.put("innovation", "gaussian");
                InnovationSpec::Gaussian
            }
            InnovationArg::StudentT => {
                let nu = pick(self.nu, cfg.f64("nu")?, 8.0);
                echo.put("innovation", "student-t");
                echo.put("nu", nu);
                InnovationSpec::StudentT { nu }
            }
            InnovationArg::TwoPoint => {
                echo.put("innovation", "two-point");
                InnovationSpec::TwoPoint
            }
            InnovationArg::Pareto => {
                let s = pick(self.pareto_s, cfg.f64("pareto-s")?, 4.0);
                echo.put("innovation", "pareto");
                echo.put("pareto-s", s);
                InnovationSpec::SymmetrizedPareto { s }
            }
        };
        Ok(spec)
    }

    fn resolve_coeffs(&self, cfg: &Config, echo: &mut Echo) -> CliResult<CoeffConfig> {
        let arg = pick(self.coeffs, cfg.value_enum("coeffs")?, CoeffsArg::Geometric);
        match arg {
            CoeffsArg::Geometric => {
                let rho = pick(self.rho, cfg.f64("rho")?, 0.5);
                echo.put("coeffs", "geometric");
                echo.put("rho", rho);
                Ok(CoeffConfig::Geometric { rho })
            }
            CoeffsArg::Polynomial => {
                let kappa = pick(self.kappa, cfg.f64("kappa")?, 2.0);
                let len = pick(self.len, cfg.usize("len")?, 64);
                echo.put("coeffs", "polynomial");
                echo.put("kappa", kappa);
                echo.put("len", len);
                Ok(CoeffConfig::Polynomial { kappa, len })
            }
            CoeffsArg::Explicit => {
                let text = self
                    .a
                    .clone()
                    .or(cfg.string("a")?)
                    .ok_or_else(|| {
                        CliError::Config("explicit coefficients need '--a v0,v1,...'".into())
                    })?;
                let a = parse_f64_list(&text, "--a")?;
                let min_j = pick(self.min_j, cfg.i64("min-j")?, 0);
                echo.put("coeffs", "explicit");
                echo.put("min-j", min_j);
                echo.put("a", &a);
                Ok(CoeffConfig::Explicit { min_j, a })
            }
        }
    }

    fn resolve_transform(&self, cfg: &Config, echo: &mut Echo) -> CliResult<Transform> {
        let arg = pick(self.transform, cfg.value_enum("transform")?, TransformArg::Identity);
        match arg {
            TransformArg::Identity => {
                echo.put("transform", "identity");
                Ok(Transform::Identity)
            }
            TransformArg::Abs => {
                echo.put("transform", "abs");
                Ok(Transform::Abs)
            }
            TransformArg::SoftClip => {
                let c = pick(self.clip_c, cfg.f64("clip-c")?, 1.0);
                echo.put("transform", "soft-clip");
                echo.put("clip-c", c);
                Ok(Transform::SoftClip { c })
            }
            TransformArg::Cosine => {
                echo.put("transform", "cosine");
                Ok(Transform::Cosine)
            }
        }
    }

    fn recursion(
        &self,
        kind: RecursionKind,
        innovation: InnovationSpec,
        cfg: &Config,
        echo: &mut Echo,
    ) -> CliResult<ProcessSpec> {
        let burn_in = pick(self.burn_in, cfg.usize("burn-in")?, DEFAULT_BURN_IN);
        echo.put("burn-in", burn_in);
        Ok(ProcessSpec::Recursion { kind, innovation, burn_in })
    }
}
