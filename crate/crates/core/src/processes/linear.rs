//! Two-sided truncated linear models with Lipschitz output transforms.
//!
//! `X_k = h(Y_k) - E h(Y)` with `Y_k = sum_{j} a_j eps_{k-j}` over a finite
//! coefficient window and iid unit-variance innovations. Generation retains
//! the innovation buffer so coupling and m-approximation diagnostics can
//! reuse the exact same draws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::approx::MApprox;
use crate::processes::innovations::{InnovationSampler, InnovationSpec};
use crate::processes::rng::SeedSpec;
use crate::series::{Provenance, TimeSeries, MIN_LEN};
use crate::spectral::LinearDensity;

/// Geometric coefficient tails are truncated once the remaining l1 mass
/// drops below this.
const GEOMETRIC_TAIL_TOL: f64 = 1e-8;
/// Hard cap on truncation length; geometric ratios too close to 1 are
/// rejected rather than silently under-truncated.
const MAX_TRUNCATION: usize = 100_000;
/// Draws used when a centering constant has no closed form.
const CENTER_MC_DRAWS: usize = 1_000_000;
/// Fixed stream for centering estimation, so a model's center is a pure
/// function of its parameters.
const CENTER_MC_SEED: SeedSpec = SeedSpec { master: 0x7065_7269_6f6d_6178, stream: 0x6365_6e74 };

/// Lipschitz output transform; every variant has Lipschitz constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Identity,
    Abs,
    /// Smooth clip `c tanh(y/c)`, c > 0.
    SoftClip { c: f64 },
    Cosine,
}

impl Transform {
    pub fn apply(&self, y: f64) -> f64 {
        match *self {
            Transform::Identity => y,
            Transform::Abs => y.abs(),
            Transform::SoftClip { c } => c * (y / c).tanh(),
            Transform::Cosine => y.cos(),
        }
    }

    pub fn lipschitz(&self) -> f64 {
        1.0
    }

    fn validate(&self) -> Result<()> {
        if let Transform::SoftClip { c } = *self {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "soft clip level must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Declarative coefficient description, as it appears in configuration
/// files; `build` turns it into a concrete truncated window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CoeffConfig {
    Geometric { rho: f64 },
    Polynomial { kappa: f64, len: usize },
    Explicit { min_j: i64, a: Vec<f64> },
}

impl CoeffConfig {
    pub fn build(&self) -> Result<CoeffSpec> {
        match self {
            CoeffConfig::Geometric { rho } => CoeffSpec::geometric(*rho),
            CoeffConfig::Polynomial { kappa, len } => CoeffSpec::polynomial(*kappa, *len),
            CoeffConfig::Explicit { min_j, a } => CoeffSpec::explicit(*min_j, a.clone()),
        }
    }
}

/// Tail behavior tag of a coefficient sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffFamily {
    /// `a_j = rho^j`, j >= 0; the analytic tail survives truncation.
    Geometric { rho: f64 },
    /// `a_j = (1+j)^-kappa`, j >= 0, kappa > 1.
    Polynomial { kappa: f64 },
    /// Arbitrary finite window; zero outside.
    Explicit,
}

/// Finite two-sided coefficient window `a_j`, `j in [min_j, max_j]`, with a
/// family tag describing the (possibly infinite) ideal tail.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSpec {
    min_j: i64,
    a: Vec<f64>,
    family: CoeffFamily,
}

impl CoeffSpec {
    /// Causal geometric coefficients truncated where the remaining l1 mass
    /// drops below 1e-8.
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidArgument(format!("geometric ratio must lie in (0,1), got {rho}")));
        }
        // Smallest L with rho^(L+1)/(1-rho) <= tol.
        let len = ((GEOMETRIC_TAIL_TOL * (1.0 - rho)).ln() / rho.ln()).ceil() as usize;
        if len > MAX_TRUNCATION {
            return Err(Error::InvalidArgument(format!(
                "geometric ratio {rho} needs truncation length {len}, beyond the supported {MAX_TRUNCATION}"
            )));
        }
        let a = (0..len).map(|j| rho.powi(j as i32)).collect();
        Ok(Self { min_j: 0, a, family: CoeffFamily::Geometric { rho } })
    }

    /// Causal polynomial coefficients `(1+j)^-kappa` over j = 0..len-1.
    pub fn polynomial(kappa: f64, len: usize) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "polynomial decay needs kappa > 1 for summability, got {kappa}"
            )));
        }
        if len == 0 || len > MAX_TRUNCATION {
            return Err(Error::InvalidArgument(format!("unsupported truncation length {len}")));
        }
        let a = (0..len).map(|j| (1.0 + j as f64).powf(-kappa)).collect();
        Ok(Self { min_j: 0, a, family: CoeffFamily::Polynomial { kappa } })
    }

    /// Arbitrary finite window starting at offset `min_j`.
    pub fn explicit(min_j: i64, a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("coefficient list is empty".into()));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite coefficient".into()));
        }
        Ok(Self { min_j, a, family: CoeffFamily::Explicit })
    }

    pub fn family(&self) -> CoeffFamily {
        self.family
    }

    /// Inclusive stored support `[min_j, max_j]`.
    pub fn support(&self) -> (i64, i64) {
        (self.min_j, self.min_j + self.a.len() as i64 - 1)
    }

    /// Coefficient at offset j; zero outside the stored window.
    pub fn get(&self, j: i64) -> f64 {
        let idx = j - self.min_j;
        if idx < 0 || idx >= self.a.len() as i64 {
            0.0
        } else {
            self.a[idx as usize]
        }
    }

    pub fn sum_sq(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum()
    }

    pub fn l1(&self) -> f64 {
        self.a.iter().map(|v| v.abs()).sum()
    }

    /// `sum_{|j| >= n} |a_j|` of the ideal (untruncated) family; analytic
    /// beyond the stored window, an integral upper bound for polynomial
    /// tails.
    pub fn abs_tail(&self, n: usize) -> f64 {
        match self.family {
            CoeffFamily::Geometric { rho } => rho.powi(n as i32) / (1.0 - rho),
            CoeffFamily::Polynomial { kappa } => {
                let len = self.a.len();
                let explicit: f64 =
                    (n..len).map(|j| (1.0 + j as f64).powf(-kappa)).sum();
                let from = len.max(n) as f64;
                explicit + from.powf(1.0 - kappa) / (kappa - 1.0)
            }
            CoeffFamily::Explicit => {
                let (lo, hi) = self.support();
                let mut s = 0.0;
                for j in lo..=hi {
                    if j.unsigned_abs() as usize >= n {
                        s += self.get(j).abs();
                    }
                }
                s
            }
        }
    }

    /// Closed-form spectral density of the linear process with these
    /// coefficients and innovation variance `sigma2`.
    pub fn density(&self, sigma2: f64) -> Result<LinearDensity> {
        LinearDensity::new(self.min_j, self.a.clone(), sigma2)
    }
}

/// How the centering constant `E h(Y)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Centering {
    Exact { value: f64 },
    Estimated { value: f64, draws: usize },
}

impl Centering {
    pub fn value(&self) -> f64 {
        match *self {
            Centering::Exact { value } | Centering::Estimated { value, .. } => value,
        }
    }
}

/// Transformed linear model `X_k = h(sum_j a_j eps_{k-j}) - E h(Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    coeffs: CoeffSpec,
    innovation: InnovationSpec,
    transform: Transform,
    center: Centering,
}

impl LinearModel {
    /// Validates the parts and fixes the centering constant: exact where a
    /// closed form exists (identity; gaussian abs/cosine; single-coefficient
    /// two-point), otherwise a cached fixed-seed Monte Carlo estimate.
    pub fn new(
        coeffs: CoeffSpec,
        innovation: InnovationSpec,
        transform: Transform,
    ) -> Result<Self> {
        innovation.validate()?;
        transform.validate()?;
        let center = Self::centering(&coeffs, &innovation, &transform)?;
        Ok(Self { coeffs, innovation, transform, center })
    }

    /// The iid model: single unit coefficient, identity transform.
    pub fn iid(innovation: InnovationSpec) -> Result<Self> {
        Self::new(CoeffSpec::explicit(0, vec![1.0])?, innovation, Transform::Identity)
    }

    fn centering(
        coeffs: &CoeffSpec,
        innovation: &InnovationSpec,
        transform: &Transform,
    ) -> Result<Centering> {
        if matches!(transform, Transform::Identity) {
            return Ok(Centering::Exact { value: 0.0 });
        }
        if matches!(innovation, InnovationSpec::Gaussian) {
            // Y is gaussian with variance sum a_j^2.
            let var = coeffs.sum_sq();
            match transform {
                Transform::Abs => {
                    let value = var.sqrt() * (2.0 / std::f64::consts::PI).sqrt();
                    return Ok(Centering::Exact { value });
                }
                Transform::Cosine => {
                    return Ok(Centering::Exact { value: (-var / 2.0).exp() });
                }
                _ => {}
            }
        }
        if coeffs.a.len() == 1 && matches!(innovation, InnovationSpec::TwoPoint) {
            let a0 = coeffs.a[0];
            let value = 0.5 * (transform.apply(a0) + transform.apply(-a0));
            return Ok(Centering::Exact { value });
        }
        // No closed form: estimate E h(Y) once from fresh iid copies of Y.
        let sampler = InnovationSampler::new(innovation)?;
        let mut rng = CENTER_MC_SEED.rng();
        let mut acc = 0.0;
        for _ in 0..CENTER_MC_DRAWS {
            let mut y = 0.0;
            for &aj in &coeffs.a {
                y += aj * sampler.sample(&mut rng);
            }
            acc += transform.apply(y);
        }
        Ok(Centering::Estimated { value: acc / CENTER_MC_DRAWS as f64, draws: CENTER_MC_DRAWS })
    }

    pub fn coeffs(&self) -> &CoeffSpec {
        &self.coeffs
    }

    pub fn innovation(&self) -> &InnovationSpec {
        &self.innovation
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    pub fn center(&self) -> Centering {
        self.center
    }

    /// Closed-form spectral density; only the identity transform leaves the
    /// linear second-order structure intact.
    pub fn density(&self) -> Result<LinearDensity> {
        if !matches!(self.transform, Transform::Identity) {
            return Err(Error::InvalidArgument(
                "closed-form density requires the identity transform".into(),
            ));
        }
        self.coeffs.density(1.0)
    }

    /// Exact physical dependence coefficient at lag k for the identity
    /// transform: replacing eps_0 by an independent copy moves X_k by
    /// `a_k (eps_0 - eps_0*)`, whose L2 norm is `|a_k| sqrt(2)`.
    pub fn exact_theta_l2(&self, k: i64) -> Result<f64> {
        if !matches!(self.transform, Transform::Identity) {
            return Err(Error::InvalidArgument(
                "exact theta requires the identity transform".into(),
            ));
        }
        Ok(self.coeffs.get(k).abs() * std::f64::consts::SQRT_2)
    }
}

/// Generated series plus the innovation buffer that produced it, indexed in
/// observation time: `eps(t)` for `t in [1 - max_j, n - min_j]`.
#[derive(Debug, Clone)]
pub struct LinearSample {
    series: TimeSeries,
    eps: Vec<f64>,
    eps_lo: i64,
}

impl LinearSample {
    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn into_series(self) -> TimeSeries {
        self.series
    }

    pub fn eps(&self, t: i64) -> f64 {
        self.eps[(t - self.eps_lo) as usize]
    }

    /// Inclusive index range of the retained buffer.
    pub fn eps_range(&self) -> (i64, i64) {
        (self.eps_lo, self.eps_lo + self.eps.len() as i64 - 1)
    }
}

/// Simulates `X_1..X_n`, retaining the innovation buffer (length n plus the
/// window overhang on both sides).
pub fn gen_linear(model: &LinearModel, n: usize, seed: SeedSpec) -> Result<LinearSample> {
    if n < MIN_LEN {
        return Err(Error::InvalidLength { got: n, min: MIN_LEN });
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let (jmin, jmax) = model.coeffs.support();
    let eps_lo = 1 - jmax;
    let eps_hi = n as i64 - jmin;
    let mut rng = seed.rng();
    let eps: Vec<f64> =
        (eps_lo..=eps_hi).map(|_| sampler.sample(&mut rng)).collect();
    let center = model.center.value();
    let values = (1..=n as i64)
        .map(|k| {
            let mut y = 0.0;
            for (idx, &aj) in model.coeffs.a.iter().enumerate() {
                let j = jmin + idx as i64;
                y += aj * eps[(k - j - eps_lo) as usize];
            }
            model.transform.apply(y) - center
        })
        .collect();
    let series = TimeSeries::with_provenance(
        values,
        Provenance::Simulated { master: seed.master, stream: seed.stream },
    )?;
    Ok(LinearSample { series, eps, eps_lo })
}

/// m-dependent approximation `X_k(m) = E[X_k | eps_{k-m}..eps_{k+m}]` on the
/// retained buffer.
///
/// Exact truncation for the identity transform. Otherwise conditional Monte
/// Carlo: the out-of-window innovation sum is redrawn `cond_reps` times
/// (shared across k) and `h` is averaged over the redraws. `mc_se` reports
/// the root-mean-square Monte Carlo standard error of the conditional means;
/// a warning is attached when it exceeds 1% of the sample standard deviation
/// of the series.
pub fn m_approx_linear(
    model: &LinearModel,
    sample: &LinearSample,
    m: usize,
    cond_reps: usize,
    seed: SeedSpec,
) -> Result<MApprox> {
    let n = sample.series().len() as i64;
    let (jmin, jmax) = model.coeffs.support();
    let mi = m as i64;
    let wlo = jmin.max(-mi);
    let whi = jmax.min(mi);
    let in_window =
        |j: i64| -> bool { j >= wlo && j <= whi };
    let provenance = sample.series().provenance();

    if matches!(model.transform, Transform::Identity) {
        let values: Vec<f64> = (1..=n)
            .map(|k| {
                let mut y = 0.0;
                for j in wlo..=whi {
                    y += model.coeffs.get(j) * sample.eps(k - j);
                }
                y
            })
            .collect();
        let series = TimeSeries::with_provenance(values, provenance)?;
        return Ok(MApprox { series, mc_se: None, warning: None });
    }

    let outside: Vec<i64> = (jmin..=jmax).filter(|&j| !in_window(j)).collect();
    if outside.is_empty() {
        // The window covers the whole filter: X(m) = X exactly.
        return Ok(MApprox { series: sample.series().clone(), mc_se: None, warning: None });
    }
    if cond_reps == 0 {
        return Err(Error::InvalidArgument(
            "conditional Monte Carlo needs at least one redraw".into(),
        ));
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let mut rng = seed.rng();
    let tails: Vec<f64> = (0..cond_reps)
        .map(|_| {
            outside.iter().map(|&j| model.coeffs.get(j) * sampler.sample(&mut rng)).sum()
        })
        .collect();
    let center = model.center.value();
    let r = cond_reps as f64;
    let mut values = Vec::with_capacity(n as usize);
    let mut se_sq_acc = 0.0;
    for k in 1..=n {
        let mut w = 0.0;
        for j in wlo..=whi {
            w += model.coeffs.get(j) * sample.eps(k - j);
        }
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for &t in &tails {
            let v = model.transform.apply(w + t);
            sum += v;
            sum_sq += v * v;
        }
        values.push(sum / r - center);
        if cond_reps >= 2 {
            let var = (sum_sq - sum * sum / r).max(0.0) / (r - 1.0);
            se_sq_acc += var / r;
        }
    }
    let series = TimeSeries::with_provenance(values, provenance)?;
    let (mc_se, warning) = if cond_reps >= 2 {
        let rms_se = (se_sq_acc / n as f64).sqrt();
        let x = sample.series().values();
        let mean = sample.series().mean();
        let sd = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64).sqrt();
        let warning = (rms_se > 0.01 * sd).then(|| {
            format!(
                "conditional Monte Carlo error {rms_se:.3e} exceeds 1% of the series sd {sd:.3e}; increase cond_reps"
            )
        });
        (Some(rms_se), warning)
    } else {
        (None, Some("cond_reps too small to estimate the Monte Carlo error".into()))
    };
    Ok(MApprox { series, mc_se, warning })
}
