//! Nonlinear recursions driven by iid innovations: AR(1), threshold AR,
//! GARCH(1,1), and the bilinear model.
//!
//! Each recursion starts from the zero state and discards a burn-in prefix,
//! retaining the innovation buffer so coupling and conditional-expectation
//! diagnostics can replay the exact draws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::approx::MApprox;
use crate::processes::innovations::{InnovationSampler, InnovationSpec};
use crate::processes::rng::SeedSpec;
use crate::series::{Provenance, TimeSeries, MIN_LEN};

pub const DEFAULT_BURN_IN: usize = 500;

/// Draws used to check the bilinear stationarity condition
/// `E log|a + b eps| < 0` numerically at construction.
const BILINEAR_CHECK_DRAWS: usize = 200_000;
const BILINEAR_CHECK_SEED: SeedSpec = SeedSpec { master: 0x6269_6c69_6e65_6172, stream: 0 };

/// The recursion map. All variants are driven by unit-variance innovations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecursionKind {
    /// `X_t = phi X_{t-1} + eps_t`, |phi| < 1.
    Ar1 { phi: f64 },
    /// `X_t = phi_pos max(X_{t-1}, 0) + phi_neg min(X_{t-1}, 0) + eps_t`.
    Tar { phi_pos: f64, phi_neg: f64 },
    /// `X_t = sigma_t eps_t`, `sigma_t^2 = omega + alpha X_{t-1}^2 + beta
    /// sigma_{t-1}^2`.
    Garch11 { omega: f64, alpha: f64, beta: f64 },
    /// `X_t = (a + b eps_t) X_{t-1} + eps_t` with `E log|a + b eps| < 0`.
    Bilinear { a: f64, b: f64 },
}

/// A validated recursion: map, innovation law, and burn-in length.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionModel {
    kind: RecursionKind,
    innovation: InnovationSpec,
    burn_in: usize,
}

impl RecursionModel {
    pub fn new(kind: RecursionKind, innovation: InnovationSpec) -> Result<Self> {
        Self::with_burn_in(kind, innovation, DEFAULT_BURN_IN)
    }

    pub fn with_burn_in(
        kind: RecursionKind,
        innovation: InnovationSpec,
        burn_in: usize,
    ) -> Result<Self> {
        innovation.validate()?;
        if burn_in == 0 {
            return Err(Error::InvalidArgument("burn-in must be at least 1".into()));
        }
        match kind {
            RecursionKind::Ar1 { phi } => {
                if !(phi.is_finite() && phi.abs() < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "ar1 needs |phi| < 1, got {phi}"
                    )));
                }
            }
            RecursionKind::Tar { phi_pos, phi_neg } => {
                if !(phi_pos.is_finite()
                    && phi_neg.is_finite()
                    && phi_pos.abs().max(phi_neg.abs()) < 1.0)
                {
                    return Err(Error::InvalidArgument(format!(
                        "tar needs |phi| < 1 in both regimes, got ({phi_pos}, {phi_neg})"
                    )));
                }
            }
            RecursionKind::Garch11 { omega, alpha, beta } => {
                if !(omega.is_finite() && omega > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "garch11 needs omega > 0, got {omega}"
                    )));
                }
                if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "garch11 needs alpha, beta >= 0 and alpha + beta < 1, got ({alpha}, {beta})"
                    )));
                }
            }
            RecursionKind::Bilinear { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidArgument("bilinear parameters must be finite".into()));
                }
                // Stationarity has no algebraic form across laws; estimate
                // E log|a + b eps| from a large fixed-seed sample.
                let sampler = InnovationSampler::new(&innovation)?;
                let mut rng = BILINEAR_CHECK_SEED.rng();
                let mut acc = 0.0;
                for _ in 0..BILINEAR_CHECK_DRAWS {
                    acc += (a + b * sampler.sample(&mut rng)).abs().ln();
                }
                let mean_log = acc / BILINEAR_CHECK_DRAWS as f64;
                if mean_log >= 0.0 || mean_log.is_nan() {
                    return Err(Error::InvalidArgument(format!(
                        "bilinear({a}, {b}) is not contracting: E log|a + b eps| ~ {mean_log:.4} >= 0"
                    )));
                }
            }
        }
        Ok(Self { kind, innovation, burn_in })
    }

    pub fn kind(&self) -> RecursionKind {
        self.kind
    }

    pub fn innovation(&self) -> &InnovationSpec {
        &self.innovation
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    /// Whether `E X^4` is finite, when decidable from the innovation's
    /// moments; `None` means unknown.
    pub fn fourth_moment_finite(&self) -> Option<bool> {
        let eps4 = self.innovation.fourth_moment();
        match self.kind {
            RecursionKind::Ar1 { .. } | RecursionKind::Tar { .. } => {
                // Linear-envelope contraction: the fourth moment of X is
                // finite exactly when the innovation's is.
                Some(eps4.is_some())
            }
            RecursionKind::Garch11 { alpha, beta, .. } => match eps4 {
                // E(beta + alpha eps^2)^2 < 1 is the classical criterion.
                Some(m4) => Some(beta * beta + 2.0 * alpha * beta + alpha * alpha * m4 < 1.0),
                None => Some(false),
            },
            RecursionKind::Bilinear { a, b } => match eps4 {
                // Symmetric laws: E(a + b eps)^4 = a^4 + 6 a^2 b^2 + b^4 m4.
                Some(m4) => {
                    let c4 = a.powi(4) + 6.0 * a * a * b * b + b.powi(4) * m4;
                    Some(c4 < 1.0)
                }
                None => Some(false),
            },
        }
    }

    /// Per-step L2 contraction factor of the coupling gap, when one is
    /// available; dependence tails decay geometrically at this rate.
    pub fn contraction_factor(&self) -> Option<f64> {
        match self.kind {
            RecursionKind::Ar1 { phi } => Some(phi.abs()),
            RecursionKind::Tar { phi_pos, phi_neg } => Some(phi_pos.abs().max(phi_neg.abs())),
            RecursionKind::Garch11 { alpha, beta, .. } => {
                // The squared-volatility gap contracts in L2 at rate
                // E(beta + alpha eps^2)^2 per step; the X-gap picks up a
                // square root twice.
                let m4 = self.innovation.fourth_moment()?;
                let r = beta * beta + 2.0 * alpha * beta + alpha * alpha * m4;
                (r < 1.0).then(|| r.powf(0.25))
            }
            RecursionKind::Bilinear { a, b } => {
                // Exact: the gap multiplies by an independent (a + b eps),
                // whose second moment is a^2 + b^2.
                let r2 = a * a + b * b;
                (r2 < 1.0).then(|| r2.sqrt())
            }
        }
    }

    /// One step of the recursion: (previous x, previous sigma^2, innovation)
    /// to (x, sigma^2). Only garch11 uses the volatility slot.
    pub(crate) fn step(&self, x_prev: f64, sigma2_prev: f64, eps: f64) -> (f64, f64) {
        match self.kind {
            RecursionKind::Ar1 { phi } => (phi * x_prev + eps, 0.0),
            RecursionKind::Tar { phi_pos, phi_neg } => {
                (phi_pos * x_prev.max(0.0) + phi_neg * x_prev.min(0.0) + eps, 0.0)
            }
            RecursionKind::Garch11 { omega, alpha, beta } => {
                let sigma2 = omega + alpha * x_prev * x_prev + beta * sigma2_prev;
                (sigma2.sqrt() * eps, sigma2)
            }
            RecursionKind::Bilinear { a, b } => ((a + b * eps) * x_prev + eps, 0.0),
        }
    }
}

/// Generated recursion path plus the innovation buffer that produced it;
/// `eps(t)` is defined for `t in [1 - burn_in, n]`.
#[derive(Debug, Clone)]
pub struct RecursionSample {
    series: TimeSeries,
    eps: Vec<f64>,
    eps_lo: i64,
}

impl RecursionSample {
    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn into_series(self) -> TimeSeries {
        self.series
    }

    pub fn eps(&self, t: i64) -> f64 {
        self.eps[(t - self.eps_lo) as usize]
    }

    pub fn eps_range(&self) -> (i64, i64) {
        (self.eps_lo, self.eps_lo + self.eps.len() as i64 - 1)
    }
}

/// Iterates the recursion from the zero state, discarding the burn-in.
pub fn gen_recursion(model: &RecursionModel, n: usize, seed: SeedSpec) -> Result<RecursionSample> {
    if n < MIN_LEN {
        return Err(Error::InvalidLength { got: n, min: MIN_LEN });
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let mut rng = seed.rng();
    let total = model.burn_in + n;
    let eps: Vec<f64> = (0..total).map(|_| sampler.sample(&mut rng)).collect();
    let (mut x, mut sigma2) = (0.0, 0.0);
    let mut values = Vec::with_capacity(n);
    for (i, &e) in eps.iter().enumerate() {
        let (nx, ns) = model.step(x, sigma2, e);
        x = nx;
        sigma2 = ns;
        if i >= model.burn_in {
            values.push(x);
        }
    }
    let series = TimeSeries::with_provenance(
        values,
        Provenance::Simulated { master: seed.master, stream: seed.stream },
    )?;
    Ok(RecursionSample { series, eps, eps_lo: 1 - model.burn_in as i64 })
}

/// Conditional-expectation approximation `X_k(m) = E[X_k | eps_{k-m}..eps_k]`
/// for recursions, by Monte Carlo: the pre-window past is redrawn
/// `cond_reps` times from the stationary generator (fresh burn-in from the
/// zero state), the fixed window innovations are then applied, and the
/// resulting endpoints are averaged.
pub fn m_approx_recursion(
    model: &RecursionModel,
    sample: &RecursionSample,
    m: usize,
    cond_reps: usize,
    seed: SeedSpec,
) -> Result<MApprox> {
    if cond_reps < 100 {
        return Err(Error::InvalidArgument(format!(
            "recursion conditional expectations need at least 100 redraws, got {cond_reps}"
        )));
    }
    if m > model.burn_in {
        return Err(Error::InvalidArgument(format!(
            "window m = {m} exceeds the retained burn-in {}",
            model.burn_in
        )));
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let n = sample.series().len() as i64;
    let r = cond_reps as f64;
    let mut values = Vec::with_capacity(n as usize);
    let mut se_sq_acc = 0.0;
    let mut rng = seed.rng();
    for k in 1..=n {
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..cond_reps {
            let (mut x, mut sigma2) = (0.0, 0.0);
            for _ in 0..model.burn_in {
                let (nx, ns) = model.step(x, sigma2, sampler.sample(&mut rng));
                x = nx;
                sigma2 = ns;
            }
            for t in (k - m as i64)..=k {
                let (nx, ns) = model.step(x, sigma2, sample.eps(t));
                x = nx;
                sigma2 = ns;
            }
            sum += x;
            sum_sq += x * x;
        }
        values.push(sum / r);
        let var = (sum_sq - sum * sum / r).max(0.0) / (r - 1.0);
        se_sq_acc += var / r;
    }
    let series = TimeSeries::with_provenance(values, sample.series().provenance())?;
    let rms_se = (se_sq_acc / n as f64).sqrt();
    let x = sample.series().values();
    let mean = sample.series().mean();
    let sd = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64).sqrt();
    let warning = (rms_se > 0.01 * sd).then(|| {
        format!(
            "conditional Monte Carlo error {rms_se:.3e} exceeds 1% of the series sd {sd:.3e}; increase cond_reps"
        )
    });
    Ok(MApprox { series, mc_se: Some(rms_se), warning })
}
