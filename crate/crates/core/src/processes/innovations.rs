//! Innovation laws: mean zero, unit variance by construction.
//!
//! Each law also knows its truncated second moment `E[eps^2 1{|eps| >= t}]`
//! in closed or quadrature form; those feed the summability condition
//! checks. The symmetrized Pareto law is representable down to tail exponent
//! s = 2 (where its variance is infinite and condition checks must fail) but
//! is sampleable only for s > 2, where unit-variance standardization exists.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::processes::rng::SeedSpec;

/// Innovation law, standardized to mean 0 and variance 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnovationSpec {
    Gaussian,
    /// Student t with nu > 2 degrees of freedom, scaled by sqrt((nu-2)/nu).
    StudentT { nu: f64 },
    /// Symmetric two-point law on {-1, +1}.
    TwoPoint,
    /// Pareto magnitude `U^(-1/s)` with a random sign, scaled by
    /// sqrt((s-2)/s); tail exponent s >= 2.
    SymmetrizedPareto { s: f64 },
}

impl InnovationSpec {
    /// Domain check for merely representing the law.
    pub fn validate(&self) -> Result<()> {
        match *self {
            InnovationSpec::Gaussian | InnovationSpec::TwoPoint => Ok(()),
            InnovationSpec::StudentT { nu } => {
                if nu.is_finite() && nu > 2.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!(
                        "student t needs nu > 2 for unit variance, got {nu}"
                    )))
                }
            }
            InnovationSpec::SymmetrizedPareto { s } => {
                if s.is_finite() && s >= 2.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!(
                        "symmetrized pareto needs tail exponent s >= 2, got {s}"
                    )))
                }
            }
        }
    }

    /// Domain check for drawing samples; stricter than `validate` only for
    /// the Pareto boundary s = 2, which has no unit-variance scaling.
    pub fn validate_for_sampling(&self) -> Result<()> {
        self.validate()?;
        if let InnovationSpec::SymmetrizedPareto { s } = *self {
            if s <= 2.0 {
                return Err(Error::InvalidArgument(
                    "symmetrized pareto with s = 2 has infinite variance and cannot be sampled"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    /// `E[eps^2 1{|eps| >= t}]`; infinite for the Pareto boundary s = 2.
    pub fn tail_second_moment(&self, t: f64) -> f64 {
        match *self {
            InnovationSpec::Gaussian => {
                if t <= 0.0 {
                    1.0
                } else {
                    let phi = (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
                    let upper = 0.5 * libm::erfc(t / std::f64::consts::SQRT_2);
                    2.0 * (t * phi + upper)
                }
            }
            InnovationSpec::TwoPoint => {
                if t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            InnovationSpec::StudentT { nu } => {
                let scale = (nu / (nu - 2.0)).sqrt();
                (nu - 2.0) / nu * t_raw_tail_second_moment(nu, t * scale)
            }
            InnovationSpec::SymmetrizedPareto { s } => {
                if s <= 2.0 {
                    f64::INFINITY
                } else {
                    // |eps| >= t iff the raw magnitude exceeds
                    // u = max(1, t sqrt(s/(s-2))), and the scaled tail moment
                    // collapses to u^(2-s).
                    let u = (t * (s / (s - 2.0)).sqrt()).max(1.0);
                    u.powf(2.0 - s)
                }
            }
        }
    }

    /// Whether `E|eps|^p` is finite.
    pub fn has_abs_moment(&self, p: f64) -> bool {
        match *self {
            InnovationSpec::Gaussian | InnovationSpec::TwoPoint => true,
            InnovationSpec::StudentT { nu } => p < nu,
            InnovationSpec::SymmetrizedPareto { s } => p < s,
        }
    }

    /// `E[eps^4]` when finite.
    pub fn fourth_moment(&self) -> Option<f64> {
        match *self {
            InnovationSpec::Gaussian => Some(3.0),
            InnovationSpec::TwoPoint => Some(1.0),
            InnovationSpec::StudentT { nu } => {
                (nu > 4.0).then(|| 3.0 * (nu - 2.0) / (nu - 4.0))
            }
            InnovationSpec::SymmetrizedPareto { s } => {
                (s > 4.0).then(|| (s - 2.0) * (s - 2.0) / (s * (s - 4.0)))
            }
        }
    }
}

/// Prepared sampler; constructing a law's distribution once keeps the inner
/// generation loops cheap.
#[derive(Debug, Clone)]
pub struct InnovationSampler {
    inner: SamplerImpl,
}

#[derive(Debug, Clone)]
enum SamplerImpl {
    Gaussian,
    StudentT { dist: StudentT<f64>, scale: f64 },
    TwoPoint,
    Pareto { inv_s: f64, inv_scale: f64 },
}

impl InnovationSampler {
    pub fn new(spec: &InnovationSpec) -> Result<Self> {
        spec.validate_for_sampling()?;
        let inner = match *spec {
            InnovationSpec::Gaussian => SamplerImpl::Gaussian,
            InnovationSpec::StudentT { nu } => SamplerImpl::StudentT {
                dist: StudentT::new(nu)
                    .map_err(|e| Error::InvalidArgument(format!("student t: {e}")))?,
                scale: ((nu - 2.0) / nu).sqrt(),
            },
            InnovationSpec::TwoPoint => SamplerImpl::TwoPoint,
            InnovationSpec::SymmetrizedPareto { s } => SamplerImpl::Pareto {
                inv_s: 1.0 / s,
                inv_scale: ((s - 2.0) / s).sqrt(),
            },
        };
        Ok(Self { inner })
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match &self.inner {
            SamplerImpl::Gaussian => StandardNormal.sample(rng),
            SamplerImpl::StudentT { dist, scale } => dist.sample(rng) * scale,
            SamplerImpl::TwoPoint => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            SamplerImpl::Pareto { inv_s, inv_scale } => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                // 1 - U lies in (0, 1], so the magnitude is finite.
                let u = 1.0 - rng.random::<f64>();
                sign * u.powf(-inv_s) * inv_scale
            }
        }
    }
}

/// Draws `count` iid innovations from the stream.
pub fn gen_innovations(spec: &InnovationSpec, count: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    let sampler = InnovationSampler::new(spec)?;
    let mut rng = seed.rng();
    Ok((0..count).map(|_| sampler.sample(&mut rng)).collect())
}

/// `E[X^2 1{|X| >= u}]` for a raw (unscaled) Student t with nu > 2.
///
/// Via `z = nu/(nu + x^2)` and then `z = y^(2/(nu-2))` the integral becomes
/// `C nu^(3/2) * 2/(nu-2) * int_0^{y_u} sqrt(1 - y^(2/(nu-2))) dy`, a smooth
/// integrand handled by composite Simpson.
fn t_raw_tail_second_moment(nu: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return nu / (nu - 2.0);
    }
    let log_c = libm::lgamma((nu + 1.0) / 2.0) - libm::lgamma(nu / 2.0) - 0.5 * (nu * PI).ln();
    let zu = nu / (nu + u * u);
    let yu = zu.powf((nu - 2.0) / 2.0);
    let e = 2.0 / (nu - 2.0);
    let integral = simpson(|y| (1.0 - y.powf(e)).max(0.0).sqrt(), 0.0, yu, 8192);
    log_c.exp() * nu.powf(1.5) * e * integral
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    if h <= 0.0 {
        return 0.0;
    }
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
