//! Coupling-based dependence measures.
//!
//! The dependence of `X_k` on the time-0 innovation is measured by the Lp
//! distance between `X_k` and the coupled copy `X*_k` generated from the same
//! innovations except for an independent replacement at time 0. Profiles
//! collect these distances over k together with a tail tag so the tail sums
//! `Theta_{n,p} = sum_{i >= n} theta_i` extrapolate analytically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::innovations::{InnovationSampler, InnovationSpec};
use crate::processes::linear::{CoeffFamily, CoeffSpec, LinearModel, Transform};
use crate::processes::recursion::RecursionModel;
use crate::processes::rng::SeedSpec;

/// A Monte Carlo estimate of `theta_{k,p}` with a delta-method standard
/// error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub value: f64,
    pub std_error: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaSource {
    ExactLinear,
    MonteCarlo,
}

/// How the profile continues beyond its last stored index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailFamily {
    /// theta is exactly zero beyond the stored indices.
    FiniteSupport,
    /// theta_k decays like rho^k.
    Geometric { rho: f64 },
    /// theta_k decays like k^-kappa, kappa > 1.
    Polynomial { kappa: f64 },
    /// Nothing is known beyond the stored indices.
    Untagged,
}

/// `theta_{k,p}` for k = 0..K plus a tail tag. For two-sided linear models
/// the entry at distance k folds both directions (|a_k| + |a_{-k}|), which is
/// the quantity entering the two-sided window bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependenceProfile {
    p: f64,
    theta: Vec<f64>,
    source: ThetaSource,
    tail: TailFamily,
}

/// `||eps - eps*||_p` for two independent copies of the law, where a closed
/// form exists: p = 2 for every unit-variance law, p = 4 whenever the fourth
/// moment is finite.
pub fn innovation_diff_norm(spec: &InnovationSpec, p: f64) -> Option<f64> {
    if p == 2.0 {
        return Some(std::f64::consts::SQRT_2);
    }
    if p == 4.0 {
        // E(eps - eps*)^4 = 2 m4 + 6 for mean-zero unit-variance copies.
        return spec.fourth_moment().map(|m4| (2.0 * m4 + 6.0).powf(0.25));
    }
    None
}

impl DependenceProfile {
    pub fn new(p: f64, theta: Vec<f64>, source: ThetaSource, tail: TailFamily) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidArgument(format!("moment order must be >= 1, got {p}")));
        }
        if theta.is_empty() {
            return Err(Error::InvalidArgument("profile needs at least theta_0".into()));
        }
        if theta.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidData("theta values must be finite and nonnegative".into()));
        }
        if let TailFamily::Geometric { rho } = tail {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "geometric tail ratio must lie in (0,1), got {rho}"
                )));
            }
        }
        if let TailFamily::Polynomial { kappa } = tail {
            if !(kappa.is_finite() && kappa > 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "polynomial tail needs kappa > 1, got {kappa}"
                )));
            }
        }
        Ok(Self { p, theta, source, tail })
    }

    /// Exact profile for an identity-transform linear model:
    /// `theta_{k,p} = |a_k| ||eps - eps*||_p`, folded over both directions.
    pub fn exact_linear(model: &LinearModel, p: f64) -> Result<Self> {
        if !matches!(model.transform(), Transform::Identity) {
            return Err(Error::InvalidArgument(
                "exact profiles require the identity transform".into(),
            ));
        }
        Self::from_coeffs(model.coeffs(), model.innovation(), p)
    }

    /// Profile built from a coefficient window; for non-identity Lipschitz
    /// transforms these values are upper bounds rather than exact distances.
    pub fn from_coeffs(coeffs: &CoeffSpec, innovation: &InnovationSpec, p: f64) -> Result<Self> {
        let norm = innovation_diff_norm(innovation, p).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no closed form for the innovation difference norm at p = {p}"
            ))
        })?;
        let (lo, hi) = coeffs.support();
        let k_max = hi.max(-lo).max(0) as usize;
        let theta = (0..=k_max as i64)
            .map(|k| {
                let both = coeffs.get(k).abs() + if k > 0 { coeffs.get(-k).abs() } else { 0.0 };
                both * norm
            })
            .collect();
        let tail = match coeffs.family() {
            CoeffFamily::Geometric { rho } => TailFamily::Geometric { rho },
            CoeffFamily::Polynomial { kappa } => TailFamily::Polynomial { kappa },
            CoeffFamily::Explicit => TailFamily::FiniteSupport,
        };
        Self::new(p, theta, ThetaSource::ExactLinear, tail)
    }

    /// Monte Carlo profile for a recursion, k = 0..k_max; the tail is tagged
    /// geometric at the model's contraction factor when one is available.
    pub fn mc_recursion(
        model: &RecursionModel,
        p: f64,
        k_max: usize,
        reps: usize,
        seed: SeedSpec,
    ) -> Result<Self> {
        let theta = (0..=k_max)
            .map(|k| {
                coupled_theta_recursion(model, k, p, reps, seed.child(k as u64))
                    .map(|e| e.value)
            })
            .collect::<Result<Vec<f64>>>()?;
        let tail = match model.contraction_factor() {
            Some(rho) if rho > 0.0 && rho < 1.0 => TailFamily::Geometric { rho },
            _ => TailFamily::Untagged,
        };
        Self::new(p, theta, ThetaSource::MonteCarlo, tail)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn k_max(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn source(&self) -> ThetaSource {
        self.source
    }

    pub fn tail(&self) -> TailFamily {
        self.tail
    }
}

/// `Theta_{n,p} = sum_{i >= n} theta_i`: stored values summed directly, the
/// remainder extrapolated analytically from the tail tag.
pub fn theta_tail(profile: &DependenceProfile, n: usize) -> Result<f64> {
    let theta = profile.theta();
    let k_cap = profile.k_max();
    let last = theta[k_cap];
    let beyond_cap = |from: usize| -> Result<f64> {
        // sum_{i >= from} theta_i for from > k_cap.
        match profile.tail() {
            TailFamily::FiniteSupport => Ok(0.0),
            TailFamily::Geometric { rho } => {
                Ok(last * rho.powi((from - k_cap) as i32) / (1.0 - rho))
            }
            TailFamily::Polynomial { kappa } => {
                // theta_i <= theta_K (K/i)^kappa for i > K, bounded by the
                // integral from from-1.
                let k = (k_cap.max(1)) as f64;
                let base = (from.saturating_sub(1)).max(1) as f64;
                Ok(last * k.powf(kappa) * base.powf(1.0 - kappa) / (kappa - 1.0))
            }
            TailFamily::Untagged => Err(Error::InsufficientProfile(format!(
                "profile stops at k = {k_cap} with no tail tag; cannot sum from {from}"
            ))),
        }
    };
    if n > k_cap {
        // Untagged profiles cannot extrapolate at all.
        if matches!(profile.tail(), TailFamily::Untagged) {
            return Err(Error::InsufficientProfile(format!(
                "profile stops at k = {k_cap} with no tail tag; requested n = {n}"
            )));
        }
        beyond_cap(n)
    } else {
        let partial: f64 = theta[n..].iter().sum();
        // An untagged profile can still report the measured partial sum; it
        // just cannot extrapolate past its last measured point.
        let tail = match profile.tail() {
            TailFamily::Untagged => 0.0,
            _ => beyond_cap(k_cap + 1)?,
        };
        Ok(partial + tail)
    }
}

/// Monte Carlo `theta_{k,p}` for a linear model: both copies share the whole
/// innovation window except time 0.
pub fn coupled_theta_linear(
    model: &LinearModel,
    k: usize,
    p: f64,
    reps: usize,
    seed: SeedSpec,
) -> Result<ThetaEstimate> {
    check_moment_order(p, reps)?;
    if !model.innovation().has_abs_moment(p) {
        return Err(Error::InvalidArgument(format!(
            "innovation law lacks a finite moment of order {p}"
        )));
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let (lo, hi) = model.coeffs().support();
    let ak = model.coeffs().get(k as i64);
    let h = model.transform();
    let mut rng = seed.rng();
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for _ in 0..reps {
        // X_k depends on eps_{k-j} over the support; the j = k term is the
        // time-0 innovation.
        let mut y = 0.0;
        let mut e0 = 0.0;
        for j in lo..=hi {
            let e = sampler.sample(&mut rng);
            if j == k as i64 {
                e0 = e;
            }
            y += model.coeffs().get(j) * e;
        }
        let e0_star = sampler.sample(&mut rng);
        let y_star = y + ak * (e0_star - e0);
        let d = (h.apply(y) - h.apply(y_star)).abs();
        let dp = d.powf(p);
        acc += dp;
        acc_sq += dp * dp;
    }
    Ok(finish_theta(acc, acc_sq, reps, p))
}

/// Monte Carlo `theta_{k,p}` for a recursion: both chains replay the same
/// burn-in and window draws, except that the coupled chain replaces the
/// time-0 innovation.
pub fn coupled_theta_recursion(
    model: &RecursionModel,
    k: usize,
    p: f64,
    reps: usize,
    seed: SeedSpec,
) -> Result<ThetaEstimate> {
    check_moment_order(p, reps)?;
    if !model.innovation().has_abs_moment(p) {
        return Err(Error::InvalidArgument(format!(
            "innovation law lacks a finite moment of order {p}"
        )));
    }
    if p > 2.0 && model.fourth_moment_finite() != Some(true) {
        return Err(Error::InvalidArgument(format!(
            "moment order {p} requires a finite fourth moment of the process"
        )));
    }
    let sampler = InnovationSampler::new(model.innovation())?;
    let steps = model.burn_in() + k + 1;
    let zero_at = model.burn_in(); // position of the time-0 innovation
    let mut rng = seed.rng();
    let mut eps = vec![0.0; steps];
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for _ in 0..reps {
        for e in eps.iter_mut() {
            *e = sampler.sample(&mut rng);
        }
        let e0_star = sampler.sample(&mut rng);
        let run = |replacement: Option<f64>| -> f64 {
            let (mut x, mut sigma2) = (0.0, 0.0);
            for (i, &e) in eps.iter().enumerate() {
                let e = match replacement {
                    Some(star) if i == zero_at => star,
                    _ => e,
                };
                let (nx, ns) = model.step(x, sigma2, e);
                x = nx;
                sigma2 = ns;
            }
            x
        };
        let d = (run(None) - run(Some(e0_star))).abs();
        let dp = d.powf(p);
        acc += dp;
        acc_sq += dp * dp;
    }
    Ok(finish_theta(acc, acc_sq, reps, p))
}

fn check_moment_order(p: f64, reps: usize) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!("moment order must be >= 1, got {p}")));
    }
    if reps < 2 {
        return Err(Error::InvalidArgument("need at least 2 replicates for a standard error".into()));
    }
    Ok(())
}

fn finish_theta(acc: f64, acc_sq: f64, reps: usize, p: f64) -> ThetaEstimate {
    let r = reps as f64;
    let mean = acc / r;
    let var_mean = ((acc_sq - acc * acc / r).max(0.0) / (r - 1.0)) / r;
    if mean <= 0.0 {
        // All coupled distances were exactly zero: theta is exactly zero.
        return ThetaEstimate { value: 0.0, std_error: 0.0, reps };
    }
    let value = mean.powf(1.0 / p);
    // Delta method through x -> x^(1/p).
    let std_error = value / (p * mean) * var_mean.sqrt();
    ThetaEstimate { value, std_error, reps }
}
