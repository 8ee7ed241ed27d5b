//! Replication engine and distributional yardsticks: the Gumbel law, the
//! exact finite-q law of the centered maximum of iid exponentials,
//! Kolmogorov-Smirnov distances, Monte Carlo p-values, and power curves for
//! a sinusoid buried in stationary noise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::peaks::{max_test, NormalizedOrdinates};
use crate::processes::{Process, SeedSpec};
use crate::series::{periodogram, FourierGrid, TimeSeries};
use crate::spectral::{lag_window_estimate, LagWindowKernel};

/// Caps the replication engine's worker pool at `workers` threads.
///
/// Results never depend on the worker count (replicate streams are derived
/// from the replicate index alone); this only bounds parallelism. Must be
/// called before the first replicated run, and at most once per process.
pub fn configure_workers(workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(Error::InvalidArgument("need at least one worker".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("worker pool already configured: {e}")))
}

/// Standard Gumbel CDF `exp(-exp(-x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Gumbel upper tail `1 - exp(-exp(-x))`, computed stably.
pub fn gumbel_sf(x: f64) -> f64 {
    -f64::exp_m1(-(-x).exp())
}

/// Gumbel quantile `-log(-log p)` for p in (0,1).
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("quantile needs p in (0,1), got {p}")));
    }
    Ok(-(-p.ln()).ln())
}

/// Exact CDF of `max of q iid Exp(1) minus log q`:
/// `F(x) = (1 - e^-x / q)^q` for `x > -log q`, else 0.
///
/// This is the finite-q yardstick for the Gaussian white-noise case, where
/// the normalized ordinates are exactly iid exponential.
pub fn exact_max_exp_cdf(x: f64, q: usize) -> f64 {
    assert!(q >= 1, "q must be at least 1");
    let t = (-x).exp() / q as f64;
    if t >= 1.0 {
        return 0.0;
    }
    (q as f64 * (-t).ln_1p()).exp()
}

/// Upper tail of [`exact_max_exp_cdf`], computed stably.
pub fn exact_max_exp_sf(x: f64, q: usize) -> f64 {
    assert!(q >= 1, "q must be at least 1");
    let t = (-x).exp() / q as f64;
    if t >= 1.0 {
        return 1.0;
    }
    -f64::exp_m1(q as f64 * (-t).ln_1p())
}

/// A sorted sample of replicated statistic values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    label: String,
    seed: SeedSpec,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>, label: impl Into<String>, seed: SeedSpec) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite statistic value".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, label: label.into(), seed })
    }

    /// Sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn reps(&self) -> usize {
        self.values.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn seed(&self) -> SeedSpec {
        self.seed
    }

    /// Empirical quantile at level p in (0,1), by the ceiling convention.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("quantile needs p in (0,1), got {p}")));
        }
        let n = self.values.len() as f64;
        let idx = ((p * n).ceil() as usize).clamp(1, self.values.len()) - 1;
        Ok(self.values[idx])
    }
}

/// Runs `recipe` under `reps` independent child streams and collects the
/// sorted sample. The result does not depend on scheduling or thread count:
/// replicate r always sees stream `seed.child(r)`.
pub fn replicate<F>(recipe: F, reps: usize, seed: SeedSpec, label: &str) -> Result<EmpiricalSample>
where
    F: Fn(SeedSpec) -> Result<f64> + Sync,
{
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let values: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| recipe(seed.child(r as u64)))
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalSample::new(values, label, seed)
}

/// Two-sided Kolmogorov-Smirnov distance between the sample and a reference
/// CDF.
pub fn ks_distance(sample: &EmpiricalSample, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.reps() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sample.values().iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Monte Carlo p-value `(1 + #{null >= observed}) / (reps + 1)`.
pub fn mc_pvalue(observed: f64, null: &EmpiricalSample) -> f64 {
    let below = null.values().partition_point(|v| *v < observed);
    let ge = null.reps() - below;
    (1.0 + ge as f64) / (null.reps() as f64 + 1.0)
}

/// A sinusoid `A cos(gamma k + phase)` added to noise; the amplitude comes
/// from the power grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub gamma: f64,
    pub phase: f64,
}

/// How the test normalizes ordinates inside a power run: the noise model's
/// closed-form density, or a lag-window estimate per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DensityMode {
    Known,
    Estimated { kernel: LagWindowKernel, eta: f64, floor_frac: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub amplitude: f64,
    pub rejection_rate: f64,
    pub recovery_rate: f64,
    pub reps: usize,
}

/// Rejection and frequency-recovery rates of the maximum test at level
/// `alpha`, per amplitude: `Z_k = X_k + A cos(gamma k + phase)`, k = 1..n.
///
/// Recovery means the reported peak is the grid frequency nearest `gamma`.
#[allow(clippy::too_many_arguments)]
pub fn power_curve(
    noise: &Process,
    sinusoid: &Sinusoid,
    amplitudes: &[f64],
    n: usize,
    alpha: f64,
    density: &DensityMode,
    reps: usize,
    seed: SeedSpec,
) -> Result<Vec<PowerPoint>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    if amplitudes.is_empty() {
        return Err(Error::InvalidArgument("empty amplitude grid".into()));
    }
    if amplitudes.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidArgument("amplitudes must be finite and nonnegative".into()));
    }
    let grid = FourierGrid::new(n)?;
    if !(sinusoid.gamma > 0.0 && sinusoid.gamma < std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!(
            "sinusoid frequency must lie in (0, pi), got {}",
            sinusoid.gamma
        )));
    }
    let target = grid.nearest_index(sinusoid.gamma);
    let known = match density {
        DensityMode::Known => Some(noise.known_density()?),
        DensityMode::Estimated { .. } => None,
    };

    let mut points = Vec::with_capacity(amplitudes.len());
    for (ai, &amplitude) in amplitudes.iter().enumerate() {
        let base = seed.child(ai as u64);
        let outcomes: Vec<(bool, bool)> = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<(bool, bool)> {
                let x = noise.generate(n, base.child(r as u64))?;
                let z: Vec<f64> = x
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let k = (i + 1) as f64;
                        v + amplitude * (sinusoid.gamma * k + sinusoid.phase).cos()
                    })
                    .collect();
                let series = TimeSeries::new(z)?;
                let pgram = periodogram(&series);
                let v = match density {
                    DensityMode::Known => {
                        NormalizedOrdinates::from_density(&pgram, known.as_ref().unwrap())?
                    }
                    DensityMode::Estimated { kernel, eta, floor_frac } => {
                        let est = lag_window_estimate(&series, *kernel, *eta, *floor_frac)?;
                        NormalizedOrdinates::from_estimate(&pgram, &est)?
                    }
                };
                let report = max_test(&v);
                Ok((report.p_value < alpha, report.peak_index == Some(target)))
            })
            .collect::<Result<Vec<_>>>()?;
        let rejections = outcomes.iter().filter(|o| o.0).count();
        let recoveries = outcomes.iter().filter(|o| o.1).count();
        points.push(PowerPoint {
            amplitude,
            rejection_rate: rejections as f64 / reps as f64,
            recovery_rate: recoveries as f64 / reps as f64,
            reps,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{InnovationSpec, ProcessSpec};

    #[test]
    fn gumbel_values_and_roundtrip() {
        assert!((gumbel_cdf(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((gumbel_quantile(0.95).unwrap() - 2.9702).abs() < 1e-4);
        for x in [-3.0, -1.0, 0.0, 2.5, 10.0] {
            let p = gumbel_cdf(x);
            assert!((gumbel_quantile(p).unwrap() - x).abs() < 1e-12, "x = {x}");
        }
        assert!(gumbel_quantile(0.0).is_err());
        assert!(gumbel_quantile(1.0).is_err());
        // sf complements the cdf.
        assert!((gumbel_sf(2.5) + gumbel_cdf(2.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_law_small_q() {
        // q = 1: plain exponential.
        for x in [0.5, 1.0, 3.0] {
            assert!((exact_max_exp_cdf(x, 1) - (1.0 - (-x).exp())).abs() < 1e-15);
        }
        assert_eq!(exact_max_exp_cdf(-0.1, 1), 0.0);
        // q = 511 at the center.
        let direct = (1.0 - 1.0 / 511.0f64).powi(511);
        assert!((exact_max_exp_cdf(0.0, 511) - direct).abs() < 1e-12);
        assert!((direct - 0.36752).abs() < 1e-5);
        assert!((exact_max_exp_sf(0.0, 511) - (1.0 - direct)).abs() < 1e-12);
    }

    #[test]
    fn exact_law_converges_to_gumbel() {
        let sup_gap = |q: usize| -> f64 {
            let lo = -(q as f64).ln();
            let mut worst = 0.0_f64;
            let mut x = lo + 1e-9;
            while x <= 12.0 {
                worst = worst.max((exact_max_exp_cdf(x, q) - gumbel_cdf(x)).abs());
                x += 0.01;
            }
            worst
        };
        let mut prev = f64::INFINITY;
        for q in [15usize, 63, 255, 511, 2047] {
            let gap = sup_gap(q);
            assert!(gap <= prev, "gap not shrinking at q = {q}");
            prev = gap;
        }
        assert!(sup_gap(511) <= 1e-3);
    }

    #[test]
    fn ks_distance_worked_examples() {
        // Exact quantiles at (i - 0.5)/N give distance exactly 0.5/N.
        let n = 100;
        let values: Vec<f64> = (1..=n)
            .map(|i| gumbel_quantile((i as f64 - 0.5) / n as f64).unwrap())
            .collect();
        let sample = EmpiricalSample::new(values, "quantiles", SeedSpec::new(0, 0)).unwrap();
        assert!((ks_distance(&sample, gumbel_cdf) - 0.005).abs() < 1e-12);

        // Single point at the median.
        let single = EmpiricalSample::new(
            vec![gumbel_quantile(0.5).unwrap()],
            "single",
            SeedSpec::new(0, 0),
        )
        .unwrap();
        assert!((ks_distance(&single, gumbel_cdf) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mc_pvalue_worked_examples() {
        let null = EmpiricalSample::new(
            (0..999).map(|i| i as f64).collect(),
            "null",
            SeedSpec::new(0, 0),
        )
        .unwrap();
        assert!((mc_pvalue(1e9, &null) - 0.001).abs() < 1e-15);
        assert!((mc_pvalue(-1.0, &null) - 1.0).abs() < 1e-15);
        let mid = mc_pvalue(499.5, &null);
        assert!((mid - 0.5).abs() < 0.002, "median p {mid}");
        // Ties count toward the tail.
        assert!((mc_pvalue(998.0, &null) - 2.0 / 1000.0).abs() < 1e-15);
    }

    #[test]
    fn replicate_constant_and_determinism() {
        let sample =
            replicate(|_| Ok(7.0), 3, SeedSpec::new(5, 5), "constant").unwrap();
        assert_eq!(sample.values(), &[7.0, 7.0, 7.0]);

        let f = |s: SeedSpec| -> Result<f64> {
            let mut rng = s.rng();
            Ok(rand::Rng::random::<f64>(&mut rng))
        };
        let a = replicate(f, 100, SeedSpec::new(6, 6), "uniforms").unwrap();
        let b = replicate(f, 100, SeedSpec::new(6, 6), "uniforms").unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn quantile_convention() {
        let s = EmpiricalSample::new(vec![3.0, 1.0, 2.0, 4.0], "q", SeedSpec::new(0, 0)).unwrap();
        assert_eq!(s.quantile(0.25).unwrap(), 1.0);
        assert_eq!(s.quantile(0.5).unwrap(), 2.0);
        assert_eq!(s.quantile(0.75).unwrap(), 3.0);
        assert!(s.quantile(0.0).is_err());
    }

    fn white_noise() -> Process {
        ProcessSpec::Iid { innovation: InnovationSpec::Gaussian }.build().unwrap()
    }

    #[test]
    fn power_curve_size_and_dominance() {
        let n = 512;
        let sinusoid = Sinusoid { gamma: 2.0 * std::f64::consts::PI * 64.0 / n as f64, phase: 0.0 };
        let points = power_curve(
            &white_noise(),
            &sinusoid,
            &[0.0, 3.0],
            n,
            0.05,
            &DensityMode::Known,
            400,
            SeedSpec::new(70, 0),
        )
        .unwrap();
        // Null case: rejection close to alpha.
        let size = points[0].rejection_rate;
        assert!((0.027..=0.073).contains(&size), "size {size}");
        // Dominant signal: ordinate near n A^2 / 4 = 1152, far above log q.
        assert_eq!(points[1].rejection_rate, 1.0);
        assert_eq!(points[1].recovery_rate, 1.0);
    }

    #[test]
    fn power_curve_is_deterministic() {
        let n = 128;
        let sinusoid = Sinusoid { gamma: 2.0 * std::f64::consts::PI * 16.0 / n as f64, phase: 0.4 };
        let run = || {
            power_curve(
                &white_noise(),
                &sinusoid,
                &[0.5],
                n,
                0.05,
                &DensityMode::Known,
                50,
                SeedSpec::new(71, 0),
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn power_curve_validation() {
        let sinusoid = Sinusoid { gamma: 0.5, phase: 0.0 };
        let p = white_noise();
        assert!(power_curve(&p, &sinusoid, &[0.5], 64, 0.0, &DensityMode::Known, 10, SeedSpec::new(0, 0)).is_err());
        assert!(power_curve(&p, &sinusoid, &[], 64, 0.05, &DensityMode::Known, 10, SeedSpec::new(0, 0)).is_err());
        let bad = Sinusoid { gamma: 4.0, phase: 0.0 };
        assert!(power_curve(&p, &bad, &[0.5], 64, 0.05, &DensityMode::Known, 10, SeedSpec::new(0, 0)).is_err());
    }
}
