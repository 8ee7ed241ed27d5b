//! Hypothesis tests on normalized periodogram ordinates: the centered
//! maximum with Gumbel calibration, Fisher's ratio test, two order-statistic
//! ratio tests with Monte Carlo calibration, and sequential peak reporting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::{exact_max_exp_sf, gumbel_sf, mc_pvalue, EmpiricalSample};
use crate::series::{FourierGrid, Periodogram};
use crate::spectral::{LinearDensity, SpectralEstimate};

const TAU: f64 = std::f64::consts::TAU;

/// Where the normalizing density came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FSource {
    Known,
    Estimated,
}

/// Periodogram ordinates divided by `2 pi f(w_j)`; the common input of every
/// test in this module. Under the null these are approximately iid
/// exponential, which is what the calibrations below exploit.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedOrdinates {
    grid: FourierGrid,
    values: Vec<f64>,
    f_source: FSource,
}

impl NormalizedOrdinates {
    /// Normalizes by a closed-form density, which must be strictly positive
    /// on the grid.
    pub fn from_density(pgram: &Periodogram, density: &LinearDensity) -> Result<Self> {
        let grid = pgram.grid().clone();
        if density.min_on_grid(&grid) <= 0.0 {
            return Err(Error::InvalidArgument(
                "density is not strictly positive on the Fourier grid".into(),
            ));
        }
        let values = grid
            .omegas()
            .iter()
            .zip(pgram.ordinates())
            .map(|(&w, &i)| i / (TAU * density.density(w)))
            .collect();
        Ok(Self { grid, values, f_source: FSource::Known })
    }

    /// Normalizes by a lag-window estimate computed from the same series
    /// length; the estimate's positivity floor guarantees finite ratios.
    pub fn from_estimate(pgram: &Periodogram, estimate: &SpectralEstimate) -> Result<Self> {
        if estimate.grid().n() != pgram.grid().n() {
            return Err(Error::ShapeMismatch(format!(
                "estimate grid has n = {}, periodogram has n = {}",
                estimate.grid().n(),
                pgram.grid().n()
            )));
        }
        let grid = pgram.grid().clone();
        let values = estimate
            .values()
            .iter()
            .zip(pgram.ordinates())
            .map(|(&f, &i)| i / (TAU * f))
            .collect();
        Ok(Self { grid, values, f_source: FSource::Estimated })
    }

    /// Wraps already-normalized ordinates; `values` must have exactly the
    /// interior grid length for series length `n`.
    pub fn from_raw(values: Vec<f64>, n: usize, f_source: FSource) -> Result<Self> {
        let grid = FourierGrid::new(n)?;
        if values.len() != grid.q() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} ordinates for n = {n}, got {}",
                grid.q(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidData("ordinates must be finite and nonnegative".into()));
        }
        Ok(Self { grid, values, f_source })
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    /// Values `V_j` for j = 1..=q.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    pub fn f_source(&self) -> FSource {
        self.f_source
    }

    /// Mean normalized ordinate `q^-1 sum_j V_j`; near 1 when the
    /// normalizing density matches the data.
    pub fn sum_diagnostic(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestMethod {
    #[serde(rename = "max-gumbel")]
    MaxGumbel,
    #[serde(rename = "fisher-g")]
    FisherG,
    #[serde(rename = "order-u")]
    OrderU,
    #[serde(rename = "chiu-r")]
    ChiuR,
}

/// How the p-value was calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PSource {
    Asymptotic,
    ExactOracle,
    MonteCarlo,
}

/// Outcome of one test on one set of normalized ordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub method: TestMethod,
    /// The calibrated statistic (centered where applicable).
    pub statistic: f64,
    /// Uncentered companion statistic, when one exists (Fisher's ratio).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_statistic: Option<f64>,
    /// Reference point: the Gumbel centering `log q` for asymptotic tests,
    /// the null median for Monte Carlo ones.
    pub reference: f64,
    pub p_value: f64,
    pub p_source: PSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_freq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_null: Option<String>,
}

/// Position of the largest value; ties go to the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Centered maximum test: `max_j V_j - log q`, Gumbel p-value.
pub fn max_test(v: &NormalizedOrdinates) -> TestReport {
    max_test_impl(v, PSource::Asymptotic)
}

/// Same statistic, but calibrated against the exact law of the maximum of q
/// iid exponentials. Sharper for the Gaussian white-noise case with known
/// density, where the null is exact rather than asymptotic.
pub fn max_test_exact(v: &NormalizedOrdinates) -> TestReport {
    max_test_impl(v, PSource::ExactOracle)
}

fn max_test_impl(v: &NormalizedOrdinates, p_source: PSource) -> TestReport {
    let q = v.q();
    let pos = argmax(v.values());
    let statistic = v.values()[pos] - (q as f64).ln();
    let p_value = match p_source {
        PSource::ExactOracle => exact_max_exp_sf(statistic, q),
        _ => gumbel_sf(statistic),
    };
    TestReport {
        method: TestMethod::MaxGumbel,
        statistic,
        raw_statistic: None,
        reference: (q as f64).ln(),
        p_value,
        p_source,
        peak_index: Some(pos + 1),
        peak_freq: Some(v.grid().omega(pos + 1)),
        mc_reps: None,
        mc_null: None,
    }
}

/// Fisher's ratio `g = max_j V_j / sum_j V_j`, reported raw and recentered
/// as `q g - log q` with a Gumbel p-value. The recentering keeps the
/// statistic on the same scale as the maximum test, since the mean
/// normalized ordinate concentrates at 1.
pub fn fisher_g(v: &NormalizedOrdinates) -> Result<TestReport> {
    let q = v.q() as f64;
    let sum: f64 = v.values().iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateData("all normalized ordinates are zero".into()));
    }
    let pos = argmax(v.values());
    let raw = v.values()[pos] / sum;
    let statistic = q * raw - q.ln();
    Ok(TestReport {
        method: TestMethod::FisherG,
        statistic,
        raw_statistic: Some(raw),
        reference: q.ln(),
        p_value: gumbel_sf(statistic),
        p_source: PSource::Asymptotic,
        peak_index: Some(pos + 1),
        peak_freq: Some(v.grid().omega(pos + 1)),
        mc_reps: None,
        mc_null: None,
    })
}

/// The r-peaks ratio: (r-th largest of V) / (sum of V).
pub fn order_stat_u_statistic(v: &NormalizedOrdinates, r: usize) -> Result<f64> {
    let q = v.q();
    if r < 1 || r > q {
        return Err(Error::InvalidArgument(format!("r must lie in 1..={q}, got {r}")));
    }
    let sum: f64 = v.values().iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateData("all normalized ordinates are zero".into()));
    }
    let mut sorted = v.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[q - r] / sum)
}

/// The r-peaks ratio test, calibrated against a Monte Carlo null sample of
/// the same statistic.
pub fn order_stat_u(
    v: &NormalizedOrdinates,
    r: usize,
    null: &EmpiricalSample,
) -> Result<TestReport> {
    let statistic = order_stat_u_statistic(v, r)?;
    mc_report(TestMethod::OrderU, statistic, v, null)
}

/// The largest ordinate over the sum of the `floor(q beta)` smallest.
pub fn chiu_r_statistic(v: &NormalizedOrdinates, beta: f64) -> Result<f64> {
    let q = v.q();
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidArgument(format!("beta must lie in (0, 1], got {beta}")));
    }
    let m = ((q as f64 * beta).floor() as usize).min(q);
    if m == 0 {
        return Err(Error::InvalidArgument(format!(
            "floor(q beta) = 0 for q = {q}, beta = {beta}; increase beta"
        )));
    }
    let mut sorted = v.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let denom: f64 = sorted[..m].iter().sum();
    if denom <= 0.0 {
        return Err(Error::DegenerateData(format!(
            "the {m} smallest normalized ordinates sum to zero"
        )));
    }
    Ok(sorted[q - 1] / denom)
}

/// The smallest-sum ratio test, calibrated against a Monte Carlo null
/// sample of the same statistic.
pub fn chiu_r(v: &NormalizedOrdinates, beta: f64, null: &EmpiricalSample) -> Result<TestReport> {
    let statistic = chiu_r_statistic(v, beta)?;
    mc_report(TestMethod::ChiuR, statistic, v, null)
}

fn mc_report(
    method: TestMethod,
    statistic: f64,
    v: &NormalizedOrdinates,
    null: &EmpiricalSample,
) -> Result<TestReport> {
    let pos = argmax(v.values());
    Ok(TestReport {
        method,
        statistic,
        raw_statistic: None,
        reference: null.quantile(0.5)?,
        p_value: mc_pvalue(statistic, null),
        p_source: PSource::MonteCarlo,
        peak_index: Some(pos + 1),
        peak_freq: Some(v.grid().omega(pos + 1)),
        mc_reps: Some(null.reps()),
        mc_null: Some(null.label().to_string()),
    })
}

/// One detected peak from [`detect_peaks`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// 1-based Fourier grid index.
    pub index: usize,
    /// Frequency in radians per sample.
    pub frequency: f64,
    /// Centered maximum statistic at detection time.
    pub statistic: f64,
    pub p_value: f64,
}

/// Sequential peak detection: apply the maximum test, report the peak if
/// p < alpha, remove that ordinate, recompute with q diminished by one, and
/// repeat. Stops at the first non-significant maximum or after `max_peaks`.
pub fn detect_peaks(
    v: &NormalizedOrdinates,
    max_peaks: usize,
    alpha: f64,
) -> Result<Vec<Peak>> {
    if max_peaks < 1 {
        return Err(Error::InvalidArgument("max_peaks must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let mut remaining: Vec<(usize, f64)> =
        v.values().iter().enumerate().map(|(i, &x)| (i + 1, x)).collect();
    let mut peaks = Vec::new();
    while peaks.len() < max_peaks && !remaining.is_empty() {
        let mut best = 0;
        for (i, item) in remaining.iter().enumerate().skip(1) {
            if item.1 > remaining[best].1 {
                best = i;
            }
        }
        let (index, value) = remaining[best];
        let statistic = value - (remaining.len() as f64).ln();
        let p_value = gumbel_sf(statistic);
        if p_value >= alpha {
            break;
        }
        peaks.push(Peak { index, frequency: v.grid().omega(index), statistic, p_value });
        remaining.remove(best);
    }
    Ok(peaks)
}
