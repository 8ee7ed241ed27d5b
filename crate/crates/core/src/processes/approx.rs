//! Diagnostics for m-dependent approximations.
//!
//! An approximation `X(m)` replaces each `X_k` by its conditional expectation
//! given a window of innovations around k. The quality metric here is the
//! worst Fourier-transform gap over the frequency grid, which the theory
//! requires to grow slower than sqrt(n / log n).

use crate::error::{Error, Result};
use crate::series::{periodogram, TimeSeries};

/// An m-dependent approximation of a series, plus Monte Carlo metadata when
/// the conditional expectation had to be estimated.
#[derive(Debug, Clone)]
pub struct MApprox {
    pub series: TimeSeries,
    /// Root-mean-square standard error of the conditional means; `None` when
    /// the approximation is exact or the error is not estimable.
    pub mc_se: Option<f64>,
    pub warning: Option<String>,
}

/// `max_j |sum_k (X_k - X_k(m)) e^(i omega_j k)|` over the frequency grid.
///
/// Callers tracking the theoretical rate divide by `sqrt(n / log n)`.
pub fn fourier_approx_gap(series: &TimeSeries, approx: &TimeSeries) -> Result<f64> {
    if series.len() != approx.len() {
        return Err(Error::ShapeMismatch(format!(
            "series of length {} vs approximation of length {}",
            series.len(),
            approx.len()
        )));
    }
    let diff: Vec<f64> = series
        .values()
        .iter()
        .zip(approx.values())
        .map(|(a, b)| a - b)
        .collect();
    let n = diff.len() as f64;
    let pgram = periodogram(&TimeSeries::new(diff)?);
    // I_j = |sum|^2 / n, so the transform modulus is sqrt(n I_j).
    let max_ord = pgram
        .ordinates()
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v));
    Ok((n * max_ord).sqrt())
}
