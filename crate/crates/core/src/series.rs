//! Time series container, Fourier frequency grid, and the periodogram.
//!
//! The periodogram of a length-n sample is
//! `I(w) = |sum_{k=1..n} X_k exp(i w k)|^2 / n`, evaluated on the Fourier
//! frequencies `w_j = 2 pi j / n` strictly inside (0, pi). Values are stored
//! 0-based; the 1-based sampling convention only shifts the phase of the
//! transform and leaves every modulus unchanged.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest series the pipeline accepts; guarantees at least one interior
/// Fourier frequency.
pub const MIN_LEN: usize = 4;

/// Where a series came from; simulated series carry their stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Observed,
    Simulated { master: u64, stream: u64 },
}

/// Real-valued sample of length n >= 4 with all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    provenance: Provenance,
}

impl TimeSeries {
    /// Validates length and finiteness; provenance defaults to observed.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_provenance(values, Provenance::Observed)
    }

    pub fn with_provenance(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.len() < MIN_LEN {
            return Err(Error::InvalidLength { got: values.len(), min: MIN_LEN });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite value at index {pos}")));
        }
        Ok(Self { values, provenance })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Subtracts the sample mean; used by the CLI for observed data.
    pub fn centered(&self) -> Self {
        let m = self.mean();
        Self {
            values: self.values.iter().map(|v| v - m).collect(),
            provenance: self.provenance,
        }
    }
}

/// Fourier frequencies `w_j = 2 pi j / n` for `j = 1..=q`, where q counts the
/// frequencies strictly between 0 and pi: `q = ceil(n/2) - 1` for even n and
/// `(n-1)/2` for odd n. Frequency 0 and the Nyquist point are excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrid {
    n: usize,
    omegas: Vec<f64>,
}

impl FourierGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_LEN {
            return Err(Error::InvalidLength { got: n, min: MIN_LEN });
        }
        let q = if n.is_multiple_of(2) { n / 2 - 1 } else { (n - 1) / 2 };
        let omegas = (1..=q)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            .collect();
        Ok(Self { n, omegas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of interior Fourier frequencies.
    pub fn q(&self) -> usize {
        self.omegas.len()
    }

    /// Frequencies for j = 1..=q, ascending.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Frequency at 1-based index j.
    pub fn omega(&self, j: usize) -> f64 {
        self.omegas[j - 1]
    }

    /// 1-based index of the grid frequency closest to `omega`.
    pub fn nearest_index(&self, omega: f64) -> usize {
        let j = (omega * self.n as f64 / (2.0 * std::f64::consts::PI)).round() as i64;
        j.clamp(1, self.q() as i64) as usize
    }
}

/// Periodogram ordinates on the interior grid plus the full circle
/// `j = 0..n-1` retained for energy checks.
#[derive(Debug, Clone)]
pub struct Periodogram {
    grid: FourierGrid,
    ordinates: Vec<f64>,
    full: Vec<f64>,
}

impl Periodogram {
    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    /// Ordinates `I(w_j)` for j = 1..=q.
    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// Ordinate at 1-based index j.
    pub fn ordinate(&self, j: usize) -> f64 {
        self.ordinates[j - 1]
    }

    /// Full-circle ordinates `I(2 pi j / n)` for j = 0..n-1.
    pub fn full_circle(&self) -> &[f64] {
        &self.full
    }
}

/// Computes the periodogram in O(n log n) via an FFT.
///
/// The series invariants (length >= 4, finite values) make this infallible.
pub fn periodogram(series: &TimeSeries) -> Periodogram {
    let n = series.len();
    let mut buf: Vec<Complex<f64>> =
        series.values().iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let full: Vec<f64> = buf.iter().map(|c| c.norm_sqr() / n as f64).collect();
    let grid = FourierGrid::new(n).expect("TimeSeries guarantees n >= MIN_LEN");
    let ordinates = full[1..=grid.q()].to_vec();
    Periodogram { grid, ordinates, full }
}

/// Relative gap between the full-circle ordinate sum and the series energy:
/// `|sum_j I(2 pi j/n) - sum_k X_k^2| / max(sum_k X_k^2, f64::MIN_POSITIVE)`.
pub fn parseval_check(series: &TimeSeries) -> f64 {
    let pgram = periodogram(series);
    let lhs: f64 = pgram.full_circle().iter().sum();
    let energy: f64 = series.values().iter().map(|x| x * x).sum();
    (lhs - energy).abs() / energy.max(f64::MIN_POSITIVE)
}
