//! Spectral density estimation and closed-form spectra of linear processes.
//!
//! The lag-window estimator at bandwidth `B_n = floor(n^eta)` is
//! `fhat(w) = (1/2pi) [rhat(0) + 2 sum_{k=1..B_n} rhat(k) a(k/B_n) cos(k w)]`
//! with `rhat` the biased autocovariance without mean subtraction. Kernels
//! must satisfy `a(x) - 1 = O(x^2)` near zero, which is why Bartlett is not
//! offered. Estimates are floored at a small fraction of `rhat(0)/2pi` so
//! normalized ordinates stay finite.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::{FourierGrid, TimeSeries};

/// Default bandwidth exponent in `B_n = floor(n^eta)`.
pub const DEFAULT_ETA: f64 = 0.3;
/// Default positivity floor as a fraction of `rhat(0)/2pi`.
pub const DEFAULT_FLOOR_FRAC: f64 = 1e-3;

/// Lag-window kernels with quadratic flatness at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LagWindowKernel {
    /// `1 - 6x^2 + 6|x|^3` for |x| <= 1/2, `2(1-|x|)^3` for 1/2 < |x| <= 1.
    /// Nonnegative definite, so the raw estimate is already nonnegative.
    Parzen,
    /// `(1 + cos(pi x))/2` for |x| <= 1.
    TukeyHanning,
}

impl LagWindowKernel {
    pub fn eval(self, x: f64) -> f64 {
        let ax = x.abs();
        match self {
            LagWindowKernel::Parzen => {
                if ax <= 0.5 {
                    1.0 - 6.0 * x * x + 6.0 * ax * ax * ax
                } else if ax <= 1.0 {
                    2.0 * (1.0 - ax).powi(3)
                } else {
                    0.0
                }
            }
            LagWindowKernel::TukeyHanning => {
                if ax <= 1.0 {
                    0.5 * (1.0 + (PI * x).cos())
                } else {
                    0.0
                }
            }
        }
    }
}

/// Biased sample autocovariances `rhat(k)`, lags 0..=max_lag, no mean
/// subtraction.
#[derive(Debug, Clone)]
pub struct AutocovSeq {
    n: usize,
    values: Vec<f64>,
}

impl AutocovSeq {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn lag(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `rhat(k) = n^{-1} sum_{j=1..n-k} X_j X_{j+k}` for k = 0..=max_lag.
pub fn autocovariance(series: &TimeSeries, max_lag: usize) -> Result<AutocovSeq> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::InvalidArgument(format!(
            "max_lag {max_lag} must be smaller than the series length {n}"
        )));
    }
    let x = series.values();
    let values = (0..=max_lag)
        .map(|k| x.iter().zip(&x[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect();
    Ok(AutocovSeq { n, values })
}

/// Lag-window spectral estimate on the interior Fourier grid.
#[derive(Debug, Clone)]
pub struct SpectralEstimate {
    grid: FourierGrid,
    values: Vec<f64>,
    floored: Vec<bool>,
    bandwidth: usize,
    kernel: LagWindowKernel,
}

impl SpectralEstimate {
    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    /// Estimates `fhat(w_j)` for j = 1..=q; all strictly positive.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Estimate at 1-based index j.
    pub fn value(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// Per-frequency flags marking where the positivity floor replaced the
    /// raw value.
    pub fn floored(&self) -> &[bool] {
        &self.floored
    }

    pub fn floor_count(&self) -> usize {
        self.floored.iter().filter(|&&b| b).count()
    }

    /// Bandwidth `B_n` actually used.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn kernel(&self) -> LagWindowKernel {
        self.kernel
    }
}

/// Computes the lag-window estimate with bandwidth `B_n = floor(n^eta)`.
///
/// `eta` must lie in (0, 1/2); `floor_frac` in (0, 1) scales the positivity
/// floor `floor_frac * rhat(0) / 2pi`. A series with zero sample variance is
/// rejected as degenerate.
pub fn lag_window_estimate(
    series: &TimeSeries,
    kernel: LagWindowKernel,
    eta: f64,
    floor_frac: f64,
) -> Result<SpectralEstimate> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::InvalidArgument(format!("eta must lie in (0, 1/2), got {eta}")));
    }
    if !(floor_frac > 0.0 && floor_frac < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "floor_frac must lie in (0, 1), got {floor_frac}"
        )));
    }
    let n = series.len();
    let bandwidth = (n as f64).powf(eta).floor() as usize;
    let acov = autocovariance(series, bandwidth)?;
    let r0 = acov.lag(0);
    if r0 <= 0.0 {
        return Err(Error::DegenerateData("series has zero sample variance".into()));
    }
    let grid = FourierGrid::new(n)?;
    let floor = floor_frac * r0 / (2.0 * PI);
    let weighted: Vec<f64> = (1..=bandwidth)
        .map(|k| 2.0 * acov.lag(k) * kernel.eval(k as f64 / bandwidth as f64))
        .collect();
    let mut values = Vec::with_capacity(grid.q());
    let mut floored = Vec::with_capacity(grid.q());
    for &w in grid.omegas() {
        let mut raw = r0;
        for (k, &wk) in weighted.iter().enumerate() {
            raw += wk * ((k + 1) as f64 * w).cos();
        }
        raw /= 2.0 * PI;
        if raw < floor {
            values.push(floor);
            floored.push(true);
        } else {
            values.push(raw);
            floored.push(false);
        }
    }
    Ok(SpectralEstimate { grid, values, floored, bandwidth, kernel })
}

/// Closed-form spectral density of a finite two-sided linear filter:
/// `f(w) = (sigma^2 / 2pi) |sum_j a_j exp(-i j w)|^2` with population
/// autocovariance `r(u) = sigma^2 sum_j a_j a_{j+u}`.
#[derive(Debug, Clone)]
pub struct LinearDensity {
    min_j: i64,
    a: Vec<f64>,
    sigma2: f64,
}

impl LinearDensity {
    /// `a[idx]` is the coefficient at offset `min_j + idx`.
    pub fn new(min_j: i64, a: Vec<f64>, sigma2: f64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("coefficient list is empty".into()));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite filter coefficient".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "innovation variance must be positive and finite, got {sigma2}"
            )));
        }
        Ok(Self { min_j, a, sigma2 })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Inclusive coefficient support `[min_j, max_j]`.
    pub fn support(&self) -> (i64, i64) {
        (self.min_j, self.min_j + self.a.len() as i64 - 1)
    }

    pub fn density(&self, omega: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (idx, &aj) in self.a.iter().enumerate() {
            let j = (self.min_j + idx as i64) as f64;
            re += aj * (j * omega).cos();
            im -= aj * (j * omega).sin();
        }
        self.sigma2 / (2.0 * PI) * (re * re + im * im)
    }

    /// Population autocovariance; zero outside `|u| <= cov_span()`.
    pub fn autocov(&self, u: i64) -> f64 {
        let len = self.a.len() as i64;
        let ua = u.abs();
        if ua >= len {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..(len - ua) as usize {
            s += self.a[i] * self.a[i + ua as usize];
        }
        self.sigma2 * s
    }

    /// Largest lag with a possibly nonzero autocovariance.
    pub fn cov_span(&self) -> usize {
        self.a.len() - 1
    }

    /// Smallest density value over the grid; positive lower bounds are a
    /// precondition for using this density to normalize ordinates.
    pub fn min_on_grid(&self, grid: &FourierGrid) -> f64 {
        grid.omegas().iter().map(|&w| self.density(w)).fold(f64::INFINITY, f64::min)
    }
}

/// Trigonometric weight selecting the cosine or sine component of the
/// discrete Fourier sum `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, theta: f64) -> f64 {
        match self {
            Trig::Cos => theta.cos(),
            Trig::Sin => theta.sin(),
        }
    }
}

/// Exact cross-moment `E[S_{n,i,t1} S_{n,j,t2}]` for the trigonometric sums
/// `S_{n,j,cos} = sum_{k=1..n} X_k cos(k w_j)` (resp. sin) of a linear
/// process with the given closed-form density.
///
/// Reorganized over lags as `sum_u r(u) sum_k t1(k w_i) t2((k-u) w_j)`, which
/// costs O(n * span) instead of O(n^2).
pub fn exact_s_moment(
    density: &LinearDensity,
    n: usize,
    i: usize,
    t1: Trig,
    j: usize,
    t2: Trig,
) -> Result<f64> {
    let grid = FourierGrid::new(n)?;
    let q = grid.q();
    if i == 0 || i > q || j == 0 || j > q {
        return Err(Error::InvalidArgument(format!(
            "frequency indices must lie in 1..={q}, got ({i}, {j})"
        )));
    }
    let wi = grid.omega(i);
    let wj = grid.omega(j);
    let umax = density.cov_span().min(n - 1) as i64;
    // The first factor only ever sees k in 1..=n, the second k - u in
    // 1..=n+umax; tabulating both keeps the lag loop free of trig calls.
    let t1v: Vec<f64> = (1..=n).map(|k| t1.eval(wi * k as f64)).collect();
    let t2v: Vec<f64> = (1..=n + umax as usize).map(|m| t2.eval(wj * m as f64)).collect();
    let mut total = 0.0;
    for u in -umax..=umax {
        let r = density.autocov(u);
        if r == 0.0 {
            continue;
        }
        let klo = 1.max(1 + u);
        let khi = (n as i64).min(n as i64 + u);
        let mut inner = 0.0;
        for k in klo..=khi {
            inner += t1v[(k - 1) as usize] * t2v[(k - u - 1) as usize];
        }
        total += r * inner;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric_density(rho: f64) -> LinearDensity {
        // Truncate where the coefficient tail drops below 1e-9.
        let len = (9.0 / -rho.log10()).ceil() as usize + 1;
        let a: Vec<f64> = (0..len).map(|j| rho.powi(j as i32)).collect();
        LinearDensity::new(0, a, 1.0).unwrap()
    }

    #[test]
    fn kernel_contract_on_fine_grid() {
        // Symmetry, a(0) = 1, unit support, Lipschitz bound, and quadratic
        // flatness |a(x) - 1| <= K x^2 near the origin.
        for (kernel, k_flat) in
            [(LagWindowKernel::Parzen, 6.0), (LagWindowKernel::TukeyHanning, 2.5)]
        {
            assert_eq!(kernel.eval(0.0), 1.0);
            let mut prev: Option<f64> = None;
            let mut x = -1.5;
            while x <= 1.5 {
                let v = kernel.eval(x);
                assert!((v - kernel.eval(-x)).abs() < 1e-12, "{kernel:?} asymmetric at {x}");
                assert!((0.0..=1.0).contains(&v), "{kernel:?} out of [0,1] at {x}");
                if x.abs() > 1.0 {
                    assert_eq!(v, 0.0, "{kernel:?} nonzero outside support at {x}");
                }
                if x.abs() <= 0.5 {
                    assert!(
                        (v - 1.0).abs() <= k_flat * x * x + 1e-12,
                        "{kernel:?} not O(x^2)-flat at {x}"
                    );
                }
                if let Some(p) = prev {
                    assert!((v - p).abs() <= 2.0 * 1e-3 + 1e-9, "{kernel:?} not Lipschitz");
                }
                prev = Some(v);
                x += 1e-3;
            }
        }
    }

    #[test]
    fn parzen_midpoint_value() {
        // Both branches meet at 1/2 with value 1/4.
        assert!((LagWindowKernel::Parzen.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((LagWindowKernel::Parzen.eval(0.5 + 1e-12) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn autocov_worked_examples() {
        let s = TimeSeries::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let r = autocovariance(&s, 2).unwrap();
        assert_eq!(r.lag(0), 1.0);
        assert_eq!(r.lag(1), 0.75);
        assert_eq!(r.lag(2), 0.5);

        let s = TimeSeries::new(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        let r = autocovariance(&s, 1).unwrap();
        assert_eq!(r.lag(0), 1.0);
        assert_eq!(r.lag(1), -0.75);
    }

    #[test]
    fn autocov_rejects_excessive_lag() {
        let s = TimeSeries::new(vec![1.0; 8]).unwrap();
        assert!(matches!(autocovariance(&s, 8), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn impulse_series_gives_flat_estimate() {
        // rhat(k) = 0 for k >= 1 exactly, so fhat is rhat(0)/2pi everywhere.
        let n = 64;
        let mut values = vec![0.0; n];
        values[0] = (n as f64).sqrt();
        let s = TimeSeries::new(values).unwrap();
        let est =
            lag_window_estimate(&s, LagWindowKernel::Parzen, DEFAULT_ETA, DEFAULT_FLOOR_FRAC)
                .unwrap();
        for &v in est.values() {
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-12);
            assert!((v - 0.15915).abs() < 1e-4);
        }
        assert_eq!(est.floor_count(), 0);
    }

    #[test]
    fn estimator_validates_arguments() {
        let s = TimeSeries::new(vec![1.0, 2.0, -1.0, 0.5, 0.0, 1.5]).unwrap();
        for eta in [0.0, 0.5, 0.7, -0.1] {
            assert!(matches!(
                lag_window_estimate(&s, LagWindowKernel::Parzen, eta, 1e-3),
                Err(Error::InvalidArgument(_))
            ));
        }
        assert!(matches!(
            lag_window_estimate(&s, LagWindowKernel::Parzen, 0.3, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        let zero = TimeSeries::new(vec![0.0; 16]).unwrap();
        assert!(matches!(
            lag_window_estimate(&zero, LagWindowKernel::Parzen, 0.3, 1e-3),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn floor_engages_on_strongly_peaked_series() {
        // An alternating series concentrates all energy at the Nyquist end;
        // with a generous floor fraction the low-frequency estimates fall
        // below the floor and must be clamped to it, staying positive.
        let n = 64;
        let values: Vec<f64> = (0..n).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = TimeSeries::new(values).unwrap();
        let est = lag_window_estimate(&s, LagWindowKernel::Parzen, 0.45, 0.1).unwrap();
        assert!(est.floor_count() > 0);
        let floor = 0.1 * 1.0 / (2.0 * PI);
        for (idx, &v) in est.values().iter().enumerate() {
            assert!(v > 0.0);
            assert!(v >= floor - 1e-15, "value below floor at {idx}");
        }
    }

    #[test]
    fn bandwidth_follows_exponent() {
        let s = TimeSeries::new(vec![1.0, 0.5, -0.5, 0.25, 0.0, -1.0, 2.0, 0.1]).unwrap();
        let est = lag_window_estimate(&s, LagWindowKernel::Parzen, 0.3, 1e-3).unwrap();
        // floor(8^0.3) = 1
        assert_eq!(est.bandwidth(), 1);
    }

    #[test]
    fn geometric_density_matches_ar_closed_form() {
        // For a_j = phi^j the density is (1/2pi) / (1 - 2 phi cos w + phi^2).
        let phi = 0.5;
        let d = geometric_density(phi);
        assert!((d.density(0.0) - 2.0 / PI).abs() < 1e-6);
        for w in [0.1f64, 1.0, 2.0, 3.0] {
            let expect = 1.0 / (2.0 * PI) / (1.0 - 2.0 * phi * w.cos() + phi * phi);
            assert!((d.density(w) - expect).abs() < 1e-7, "w={w}");
        }
        // r(u) = sigma^2 phi^u / (1 - phi^2)
        for u in 0..6 {
            let expect = phi.powi(u) / (1.0 - phi * phi);
            assert!((d.autocov(u as i64) - expect).abs() < 1e-8);
            assert_eq!(d.autocov(u as i64), d.autocov(-(u as i64)));
        }
    }

    #[test]
    fn density_validates_inputs() {
        assert!(matches!(LinearDensity::new(0, vec![], 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(LinearDensity::new(0, vec![1.0], 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            LinearDensity::new(0, vec![f64::NAN], 1.0),
            Err(Error::InvalidData(_))
        ));
    }

    #[test]
    fn two_sided_density_can_vanish_on_grid() {
        // a_{-1} = a_1 = 1/2: f(w) = cos^2(w) / 2pi, zero at w = pi/2; the
        // minimum scan exposes it so normalization can reject this model.
        let d = LinearDensity::new(-1, vec![0.5, 0.0, 0.5], 1.0).unwrap();
        let grid = FourierGrid::new(8).unwrap();
        assert!(d.min_on_grid(&grid) < 1e-15);
    }

    #[test]
    fn white_noise_moments_are_exact() {
        let d = LinearDensity::new(0, vec![1.0], 1.0).unwrap();
        for n in [8usize, 64, 257] {
            let q = FourierGrid::new(n).unwrap().q();
            for j in [1, q / 2 + 1, q] {
                let cc = exact_s_moment(&d, n, j, Trig::Cos, j, Trig::Cos).unwrap();
                let ss = exact_s_moment(&d, n, j, Trig::Sin, j, Trig::Sin).unwrap();
                let cs = exact_s_moment(&d, n, j, Trig::Cos, j, Trig::Sin).unwrap();
                assert!((cc - n as f64 / 2.0).abs() < 1e-9, "n={n} j={j}");
                assert!((ss - n as f64 / 2.0).abs() < 1e-9);
                assert!(cs.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn moment_oracle_matches_brute_force() {
        // Independent O(n^2) double sum over the population autocovariance.
        let d = geometric_density(0.6);
        for n in [16usize, 40] {
            let grid = FourierGrid::new(n).unwrap();
            for (i, j) in [(1, 1), (2, 5), (3, 3), (grid.q(), 1)] {
                for (t1, t2) in [
                    (Trig::Cos, Trig::Cos),
                    (Trig::Sin, Trig::Sin),
                    (Trig::Cos, Trig::Sin),
                    (Trig::Sin, Trig::Cos),
                ] {
                    let wi = grid.omega(i);
                    let wj = grid.omega(j);
                    let mut brute = 0.0;
                    for k in 1..=n as i64 {
                        for l in 1..=n as i64 {
                            brute += t1.eval(wi * k as f64)
                                * t2.eval(wj * l as f64)
                                * d.autocov(k - l);
                        }
                    }
                    let fast = exact_s_moment(&d, n, i, t1, j, t2).unwrap();
                    assert!((fast - brute).abs() < 1e-9, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn moment_oracle_validates_indices() {
        let d = geometric_density(0.5);
        assert!(exact_s_moment(&d, 16, 0, Trig::Cos, 1, Trig::Cos).is_err());
        assert!(exact_s_moment(&d, 16, 1, Trig::Cos, 8, Trig::Cos).is_err());
    }

    #[test]
    fn diagonal_moment_ratio_has_1_over_n_rate() {
        // max_j |E S^2 / (pi n f(w_j)) - 1| should decay like 1/n: the
        // n-scaled maxima stay within 4x their n = 64 value.
        let d = geometric_density(0.5);
        let scaled: Vec<f64> = [64usize, 128, 256, 512]
            .iter()
            .map(|&n| {
                let grid = FourierGrid::new(n).unwrap();
                let mut worst: f64 = 0.0;
                for j in 1..=grid.q() {
                    let f = d.density(grid.omega(j));
                    for t in [Trig::Cos, Trig::Sin] {
                        let m = exact_s_moment(&d, n, j, t, j, t).unwrap();
                        worst = worst.max((m / (PI * n as f64 * f) - 1.0).abs());
                    }
                }
                worst * n as f64
            })
            .collect();
        for (idx, &v) in scaled.iter().enumerate() {
            assert!(v <= 4.0 * scaled[0], "n-scaled ratio blew up at step {idx}: {scaled:?}");
        }
    }

    #[test]
    fn cross_frequency_moments_stay_bounded() {
        // max_{i != j} |E S_{i,cos} S_{j,sin}| stays O(1) as n grows.
        let d = geometric_density(0.5);
        let span = d.cov_span() as i64;
        let maxima: Vec<f64> = [64usize, 128, 256, 512]
            .iter()
            .map(|&n| {
                let grid = FourierGrid::new(n).unwrap();
                let q = grid.q();
                // cos/sin tables: trig[j-1][k-1] at angle k * w_j
                let cos_t: Vec<Vec<f64>> = (1..=q)
                    .map(|j| (1..=n).map(|k| (grid.omega(j) * k as f64).cos()).collect())
                    .collect();
                let sin_t: Vec<Vec<f64>> = (1..=q)
                    .map(|j| (1..=n).map(|k| (grid.omega(j) * k as f64).sin()).collect())
                    .collect();
                let umax = span.min(n as i64 - 1);
                let mut worst: f64 = 0.0;
                for i in 1..=q {
                    // g[l-1] = sum_k cos(k w_i) r(k - l), then dot with sin(l w_j)
                    let mut g = vec![0.0; n];
                    for (l, gl) in g.iter_mut().enumerate() {
                        let l = l as i64 + 1;
                        let klo = 1.max(l - umax);
                        let khi = (n as i64).min(l + umax);
                        let mut s = 0.0;
                        for k in klo..=khi {
                            s += cos_t[i - 1][(k - 1) as usize] * d.autocov(k - l);
                        }
                        *gl = s;
                    }
                    for j in 1..=q {
                        if i == j {
                            continue;
                        }
                        let m: f64 =
                            g.iter().zip(&sin_t[j - 1]).map(|(a, b)| a * b).sum();
                        worst = worst.max(m.abs());
                    }
                }
                worst
            })
            .collect();
        for (idx, &v) in maxima.iter().enumerate() {
            assert!(v <= 4.0 * maxima[0], "cross moment grew at step {idx}: {maxima:?}");
        }
    }

    #[test]
    fn cross_moment_sweep_agrees_with_oracle() {
        // The table-based sweep in the previous test must reproduce the
        // single-pair oracle.
        let d = geometric_density(0.5);
        let n = 64;
        for (i, j) in [(1usize, 2usize), (3, 17), (10, 4)] {
            let direct = exact_s_moment(&d, n, i, Trig::Cos, j, Trig::Sin).unwrap();
            let grid = FourierGrid::new(n).unwrap();
            let umax = d.cov_span().min(n - 1) as i64;
            let mut m = 0.0;
            for l in 1..=n as i64 {
                let klo = 1.max(l - umax);
                let khi = (n as i64).min(l + umax);
                let mut s = 0.0;
                for k in klo..=khi {
                    s += (grid.omega(i) * k as f64).cos() * d.autocov(k - l);
                }
                m += s * (grid.omega(j) * l as f64).sin();
            }
            assert!((m - direct).abs() < 1e-9);
        }
    }
}
