//! Detection of hidden periodicities in stationary time series via the
//! maximum of the normalized periodogram.
//!
//! The centered maximum `max_j I(w_j)/(2 pi f(w_j)) - log q` over the
//! interior Fourier frequencies converges to a standard Gumbel law for a
//! wide class of stationary processes, including nonlinear ones, provided
//! the process's physical dependence decays fast enough. This crate turns
//! that limit into a usable toolkit:
//!
//! - [`series`]: time series, Fourier grids, FFT periodograms.
//! - [`spectral`]: lag-window spectral estimation with a positivity floor,
//!   closed-form linear-filter densities, exact trigonometric moments.
//! - [`peaks`]: the maximum test with Gumbel or exact-oracle calibration,
//!   Fisher's ratio test, order-statistic ratio tests with Monte Carlo
//!   calibration, and sequential peak reporting.
//! - [`processes`]: simulators for linear filters (optionally transformed)
//!   and recursive models (AR, threshold AR, GARCH, bilinear), physical
//!   dependence measures, m-dependent approximations, and the summability
//!   conditions that license the Gumbel limit.
//! - [`montecarlo`]: deterministic parallel replication, empirical
//!   distributions, Kolmogorov-Smirnov distances, and power curves.
//!
//! Everything randomized is driven by explicit seeds and per-replicate
//! streams, so results are independent of thread count and scheduling.

pub mod error;
pub mod montecarlo;
pub mod peaks;
pub mod processes;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use montecarlo::{
    configure_workers, exact_max_exp_cdf, exact_max_exp_sf, gumbel_cdf, gumbel_quantile,
    gumbel_sf, ks_distance, mc_pvalue, power_curve, replicate, DensityMode, EmpiricalSample,
    PowerPoint, Sinusoid,
};
pub use peaks::{
    chiu_r, chiu_r_statistic, detect_peaks, fisher_g, max_test, max_test_exact, order_stat_u,
    order_stat_u_statistic, FSource, NormalizedOrdinates, Peak, PSource, TestMethod, TestReport,
};
pub use processes::{
    check_conditions, fourier_approx_gap, gen_innovations, gen_linear, gen_recursion,
    m_approx_linear, m_approx_recursion, theta_tail, CoeffConfig, CoeffSpec, ConditionReport,
    DependenceProfile, InnovationSpec, LinearModel, MApprox, Process, ProcessSpec,
    RecursionKind, RecursionModel, SeedSpec,
};
pub use series::{
    parseval_check, periodogram, FourierGrid, Periodogram, Provenance, TimeSeries,
};
pub use spectral::{
    autocovariance, exact_s_moment, lag_window_estimate, AutocovSeq, LagWindowKernel,
    LinearDensity, SpectralEstimate, Trig,
};
