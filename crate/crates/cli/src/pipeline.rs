//! Spectral-normalization settings shared by the test and experiment
//! commands.

use clap::ValueEnum;
use periomax_core::peaks::NormalizedOrdinates;
use periomax_core::series::{periodogram, TimeSeries};
use periomax_core::spectral::{
    lag_window_estimate, LagWindowKernel, SpectralEstimate, DEFAULT_ETA, DEFAULT_FLOOR_FRAC,
};

use crate::config::{pick, Config};
use crate::errors::CliResult;
use crate::report::Echo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Parzen,
    Tukey,
}

impl KernelArg {
    pub fn kernel(self) -> LagWindowKernel {
        match self {
            KernelArg::Parzen => LagWindowKernel::Parzen,
            KernelArg::Tukey => LagWindowKernel::TukeyHanning,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelArg::Parzen => "parzen",
            KernelArg::Tukey => "tukey",
        }
    }
}

/// Resolved lag-window settings.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSettings {
    pub kernel: LagWindowKernel,
    pub eta: f64,
    pub floor: f64,
}

impl SpectralSettings {
    pub fn resolve(
        kernel: Option<KernelArg>,
        eta: Option<f64>,
        floor: Option<f64>,
        cfg: &Config,
        echo: &mut Echo,
    ) -> CliResult<Self> {
        let kernel_arg = pick(kernel, cfg.value_enum("kernel")?, KernelArg::Parzen);
        let eta = pick(eta, cfg.f64("eta")?, DEFAULT_ETA);
        let floor = pick(floor, cfg.f64("floor")?, DEFAULT_FLOOR_FRAC);
        echo.put("kernel", kernel_arg.name());
        echo.put("eta", eta);
        echo.put("floor", floor);
        Ok(SpectralSettings { kernel: kernel_arg.kernel(), eta, floor })
    }

    pub fn estimate(&self, series: &TimeSeries) -> periomax_core::Result<SpectralEstimate> {
        lag_window_estimate(series, self.kernel, self.eta, self.floor)
    }

    /// Full estimated-density pipeline: periodogram, lag-window estimate,
    /// normalized ordinates.
    pub fn normalized(&self, series: &TimeSeries) -> periomax_core::Result<NormalizedOrdinates> {
        let estimate = self.estimate(series)?;
        NormalizedOrdinates::from_estimate(&periodogram(series), &estimate)
    }
}
