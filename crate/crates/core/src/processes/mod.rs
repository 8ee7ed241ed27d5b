//! Process simulation: innovation laws, linear filters with Lipschitz
//! transforms, nonlinear recursions, dependence measures, m-dependent
//! approximations, and the summability condition checks.

pub mod approx;
pub mod conditions;
pub mod dependence;
pub mod innovations;
pub mod linear;
pub mod recursion;
pub mod rng;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spectral::LinearDensity;

pub use approx::{fourier_approx_gap, MApprox};
pub use conditions::{check_conditions, ConditionPoint, ConditionReport, ConditionRow};
pub use dependence::{
    coupled_theta_linear, coupled_theta_recursion, innovation_diff_norm, theta_tail,
    DependenceProfile, TailFamily, ThetaEstimate, ThetaSource,
};
pub use innovations::{gen_innovations, InnovationSampler, InnovationSpec};
pub use linear::{
    gen_linear, m_approx_linear, Centering, CoeffConfig, CoeffFamily, CoeffSpec, LinearModel,
    LinearSample, Transform,
};
pub use recursion::{
    gen_recursion, m_approx_recursion, RecursionKind, RecursionModel, RecursionSample,
    DEFAULT_BURN_IN,
};
pub use rng::SeedSpec;

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

/// Declarative process description, as serialized in experiment
/// configurations. `build` validates it into a runnable [`Process`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "kebab-case")]
pub enum ProcessSpec {
    Iid {
        innovation: InnovationSpec,
    },
    Linear {
        coeffs: CoeffConfig,
        innovation: InnovationSpec,
        transform: Transform,
    },
    Recursion {
        #[serde(flatten)]
        kind: RecursionKind,
        innovation: InnovationSpec,
        #[serde(default = "default_burn_in")]
        burn_in: usize,
    },
}

impl ProcessSpec {
    /// Validates every part and caches what generation needs (truncated
    /// coefficient windows, centering constants, stationarity checks).
    pub fn build(&self) -> Result<Process> {
        match self {
            ProcessSpec::Iid { innovation } => {
                Ok(Process::Linear(LinearModel::iid(*innovation)?))
            }
            ProcessSpec::Linear { coeffs, innovation, transform } => Ok(Process::Linear(
                LinearModel::new(coeffs.build()?, *innovation, *transform)?,
            )),
            ProcessSpec::Recursion { kind, innovation, burn_in } => Ok(Process::Recursion(
                RecursionModel::with_burn_in(*kind, *innovation, *burn_in)?,
            )),
        }
    }
}

/// A validated, runnable process.
#[derive(Debug, Clone, PartialEq)]
pub enum Process {
    Linear(LinearModel),
    Recursion(RecursionModel),
}

impl Process {
    pub fn generate(&self, n: usize, seed: SeedSpec) -> Result<TimeSeries> {
        match self {
            Process::Linear(m) => Ok(gen_linear(m, n, seed)?.into_series()),
            Process::Recursion(m) => Ok(gen_recursion(m, n, seed)?.into_series()),
        }
    }

    pub fn innovation(&self) -> &InnovationSpec {
        match self {
            Process::Linear(m) => m.innovation(),
            Process::Recursion(m) => m.innovation(),
        }
    }

    /// Closed-form spectral density, available for identity-transform linear
    /// models (the iid case included).
    pub fn known_density(&self) -> Result<LinearDensity> {
        match self {
            Process::Linear(m) => m.density(),
            Process::Recursion(_) => Err(Error::InvalidArgument(
                "recursions have no closed-form spectral density here; estimate one instead"
                    .into(),
            )),
        }
    }

    pub fn coupled_theta(
        &self,
        k: usize,
        p: f64,
        reps: usize,
        seed: SeedSpec,
    ) -> Result<ThetaEstimate> {
        match self {
            Process::Linear(m) => coupled_theta_linear(m, k, p, reps, seed),
            Process::Recursion(m) => coupled_theta_recursion(m, k, p, reps, seed),
        }
    }

    pub fn linear(&self) -> Option<&LinearModel> {
        match self {
            Process::Linear(m) => Some(m),
            _ => None,
        }
    }

    pub fn recursion(&self) -> Option<&RecursionModel> {
        match self {
            Process::Recursion(m) => Some(m),
            _ => None,
        }
    }
}
