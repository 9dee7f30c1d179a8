//! Stochastic proximal mirror descent for compositional entropic risk
//! minimization, with the usual baselines, a set of desk-scale problems,
//! exact oracles, and a benchmark harness.

pub mod cerm;
pub mod dataio;
pub mod dual_updates;
pub mod error;
pub mod experiment;
pub mod logexp;
pub mod optimizers;
pub mod oracle;
pub mod problems;
pub mod record;
pub mod rng;
pub mod schedule;

pub use cerm::{project_primal, sample_batch, Batch, CermProblem, DualState, InnerSample, NuInit};
pub use error::{Error, Result};
pub use optimizers::{Budget, DualClamp, Method, OptimizerConfig, UmaxTrigger};
pub use oracle::ConvergenceBound;
pub use record::RunRecord;
pub use rng::Rng;
pub use schedule::{schedule_alpha, Alpha, StepSchedule};
