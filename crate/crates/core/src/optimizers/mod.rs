//! Optimization loops for the joint `(w, nu)` problem and for the scalar
//! dual problem.

mod dual_only;
mod trainer;

pub use dual_only::dual_only_run;
pub use trainer::{
    asgd_run, bsgd_run, primal_estimate, scent_run, sox_run, train, umax_run, StepInfo, Trainer,
};

use std::fmt;
use std::str::FromStr;

use crate::cerm::NuInit;
use crate::error::{Error, Result};
use crate::schedule::StepSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Scent,
    Bsgd,
    Asgd,
    AsgdSoftplus,
    Umax,
    Sox,
    DualSpmd,
    DualSgd,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Scent,
        Method::Bsgd,
        Method::Asgd,
        Method::AsgdSoftplus,
        Method::Umax,
        Method::Sox,
        Method::DualSpmd,
        Method::DualSgd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Scent => "scent",
            Method::Bsgd => "bsgd",
            Method::Asgd => "asgd",
            Method::AsgdSoftplus => "asgd_softplus",
            Method::Umax => "umax",
            Method::Sox => "sox",
            Method::DualSpmd => "dual_spmd",
            Method::DualSgd => "dual_sgd",
        }
    }

    pub fn is_dual_only(self) -> bool {
        matches!(self, Method::DualSpmd | Method::DualSgd)
    }

    /// Methods whose dual update is an SGD step with step `alpha'`.
    pub fn uses_sgd_dual(self) -> bool {
        matches!(self, Method::Asgd | Method::AsgdSoftplus | Method::Umax | Method::DualSgd)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        match norm.as_str() {
            "scgd" => return Ok(Method::Sox),
            "softplus" => return Ok(Method::AsgdSoftplus),
            "u_max" => return Ok(Method::Umax),
            _ => {}
        }
        Method::ALL
            .into_iter()
            .find(|m| m.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// When U-max replaces `nu_i` by the batch log-mean-exp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UmaxTrigger {
    /// `lme > nu_i + delta`.
    Lagging,
    /// `|lme - nu_i| > delta`.
    Deviation,
}

/// Projection applied by the SGD-type dual steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DualClamp {
    /// The problem's declared bounds, when it has any.
    Problem,
    Unclamped,
    Fixed(f64, f64),
}

impl DualClamp {
    pub fn resolve(self, declared: Option<(f64, f64)>) -> Option<(f64, f64)> {
        match self {
            DualClamp::Problem => declared,
            DualClamp::Unclamped => None,
            DualClamp::Fixed(a, b) => Some((a, b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Epochs(u64),
    Steps(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub eta: StepSchedule,
    /// Dual step rule. SGD-type dual updates read its state-free value as
    /// `alpha'`; zero freezes `nu`.
    pub alpha: StepSchedule,
    pub batch_anchors: usize,
    pub batch_inner: usize,
    pub momentum: f64,
    pub budget: Budget,
    pub softplus_rho: Option<f64>,
    pub umax_delta: Option<f64>,
    pub umax_trigger: UmaxTrigger,
    pub sox_gamma: Option<f64>,
    /// When set, SOX's `gamma` decays on a cosine over this many steps.
    pub sox_gamma_horizon: Option<u64>,
    pub nu_init: NuInit,
    pub reuse_inner_sample: bool,
    pub dual_clamp: DualClamp,
    /// Evaluation cadence in steps; `None` means once per epoch (or every
    /// `max(1, T/100)` steps for the dual-only methods).
    pub eval_every: Option<u64>,
    /// When set, log whether `alpha_t <= rho min_i e^{-nu_i}` held.
    pub rho_monitor: Option<f64>,
}

impl OptimizerConfig {
    /// Defaults for `method`: constant rates, batch 1, no momentum, one epoch,
    /// and the method-specific constants filled in.
    pub fn new(method: Method) -> Self {
        Self {
            method,
            eta: StepSchedule::Constant(0.1),
            alpha: match method {
                Method::Bsgd => StepSchedule::Infinite,
                _ => StepSchedule::Constant(1.0),
            },
            batch_anchors: 1,
            batch_inner: 1,
            momentum: 0.0,
            budget: Budget::Epochs(1),
            softplus_rho: (method == Method::AsgdSoftplus).then_some(1e-3),
            umax_delta: (method == Method::Umax).then_some(1.0),
            umax_trigger: UmaxTrigger::Lagging,
            sox_gamma: (method == Method::Sox).then_some(0.9),
            sox_gamma_horizon: None,
            nu_init: NuInit::FromFirstBatch,
            reuse_inner_sample: false,
            dual_clamp: DualClamp::Problem,
            eval_every: None,
            rho_monitor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.method;
        if self.batch_anchors == 0 || self.batch_inner == 0 {
            return Err(Error::Config("batch sizes must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!("momentum {} outside [0, 1)", self.momentum)));
        }
        match self.budget {
            Budget::Epochs(0) | Budget::Steps(0) => return Err(Error::Config("budget must be positive".into())),
            _ => {}
        }
        if self.eval_every == Some(0) {
            return Err(Error::Config("evaluation cadence must be positive".into()));
        }
        let need = |present: bool, wanted: bool, name: &str| -> Result<()> {
            match (present, wanted) {
                (true, false) => Err(Error::Config(format!("{name} is not used by method {m}"))),
                (false, true) => Err(Error::Config(format!("method {m} requires {name}"))),
                _ => Ok(()),
            }
        };
        need(self.softplus_rho.is_some(), m == Method::AsgdSoftplus, "softplus_rho")?;
        need(self.umax_delta.is_some(), m == Method::Umax, "umax_delta")?;
        need(self.sox_gamma.is_some(), m == Method::Sox, "sox_gamma")?;
        if self.sox_gamma_horizon.is_some() && m != Method::Sox {
            return Err(Error::Config(format!("sox_gamma_schedule is not used by method {m}")));
        }
        if let Some(rho) = self.softplus_rho {
            if !(rho > 0.0) {
                return Err(Error::Config(format!("softplus_rho must be positive, got {rho}")));
            }
        }
        if let Some(d) = self.umax_delta {
            if !(d >= 0.0) {
                return Err(Error::Config(format!("umax_delta must be nonnegative, got {d}")));
            }
        }
        if let Some(g) = self.sox_gamma {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::Config(format!("sox_gamma must lie in (0, 1], got {g}")));
            }
        }
        if let NuInit::Constant(v) = self.nu_init {
            if !v.is_finite() {
                return Err(Error::Config("constant nu init must be finite".into()));
            }
        }
        if let DualClamp::Fixed(a, b) = self.dual_clamp {
            if !(a <= b) {
                return Err(Error::Config(format!("clamp interval ({a}, {b}) is empty")));
            }
        }
        if !m.is_dual_only() {
            // the primal rule must evaluate to a nonnegative step at t = 1
            self.eta.eta(1)?;
        }
        if m.uses_sgd_dual() {
            self.alpha.eta(1).map_err(|_| {
                Error::Config(format!("method {m} needs a state-free dual step (constant, inv_sqrt_T or cosine)"))
            })?;
        } else if matches!(m, Method::Scent | Method::DualSpmd) {
            self.alpha.alpha(1, 0.0)?;
        }
        Ok(())
    }
}
