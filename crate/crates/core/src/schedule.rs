//! Step-size rules for the primal (`eta_t`) and dual (`alpha_t`) updates.

use crate::error::{Error, Result};

/// A dual step size. `Infinite` is a distinguished value (the update then
/// snaps to the sample estimate); it never enters floating-point arithmetic.
/// Finite values are stored by their logarithm so that rules like
/// `gamma' e^{-nu}` stay representable for any `nu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    Finite { ln: f64 },
    Infinite,
}

impl Alpha {
    pub fn finite(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Alpha::Finite { ln: value.ln() })
        } else if value == f64::INFINITY {
            Ok(Alpha::Infinite)
        } else {
            Err(Error::InvalidArgument(format!("step size must be positive, got {value}")))
        }
    }

    /// `Alpha` with the given natural logarithm.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan());
        if ln == f64::INFINITY {
            Alpha::Infinite
        } else {
            Alpha::Finite { ln }
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::Finite { ln } => ln.exp(),
            Alpha::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Alpha::Infinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// `base / sqrt(horizon)` at every step.
    InvSqrtT { base: f64, horizon: u64 },
    /// `base * (1 + cos(pi (t-1) / horizon)) / 2`.
    Cosine { base: f64, horizon: u64 },
    /// `pi_{t-1} / (t-1)`, infinite at `t = 1`; `t` counts visits of the coordinate.
    ErmRate,
    /// `gamma' e^{-nu_{t-1}}` per coordinate.
    SoxRate { gamma_prime: f64 },
    Infinite,
}

impl StepSchedule {
    /// Dual step size at step `t >= 1` given the coordinate's previous value.
    pub fn alpha(&self, t: u64, nu_prev: f64) -> Result<Alpha> {
        if t == 0 {
            return Err(Error::InvalidArgument("steps are numbered from 1".into()));
        }
        Ok(match *self {
            StepSchedule::Constant(_) | StepSchedule::InvSqrtT { .. } | StepSchedule::Cosine { .. } => {
                Alpha::finite(self.value_at(t)?)?
            }
            StepSchedule::ErmRate => {
                if t == 1 {
                    Alpha::Infinite
                } else {
                    Alpha::from_ln(-nu_prev - ((t - 1) as f64).ln())
                }
            }
            StepSchedule::SoxRate { gamma_prime } => {
                if gamma_prime <= 0.0 || !gamma_prime.is_finite() {
                    return Err(Error::Config(format!("gamma' must be positive, got {gamma_prime}")));
                }
                Alpha::from_ln(gamma_prime.ln() - nu_prev)
            }
            StepSchedule::Infinite => Alpha::Infinite,
        })
    }

    /// Primal step size at step `t`. Only the state-free kinds are allowed;
    /// zero is permitted (it freezes the primal variable).
    pub fn eta(&self, t: u64) -> Result<f64> {
        match self {
            StepSchedule::Constant(_) | StepSchedule::InvSqrtT { .. } | StepSchedule::Cosine { .. } => {
                let v = self.value_at(t)?;
                if v < 0.0 || !v.is_finite() {
                    Err(Error::Config(format!("primal step size must be nonnegative, got {v}")))
                } else {
                    Ok(v)
                }
            }
            other => Err(Error::Config(format!("{other:?} is not a primal step-size rule"))),
        }
    }

    fn value_at(&self, t: u64) -> Result<f64> {
        Ok(match *self {
            StepSchedule::Constant(base) => base,
            StepSchedule::InvSqrtT { base, horizon } => {
                if horizon == 0 {
                    return Err(Error::Config("horizon must be positive".into()));
                }
                base / (horizon as f64).sqrt()
            }
            StepSchedule::Cosine { base, horizon } => {
                if horizon == 0 {
                    return Err(Error::Config("horizon must be positive".into()));
                }
                let frac = (t.saturating_sub(1)) as f64 / horizon as f64;
                base * 0.5 * (1.0 + (std::f64::consts::PI * frac.min(1.0)).cos())
            }
            _ => unreachable!("state-dependent schedules have no closed-form value"),
        })
    }

    /// True for the rules whose value depends on the coordinate's visit count.
    pub fn is_per_coordinate_count(&self) -> bool {
        matches!(self, StepSchedule::ErmRate)
    }
}

/// Convenience: `schedule.alpha(t, nu_prev)`.
pub fn schedule_alpha(schedule: &StepSchedule, t: u64, nu_prev: f64) -> Result<Alpha> {
    schedule.alpha(t, nu_prev)
}
