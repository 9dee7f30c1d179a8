//! Dual updates under the potential `phi(nu) = e^{-nu}`.
//!
//! All exponentials are taken through [`logaddexp`], so every update is
//! finite for finite inputs regardless of the magnitude of `s`.

use crate::error::{Error, Result};
use crate::logexp::{logaddexp, logmeanexp, sigmoid, softplus};
use crate::schedule::Alpha;

/// Bregman divergence of `e^{-nu}`: `e^{-a} - e^{-b} + e^{-b} (a - b)`.
pub fn bregman_exp(a: f64, b: f64) -> f64 {
    let eb = (-b).exp();
    // e^{-b} (e^{-(a-b)} - 1 + (a-b)); the bracket is >= 0 and computed stably
    let d = a - b;
    let bracket = (-d).exp_m1() + d;
    eb * bracket.max(0.0)
}

/// Closed-form proximal step
/// `argmin_nu e^{s-nu} + nu + D(nu, nu_prev) / alpha`.
pub fn spmd_step(nu_prev: f64, s_value: f64, alpha: Alpha) -> f64 {
    match alpha {
        Alpha::Infinite => s_value,
        Alpha::Finite { .. } if s_value == nu_prev => nu_prev,
        Alpha::Finite { ln } => nu_prev + softplus(ln + s_value) - softplus(ln + nu_prev),
    }
}

/// [`spmd_step`] with `e^s` replaced by the batch mean of `e^{s_j}`.
pub fn spmd_step_batch(nu_prev: f64, s_values: &[f64], alpha: Alpha) -> Result<f64> {
    if s_values.is_empty() {
        return Err(Error::InvalidArgument("empty sample batch".into()));
    }
    Ok(spmd_step(nu_prev, logmeanexp(s_values), alpha))
}

/// Projected SGD step `nu - alpha' (1 - e^{s - nu})`, clamped to `clamp`
/// when given.
pub fn dual_sgd_step(nu_prev: f64, s_value: f64, alpha_prime: f64, clamp: Option<(f64, f64)>) -> Result<f64> {
    if !(alpha_prime > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha' must be positive, got {alpha_prime}")));
    }
    let g = 1.0 - (s_value - nu_prev).exp();
    Ok(clamp_to(nu_prev - alpha_prime * g, clamp))
}

/// SGD step whose stochastic gradient is `1 - mean_j e^{s_j - nu}`,
/// i.e. [`dual_sgd_step`] on the batch log-mean-exp.
pub fn dual_sgd_step_batch(
    nu_prev: f64,
    s_values: &[f64],
    alpha_prime: f64,
    clamp: Option<(f64, f64)>,
) -> Result<f64> {
    if s_values.is_empty() {
        return Err(Error::InvalidArgument("empty sample batch".into()));
    }
    dual_sgd_step(nu_prev, logmeanexp(s_values), alpha_prime, clamp)
}

/// `log(1 + rho e^x) / rho`.
pub fn softplus_dual_value(s_minus_nu: f64, rho: f64) -> f64 {
    softplus(s_minus_nu + rho.ln()) / rho
}

/// Derivative of [`softplus_dual_value`] in `x`: `e^x / (1 + rho e^x)`.
pub fn softplus_dual_grad(s_minus_nu: f64, rho: f64) -> f64 {
    sigmoid(s_minus_nu + rho.ln()) / rho
}

/// Dual SGD step on the softplus surrogate
/// `softplus_dual_value(s - nu) + nu`, averaged over the batch.
pub fn softplus_sgd_step_batch(
    nu_prev: f64,
    s_values: &[f64],
    alpha_prime: f64,
    rho: f64,
    clamp: Option<(f64, f64)>,
) -> Result<f64> {
    if s_values.is_empty() {
        return Err(Error::InvalidArgument("empty sample batch".into()));
    }
    if !(alpha_prime > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha' must be positive, got {alpha_prime}")));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    let mean_d = s_values.iter().map(|&s| softplus_dual_grad(s - nu_prev, rho)).sum::<f64>() / s_values.len() as f64;
    Ok(clamp_to(nu_prev - alpha_prime * (1.0 - mean_d), clamp))
}

/// Step size of the empirical-minimizer schedule at visit `t`:
/// infinite at `t = 1`, `e^{-nu_prev} / (t - 1)` afterwards.
pub fn erm_rate_state(nu_prev: f64, t: u64) -> Alpha {
    if t <= 1 {
        Alpha::Infinite
    } else {
        Alpha::from_ln(-nu_prev - ((t - 1) as f64).ln())
    }
}

/// Moving average `u_t = (1-gamma) u_{t-1} + gamma e^{s}` in log domain.
pub fn sox_step(nu_prev: f64, s_value: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    if gamma == 1.0 {
        return Ok(s_value);
    }
    Ok(logaddexp((-gamma).ln_1p() + nu_prev, gamma.ln() + s_value))
}

/// Dual-only objective `m e^{-nu} + nu` (minimized at `nu = log m` with
/// value `log m + 1`), written in terms of `log m`.
pub fn dual_objective(log_m: f64, nu: f64) -> f64 {
    (log_m - nu).exp() + nu
}

/// Suboptimality `F(nu) - F(log m)`; equals `bregman_exp(nu, log m)` scaled by `m`.
pub fn dual_gap(log_m: f64, nu: f64) -> f64 {
    let d = log_m - nu;
    // e^d - 1 - d, accurate near d = 0
    (d.exp_m1() - d).max(0.0)
}

fn clamp_to(v: f64, clamp: Option<(f64, f64)>) -> f64 {
    match clamp {
        Some((lo, hi)) => v.clamp(lo, hi),
        None => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    fn fin(a: f64) -> Alpha {
        Alpha::finite(a).unwrap()
    }

    #[test]
    fn bregman_values() {
        assert_eq!(bregman_exp(0.7, 0.7), 0.0);
        assert!((bregman_exp(0.0, 1.0) - 0.264_241_117_657_115_4).abs() < 1e-15);
        assert!((bregman_exp(1.0, 0.0) - 0.367_879_441_171_442_3).abs() < 1e-15);
    }

    #[test]
    fn spmd_values() {
        assert_eq!(spmd_step(5.0, 5.0, fin(0.3)), 5.0);
        assert!((spmd_step(0.0, 1.0, fin(1.0)) - 0.620_114_506_958_278_8).abs() < 1e-14);
        let big = spmd_step(0.0, 700.0, fin(1.0));
        assert!((big - (700.0 - LN_2)).abs() < 1e-12);
        assert_eq!(spmd_step(-3.0, 2.5, Alpha::Infinite), 2.5);
    }

    #[test]
    fn spmd_batch_values() {
        assert_eq!(spmd_step_batch(9.0, &[1.5, 1.5, 1.5], Alpha::Infinite).unwrap(), 1.5);
        let v = spmd_step_batch(0.0, &[0.0, 3f64.ln()], Alpha::Infinite).unwrap();
        assert!((v - LN_2).abs() < 1e-15);
        assert_eq!(spmd_step_batch(0.0, &[0.0], fin(1.0)).unwrap(), 0.0);
        assert!(spmd_step_batch(0.0, &[], fin(1.0)).is_err());
    }

    #[test]
    fn dual_sgd_values() {
        assert_eq!(dual_sgd_step(1.3, 1.3, 7.0, Some((0.0, 2.0))).unwrap(), 1.3);
        assert!((dual_sgd_step(0.0, LN_2, 1.0, Some((-10.0, 10.0))).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(dual_sgd_step(0.0, -100.0, 100.0, Some((-1.0, 1.0))).unwrap(), -1.0);
        assert!(dual_sgd_step(0.0, 0.0, 0.0, None).is_err());
        assert!(dual_sgd_step(0.0, 0.0, -1.0, None).is_err());
    }

    #[test]
    fn softplus_values() {
        assert!((softplus_dual_value(0.0, 1.0) - LN_2).abs() < 1e-15);
        assert!((softplus_dual_value(800.0, 1.0) - 800.0).abs() < 1e-12);
        let v = softplus_dual_value(1.0, 1e-6);
        assert!(((v - E) / E).abs() < 1e-5);
    }

    #[test]
    fn erm_rate_chain() {
        assert_eq!(erm_rate_state(0.3, 1), Alpha::Infinite);
        assert!((erm_rate_state(LN_2, 2).value() - 0.5).abs() < 1e-15);
        let z = [2.0f64, 4.0];
        let nu1 = spmd_step(0.0, z[0].ln(), erm_rate_state(0.0, 1));
        let nu2 = spmd_step(nu1, z[1].ln(), erm_rate_state(nu1, 2));
        assert!((nu2 - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sox_fixed_point_and_snap() {
        assert_eq!(sox_step(0.4, 2.0, 1.0).unwrap(), 2.0);
        assert!((sox_step(1.7, 1.7, 0.5).unwrap() - 1.7).abs() < 1e-15);
        assert!(sox_step(0.0, 0.0, 0.0).is_err());
        assert!(sox_step(0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn gap_matches_objective_difference() {
        for &(lm, nu) in &[(0.3, -1.0), (2.0, 2.5), (-4.0, -4.0)] {
            let direct = dual_objective(lm, nu) - dual_objective(lm, lm);
            assert!((dual_gap(lm, nu) - direct).abs() < 1e-12);
        }
    }
}
