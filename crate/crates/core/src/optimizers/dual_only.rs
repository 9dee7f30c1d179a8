use std::time::Instant;

use super::{Budget, Method, OptimizerConfig};
use crate::cerm::NuInit;
use crate::dual_updates::{dual_sgd_step_batch, spmd_step};
use crate::error::{Error, Result};
use crate::logexp::logmeanexp;
use crate::problems::DualOnlyProblem;
use crate::record::RunRecord;
use crate::rng::Rng;

/// Iterates the scalar dual update on i.i.d. draws of `s`, `batch_inner`
/// draws per step.
///
/// Metrics, every `eval_every` steps (default `max(1, T/100)`) and at `T`:
/// `gap` (`F(nu_t) - F(nu*)`), `sq_error` (`(nu_t - nu*)^2`), and their running
/// averages over steps `1..=t`, `mean_gap` and `mean_sq_error`.
pub fn dual_only_run(problem: &DualOnlyProblem, cfg: &OptimizerConfig, seed: u64) -> Result<RunRecord> {
    cfg.validate()?;
    if !cfg.method.is_dual_only() {
        return Err(Error::Config(format!("{} is not a dual-only method", cfg.method)));
    }
    let total = match cfg.budget {
        Budget::Steps(s) => s,
        Budget::Epochs(e) => e,
    };
    let every = cfg.eval_every.unwrap_or((total / 100).max(1));
    let clamp = cfg.dual_clamp.resolve(problem.bounds());
    let nu_star = problem.stats.nu_star;
    let mut rng = Rng::new(seed);
    let mut record = RunRecord::new(cfg.method.name(), seed);
    let clock = Instant::now();
    let mut s = vec![0.0; cfg.batch_inner];

    let mut nu = match cfg.nu_init {
        NuInit::Constant(v) => v,
        NuInit::FromFirstBatch => f64::NAN,
    };
    if nu.is_finite() {
        record.push(0, 0.0, "gap", problem.gap(nu))?;
        record.push(0, 0.0, "sq_error", (nu - nu_star).powi(2))?;
    }
    let (mut sum_gap, mut sum_sq) = (0.0, 0.0);
    for t in 1..=total {
        for v in s.iter_mut() {
            *v = problem.sample_s(&mut rng);
        }
        let lme = logmeanexp(&s);
        if nu.is_nan() {
            nu = lme;
        }
        nu = match cfg.method {
            Method::DualSpmd => spmd_step(nu, lme, cfg.alpha.alpha(t, nu)?),
            Method::DualSgd => {
                let a = cfg.alpha.eta(t)?;
                if a > 0.0 {
                    dual_sgd_step_batch(nu, &s, a, clamp)?
                } else {
                    nu
                }
            }
            _ => unreachable!(),
        };
        if !nu.is_finite() {
            return Err(Error::Numerical(format!("nu became {nu} at step {t}")));
        }
        let gap = problem.gap(nu);
        let sq = (nu - nu_star).powi(2);
        sum_gap += gap;
        sum_sq += sq;
        if t % every == 0 || t == total {
            let secs = clock.elapsed().as_secs_f64();
            record.push(t, secs, "gap", gap)?;
            record.push(t, secs, "sq_error", sq)?;
            record.push(t, secs, "mean_gap", sum_gap / t as f64)?;
            record.push(t, secs, "mean_sq_error", sum_sq / t as f64)?;
        }
    }
    Ok(record)
}
