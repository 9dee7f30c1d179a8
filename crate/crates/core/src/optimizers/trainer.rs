use std::time::Instant;

use super::{Budget, Method, OptimizerConfig, UmaxTrigger};
use crate::cerm::{project_primal, sample_batch, Batch, CermProblem, DualState};
use crate::dual_updates::{
    dual_sgd_step_batch, softplus_dual_grad, softplus_sgd_step_batch, sox_step, spmd_step,
};
use crate::error::{Error, Result};
use crate::logexp::{logmeanexp, softmax_into};
use crate::oracle;
use crate::record::RunRecord;
use crate::rng::Rng;
use crate::schedule::{Alpha, StepSchedule};

/// Outcome of a single iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub t: u64,
    pub eta: f64,
    /// Whether every dual step size of the iteration satisfied
    /// `alpha <= rho e^{-nu_prev}`; `None` when not monitored.
    pub rho_ok: Option<bool>,
    /// U-max resets performed during the iteration.
    pub resets: usize,
}

/// Stochastic estimate of `grad_w F(w, nu)` from the batch's primal samples,
/// before the problem's objective scale is applied.
///
/// BSGD replaces `e^{s - nu_i} / m` with the softmax of the sample losses;
/// the softplus variant uses the surrogate's derivative.
pub fn primal_estimate(
    problem: &dyn CermProblem,
    method: Method,
    softplus_rho: Option<f64>,
    w: &[f64],
    nu: &[f64],
    batch: &Batch,
) -> Vec<f64> {
    let mut grad = vec![0.0; problem.dim()];
    let mut s = Vec::new();
    let mut weights = Vec::new();
    accumulate_primal(problem, method, softplus_rho, w, nu, batch, 1.0, &mut grad, &mut s, &mut weights);
    grad
}

#[allow(clippy::too_many_arguments)]
fn accumulate_primal(
    problem: &dyn CermProblem,
    method: Method,
    softplus_rho: Option<f64>,
    w: &[f64],
    nu: &[f64],
    batch: &Batch,
    scale: f64,
    grad: &mut [f64],
    s: &mut Vec<f64>,
    weights: &mut Vec<f64>,
) {
    let b = batch.anchors.len() as f64;
    for (pos, &i) in batch.anchors.iter().enumerate() {
        let samples = &batch.primal_samples()[pos];
        if samples.is_empty() {
            continue;
        }
        s.clear();
        s.extend(samples.iter().map(|&z| problem.loss(i, w, z)));
        let m = samples.len() as f64;
        match method {
            Method::Bsgd => softmax_into(s, weights),
            Method::AsgdSoftplus => {
                let rho = softplus_rho.unwrap_or(1.0);
                weights.clear();
                weights.extend(s.iter().map(|&v| softplus_dual_grad(v - nu[i], rho) / m));
            }
            _ => {
                weights.clear();
                weights.extend(s.iter().map(|&v| (v - nu[i]).exp() / m));
            }
        }
        for (&z, &c) in samples.iter().zip(weights.iter()) {
            if c != 0.0 {
                problem.loss_and_grad(i, w, z, scale * c / b, grad);
            }
        }
    }
}

/// A single optimization run, advanced one iteration at a time.
pub struct Trainer<'a> {
    problem: &'a dyn CermProblem,
    cfg: OptimizerConfig,
    w: Vec<f64>,
    velocity: Vec<f64>,
    dual: DualState,
    rng: Rng,
    t: u64,
    clamp: Option<(f64, f64)>,
    grad: Vec<f64>,
    s: Vec<f64>,
    weights: Vec<f64>,
}

impl<'a> Trainer<'a> {
    pub fn new(problem: &'a dyn CermProblem, cfg: OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<Self> {
        cfg.validate()?;
        if cfg.method.is_dual_only() {
            return Err(Error::Config(format!("{} runs on dual-only problems", cfg.method)));
        }
        if w0.len() != problem.dim() {
            return Err(Error::InvalidArgument(format!(
                "initial point has length {}, problem dimension is {}",
                w0.len(),
                problem.dim()
            )));
        }
        if cfg.batch_anchors > problem.n_anchors() {
            return Err(Error::Config(format!(
                "batch of {} anchors exceeds the {} available",
                cfg.batch_anchors,
                problem.n_anchors()
            )));
        }
        let mut w = w0;
        project_primal(&mut w, problem.projection_radius());
        let dim = problem.dim();
        Ok(Self {
            problem,
            clamp: cfg.dual_clamp.resolve(problem.bounds()),
            dual: DualState::new(problem.n_anchors(), cfg.nu_init),
            cfg,
            w,
            velocity: vec![0.0; dim],
            rng: Rng::new(seed),
            t: 0,
            grad: vec![0.0; dim],
            s: Vec::new(),
            weights: Vec::new(),
        })
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn nu(&self) -> &[f64] {
        &self.dual.nu
    }

    pub fn dual(&self) -> &DualState {
        &self.dual
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn config(&self) -> &OptimizerConfig {
        &self.cfg
    }

    pub fn total_steps(&self) -> u64 {
        match self.cfg.budget {
            Budget::Steps(s) => s,
            Budget::Epochs(e) => e * self.steps_per_epoch(),
        }
    }

    pub fn steps_per_epoch(&self) -> u64 {
        self.problem.steps_per_epoch(self.cfg.batch_anchors, self.cfg.batch_inner) as u64
    }

    /// Draws the next batch and applies the dual then the primal update.
    pub fn step(&mut self) -> Result<StepInfo> {
        self.t += 1;
        let t = self.t;
        let eta = self.cfg.eta.eta(t)?;
        let batch = sample_batch(
            self.problem,
            self.cfg.batch_anchors,
            self.cfg.batch_inner,
            self.cfg.reuse_inner_sample,
            &mut self.rng,
        )?;
        let mut rho_ok = self.cfg.rho_monitor.map(|_| true);
        let mut resets = 0;
        for (pos, &i) in batch.anchors.iter().enumerate() {
            self.s.clear();
            self.s.extend(batch.dual[pos].iter().map(|&z| self.problem.loss(i, &self.w, z)));
            if self.s.is_empty() {
                continue;
            }
            let lme = logmeanexp(&self.s);
            let nu_prev = self.dual.begin_visit(i, lme);
            let nu_new = match self.cfg.method {
                Method::Scent => {
                    let clock = match self.cfg.alpha {
                        StepSchedule::ErmRate => self.dual.visits(i),
                        _ => t,
                    };
                    let alpha = self.cfg.alpha.alpha(clock, nu_prev)?;
                    if let (Some(rho), Some(ok)) = (self.cfg.rho_monitor, rho_ok.as_mut()) {
                        *ok &= match alpha {
                            Alpha::Infinite => false,
                            Alpha::Finite { ln } => ln <= rho.ln() - nu_prev,
                        };
                    }
                    spmd_step(nu_prev, lme, alpha)
                }
                Method::Sox => {
                    let gamma = self.cfg.sox_gamma.unwrap_or(1.0);
                    let gamma = match self.cfg.sox_gamma_horizon {
                        Some(h) => StepSchedule::Cosine { base: gamma, horizon: h }.eta(t)?,
                        None => gamma,
                    };
                    sox_step(nu_prev, lme, gamma)?
                }
                Method::Bsgd => lme,
                Method::Asgd | Method::Umax => {
                    let a = self.cfg.alpha.eta(t)?;
                    let mut v = if a > 0.0 {
                        dual_sgd_step_batch(nu_prev, &self.s, a, self.clamp)?
                    } else {
                        nu_prev
                    };
                    if self.cfg.method == Method::Umax {
                        let delta = self.cfg.umax_delta.unwrap_or(f64::INFINITY);
                        let fire = match self.cfg.umax_trigger {
                            UmaxTrigger::Lagging => lme > v + delta,
                            UmaxTrigger::Deviation => (lme - v).abs() > delta,
                        };
                        if fire {
                            v = lme;
                            resets += 1;
                        }
                    }
                    v
                }
                Method::AsgdSoftplus => {
                    let a = self.cfg.alpha.eta(t)?;
                    if a > 0.0 {
                        let rho = self.cfg.softplus_rho.unwrap_or(1.0);
                        softplus_sgd_step_batch(nu_prev, &self.s, a, rho, self.clamp)?
                    } else {
                        nu_prev
                    }
                }
                Method::DualSpmd | Method::DualSgd => unreachable!("rejected in Trainer::new"),
            };
            if !nu_new.is_finite() {
                return Err(Error::Numerical(format!("nu[{i}] became {nu_new} at step {t}")));
            }
            self.dual.nu[i] = nu_new;
        }

        self.grad.iter_mut().for_each(|g| *g = 0.0);
        accumulate_primal(
            self.problem,
            self.cfg.method,
            self.cfg.softplus_rho,
            &self.w,
            &self.dual.nu,
            &batch,
            self.problem.objective_scale(),
            &mut self.grad,
            &mut self.s,
            &mut self.weights,
        );
        let beta = self.cfg.momentum;
        for ((w, v), g) in self.w.iter_mut().zip(self.velocity.iter_mut()).zip(&self.grad) {
            *v = beta * *v + g;
            *w -= eta * *v;
        }
        project_primal(&mut self.w, self.problem.projection_radius());
        if self.w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("primal iterate became non-finite at step {t}")));
        }
        Ok(StepInfo { t, eta, rho_ok, resets })
    }

    /// Scaled full-batch objective and mean squared dual error at the
    /// current iterate.
    pub fn evaluate(&self) -> (f64, f64) {
        let star = oracle::dual_optimum(self.problem, &self.w);
        let objective = self.problem.objective_scale() * star.iter().sum::<f64>() / star.len() as f64;
        let dual_error =
            star.iter().zip(&self.dual.nu).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / star.len() as f64;
        (objective, dual_error)
    }
}

/// Runs `cfg` from `w0` and records `objective` and `dual_error` at step 0
/// and at every evaluation point, plus `rho_condition` and `resets`
/// when relevant.
pub fn train(
    problem: &dyn CermProblem,
    cfg: &OptimizerConfig,
    w0: Vec<f64>,
    seed: u64,
    config_id: &str,
) -> Result<(RunRecord, Vec<f64>)> {
    let mut trainer = Trainer::new(problem, cfg.clone(), w0, seed)?;
    let total = trainer.total_steps();
    let every = cfg.eval_every.unwrap_or_else(|| trainer.steps_per_epoch());
    let mut record = RunRecord::new(config_id, seed);
    let clock = Instant::now();
    let log = |rec: &mut RunRecord, tr: &Trainer, t: u64| -> Result<()> {
        let (obj, err) = tr.evaluate();
        let secs = clock.elapsed().as_secs_f64();
        rec.push(t, secs, "objective", obj)?;
        rec.push(t, secs, "dual_error", err)
    };
    log(&mut record, &trainer, 0)?;
    let mut rho_all = true;
    let mut resets = 0usize;
    for t in 1..=total {
        let info = trainer.step()?;
        if let Some(ok) = info.rho_ok {
            rho_all &= ok;
        }
        resets += info.resets;
        if t % every == 0 || t == total {
            log(&mut record, &trainer, t)?;
            let secs = clock.elapsed().as_secs_f64();
            if cfg.rho_monitor.is_some() {
                record.push(t, secs, "rho_condition", if rho_all { 1.0 } else { 0.0 })?;
                rho_all = true;
            }
            if cfg.method == Method::Umax {
                record.push(t, secs, "resets", resets as f64)?;
            }
        }
    }
    Ok((record, trainer.w))
}

fn run_checked(
    problem: &dyn CermProblem,
    cfg: &OptimizerConfig,
    w0: Vec<f64>,
    seed: u64,
    allowed: &[Method],
) -> Result<RunRecord> {
    if !allowed.contains(&cfg.method) {
        return Err(Error::Config(format!("method {} is not valid here", cfg.method)));
    }
    let id = cfg.method.name();
    train(problem, cfg, w0, seed, id).map(|(r, _)| r)
}

pub fn scent_run(problem: &dyn CermProblem, cfg: &OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<RunRecord> {
    run_checked(problem, cfg, w0, seed, &[Method::Scent])
}

pub fn bsgd_run(problem: &dyn CermProblem, cfg: &OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<RunRecord> {
    run_checked(problem, cfg, w0, seed, &[Method::Bsgd])
}

pub fn asgd_run(problem: &dyn CermProblem, cfg: &OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<RunRecord> {
    run_checked(problem, cfg, w0, seed, &[Method::Asgd, Method::AsgdSoftplus])
}

pub fn umax_run(problem: &dyn CermProblem, cfg: &OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<RunRecord> {
    run_checked(problem, cfg, w0, seed, &[Method::Umax])
}

pub fn sox_run(problem: &dyn CermProblem, cfg: &OptimizerConfig, w0: Vec<f64>, seed: u64) -> Result<RunRecord> {
    run_checked(problem, cfg, w0, seed, &[Method::Sox])
}
