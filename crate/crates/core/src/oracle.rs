//! Exact evaluators over finite inner populations, Monte Carlo
//! diagnostics, and closed-form convergence bounds.

use crate::cerm::CermProblem;
use crate::dual_updates::{bregman_exp, dual_gap};
use crate::error::{Error, Result};
use crate::logexp::{logmeanexp, softmax_into};
use crate::problems::DistributionStats;
use crate::rng::Rng;

fn anchor_losses(problem: &dyn CermProblem, i: usize, w: &[f64], buf: &mut Vec<f64>) {
    buf.clear();
    let m = problem.population_size(i);
    buf.extend((0..m).map(|k| problem.loss(i, w, problem.population_item(i, k))));
}

/// `(1/n) sum_i log mean_k e^{s_i(w; k)}` over the whole inner population.
/// The problem's objective scale is not applied.
pub fn full_objective(problem: &dyn CermProblem, w: &[f64]) -> f64 {
    let n = problem.n_anchors();
    let mut buf = Vec::new();
    let mut total = 0.0;
    for i in 0..n {
        anchor_losses(problem, i, w, &mut buf);
        total += logmeanexp(&buf);
    }
    total / n as f64
}

/// `(1/n) sum_i [mean_k e^{s_i(w; k) - nu_i} + nu_i]`.
pub fn full_joint_objective(problem: &dyn CermProblem, w: &[f64], nu: &[f64]) -> f64 {
    let n = problem.n_anchors();
    let mut buf = Vec::new();
    let mut total = 0.0;
    for i in 0..n {
        anchor_losses(problem, i, w, &mut buf);
        total += (logmeanexp(&buf) - nu[i]).exp() + nu[i];
    }
    total / n as f64
}

/// `nu_i* = log mean_k e^{s_i(w; k)}`.
pub fn dual_optimum(problem: &dyn CermProblem, w: &[f64]) -> Vec<f64> {
    let mut buf = Vec::new();
    (0..problem.n_anchors())
        .map(|i| {
            anchor_losses(problem, i, w, &mut buf);
            logmeanexp(&buf)
        })
        .collect()
}

/// Gradient of [`full_objective`]: softmax-weighted average of `grad s`.
pub fn full_gradient(problem: &dyn CermProblem, w: &[f64]) -> Vec<f64> {
    let n = problem.n_anchors();
    let mut grad = vec![0.0; problem.dim()];
    let mut buf = Vec::new();
    let mut weights = Vec::new();
    for i in 0..n {
        anchor_losses(problem, i, w, &mut buf);
        softmax_into(&buf, &mut weights);
        for (k, &p) in weights.iter().enumerate() {
            problem.loss_and_grad(i, w, problem.population_item(i, k), p / n as f64, &mut grad);
        }
    }
    grad
}

/// Gradient in `w` of [`full_joint_objective`] at fixed `nu`.
pub fn full_joint_gradient(problem: &dyn CermProblem, w: &[f64], nu: &[f64]) -> Vec<f64> {
    let n = problem.n_anchors();
    let mut grad = vec![0.0; problem.dim()];
    let mut buf = Vec::new();
    for i in 0..n {
        anchor_losses(problem, i, w, &mut buf);
        let m = buf.len() as f64;
        for (k, &s) in buf.iter().enumerate() {
            let c = (s - nu[i]).exp() / (m * n as f64);
            problem.loss_and_grad(i, w, problem.population_item(i, k), c, &mut grad);
        }
    }
    grad
}

/// Minimizer of `e^{s-nu} + nu + D(nu, nu_prev)/alpha` by bisection on the
/// first-order condition, to an interval of width `1e-12`.
pub fn prox_bruteforce(nu_prev: f64, s_value: f64, alpha: f64) -> f64 {
    let fo = |nu: f64| 1.0 - (s_value - nu).exp() + ((-nu_prev).exp() - (-nu).exp()) / alpha;
    let mut lo = nu_prev.min(s_value) - 1.0;
    let mut hi = nu_prev.max(s_value) + 1.0;
    debug_assert!(fo(lo) <= 0.0 && fo(hi) >= 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fo(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central finite-difference gradient with step `1e-5 (1 + |w|_inf)`.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, w: &[f64]) -> Vec<f64> {
    let h = 1e-5 * (1.0 + w.iter().fold(0.0f64, |a, x| a.max(x.abs())));
    let mut x = w.to_vec();
    (0..w.len())
        .map(|j| {
            x[j] = w[j] + h;
            let up = f(&x);
            x[j] = w[j] - h;
            let down = f(&x);
            x[j] = w[j];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Monte Carlo estimates of the two variance terms, averaged over anchors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// `E |e^{s - nu} grad s|^2`.
    pub sigma_sq: f64,
    /// `E[e^{-nu} (e^s - E e^s)^2]`.
    pub delta_sq: f64,
    pub n_samples: usize,
}

/// Draws `n_samples` inner samples per anchor. Cost is
/// `n_anchors * n_samples` loss-gradient evaluations.
pub fn estimate_diagnostics(
    problem: &dyn CermProblem,
    w: &[f64],
    nu: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Diagnostics> {
    if n_samples < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 samples, got {n_samples}")));
    }
    let n = problem.n_anchors();
    let mut rng = Rng::new(seed);
    let mut grad = vec![0.0; problem.dim()];
    let mut s = Vec::with_capacity(n_samples);
    let (mut sigma_sq, mut delta_sq) = (0.0, 0.0);
    for i in 0..n {
        let pop = problem.population_size(i);
        s.clear();
        let mut sig = 0.0;
        for _ in 0..n_samples {
            let zeta = problem.population_item(i, rng.index(pop));
            grad.iter_mut().for_each(|g| *g = 0.0);
            let v = problem.loss_and_grad(i, w, zeta, 1.0, &mut grad);
            let norm_sq: f64 = grad.iter().map(|g| g * g).sum();
            sig += (2.0 * (v - nu[i])).exp() * norm_sq;
            s.push(v);
        }
        sigma_sq += sig / n_samples as f64;
        // e^{-nu} Var(e^s), shifted by the max for stability
        let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = s.iter().map(|v| (v - max).exp()).collect();
        let mean = e.iter().sum::<f64>() / n_samples as f64;
        let var = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n_samples as f64;
        delta_sq += (2.0 * max - nu[i]).exp() * var;
    }
    Ok(Diagnostics {
        sigma_sq: sigma_sq / n as f64,
        delta_sq: delta_sq / n as f64,
        n_samples,
    })
}

/// Upper bounds `4 s'^2 (gap_t + 1)^2` and `2 (kappa - 1) m (gap_{t-1} + 1)`
/// on the variance terms. Without `sigma_prime` there is nothing to report.
pub fn variance_bounds(
    sigma_prime: Option<f64>,
    kappa: f64,
    m: f64,
    joint_gap: f64,
    joint_gap_prev: f64,
) -> Option<(f64, f64)> {
    let sp = sigma_prime?;
    Some((
        4.0 * sp * sp * (joint_gap + 1.0).powi(2),
        2.0 * (kappa - 1.0) * m * (joint_gap_prev + 1.0),
    ))
}

/// Constants of the dual convergence analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceBound {
    pub rho: f64,
    pub big_c: f64,
    pub kappa: f64,
    pub m: f64,
    pub var_z: f64,
}

impl ConvergenceBound {
    /// `C = (1 + rho)(1 + c1 - c0)`.
    pub fn new(rho: f64, bounds: (f64, f64), stats: &DistributionStats) -> Result<Self> {
        let (c0, c1) = bounds;
        if !(rho > 0.0) || !(c0 <= c1) {
            return Err(Error::InvalidArgument(format!("bad constants rho={rho}, c0={c0}, c1={c1}")));
        }
        Ok(Self {
            rho,
            big_c: (1.0 + rho) * (1.0 + c1 - c0),
            kappa: stats.kappa,
            m: stats.m,
            var_z: stats.var_z,
        })
    }

    /// Constant step size `sqrt(D(nu*, nu0) m / (2 C T Var z))` balancing the
    /// two terms of the analysis.
    pub fn tuned_alpha(&self, nu0: f64, horizon: u64) -> f64 {
        let nu_star = self.m.ln();
        (bregman_exp(nu_star, nu0) * self.m / (2.0 * self.big_c * horizon as f64 * self.var_z)).sqrt()
    }
}

/// `4 sqrt(2) sqrt(C (kappa-1) (1 - r0 + r0 log r0) / T) + (F(nu0) - F*) / T`
/// with `r0 = e^{nu* - nu0}`.
pub fn spmd_bound(bound: &ConvergenceBound, nu0: f64, horizon: u64) -> f64 {
    let t = horizon as f64;
    let nu_star = bound.m.ln();
    let r0 = (nu_star - nu0).exp();
    let shape = (1.0 - r0 + r0 * r0.ln()).max(0.0);
    4.0 * 2f64.sqrt() * (bound.big_c * (bound.kappa - 1.0) * shape / t).sqrt() + dual_gap(nu_star, nu0) / t
}

/// `sqrt(2) |nu0 - nu*| e^{nu* - c0} sqrt((kappa - 1) / T)`.
pub fn sgd_bound(stats: &DistributionStats, c0: f64, nu0: f64, horizon: u64) -> f64 {
    2f64.sqrt() * (nu0 - stats.nu_star).abs() * (stats.nu_star - c0).exp() * ((stats.kappa - 1.0) / horizon as f64).sqrt()
}

/// `2 (kappa - 1) / T + exp(3 sigma^2 / 2 - T / (16 kappa))`.
pub fn erm_gap_bound(stats: &DistributionStats, sigma_subg: f64, horizon: u64) -> f64 {
    let t = horizon as f64;
    2.0 * (stats.kappa - 1.0) / t + (1.5 * sigma_subg * sigma_subg - t / (16.0 * stats.kappa)).exp()
}
