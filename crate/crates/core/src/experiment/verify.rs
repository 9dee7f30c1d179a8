//! Quick self-checks of the numerical kernels against the exact oracles.

use crate::cerm::CermProblem;
use crate::dataio::{FeatureDataset, Labels};
use crate::dual_updates::{bregman_exp, spmd_step};
use crate::error::Result;
use crate::oracle::{finite_difference_gradient, full_gradient, full_joint_objective, full_objective, dual_optimum, prox_bruteforce};
use crate::problems::{synth_multiclass, synth_pauc, synth_regression, KlDroProblem, MulticlassProblem, PaucProblem};
use crate::rng::Rng;
use crate::schedule::Alpha;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, err: f64, tol: f64) -> Check {
    Check {
        name,
        passed: err <= tol,
        detail: format!("max error {err:.3e} (tolerance {tol:.0e})"),
    }
}

fn gradient_error(p: &dyn CermProblem, seed: u64) -> f64 {
    let mut rng = Rng::new(seed);
    let w: Vec<f64> = (0..p.dim()).map(|_| 0.3 * rng.standard_normal()).collect();
    let exact = full_gradient(p, &w);
    let fd = finite_difference_gradient(|v| full_objective(p, v), &w);
    exact
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max)
}

/// Runs every check; a `false` anywhere means a kernel disagrees with its
/// oracle.
pub fn verify_all(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = Rng::new(seed);

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let nu = rng.normal(0.0, 3.0);
        let s = rng.normal(0.0, 3.0);
        let ln_a = rng.normal(0.0, 4.0);
        let a = Alpha::from_ln(ln_a);
        let got = spmd_step(nu, s, a);
        let want = prox_bruteforce(nu, s, ln_a.exp());
        worst = worst.max((got - want).abs());
    }
    out.push(check("dual proximal step matches bisection", worst, 1e-9));

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (a, b) = (rng.normal(0.0, 5.0), rng.normal(0.0, 5.0));
        worst = worst.max(-bregman_exp(a, b));
    }
    out.push(check("Bregman divergence is nonnegative", worst.max(0.0), 0.0));

    let xc = MulticlassProblem::new(synth_multiclass(12, 3, 4, 0.5, seed)?, 4)?;
    out.push(check("multiclass gradient", gradient_error(&xc, seed), 1e-6));
    let pauc = PaucProblem::new(synth_pauc(20, 3, 0.3, 1.0, 1.0, seed)?, 0.5, 0.5)?;
    out.push(check("partial AUC gradient", gradient_error(&pauc, seed), 1e-6));
    let dro = KlDroProblem::new(synth_regression(30, 3, 0.5, 0.1, seed)?, 2.0)?;
    out.push(check("DRO regression gradient", gradient_error(&dro, seed), 1e-6));

    let w: Vec<f64> = (0..xc.dim()).map(|_| rng.normal(0.0, 0.5)).collect();
    let nu = dual_optimum(&xc, &w);
    let gap = (full_joint_objective(&xc, &w, &nu) - 1.0 - full_objective(&xc, &w)).abs();
    out.push(check("joint objective at the dual optimum", gap, 1e-12));

    // a tiny dataset with a hand-computed objective
    let data = FeatureDataset::new(vec![1.0, 2.0], 1, Labels::Class(vec![0, 1]))?;
    let tiny = MulticlassProblem::new(data, 2)?;
    let w = [0.0, 1.0];
    let want = 0.5 * (((1.0 + 1f64.exp()) / 2.0).ln() + ((1.0 + (-2f64).exp()) / 2.0).ln());
    out.push(check("two-row cross-entropy", (full_objective(&tiny, &w) - want).abs(), 1e-14));
    Ok(out)
}
