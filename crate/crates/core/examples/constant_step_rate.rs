//! Constant-step SPMD with the step tuned to the horizon on a two-point
//! law: the time-averaged gap decays like `1/sqrt(T)` under the bound.

use scent::optimizers::dual_only_run;
use scent::oracle::spmd_bound;
use scent::problems::DualOnlyProblem;
use scent::{Budget, ConvergenceBound, Method, NuInit, OptimizerConfig, StepSchedule};

fn main() -> scent::Result<()> {
    let p = DualOnlyProblem::two_point(1.0, 4.0, 0.25)?;
    let bounds = p.bounds().expect("two-point laws are bounded");
    let cb = ConvergenceBound::new(1.0, bounds, &p.stats)?;
    let nu0 = bounds.0;
    println!("{:>8} {:>10} {:>12} {:>12}", "T", "alpha", "mean gap", "bound");
    for t in [100u64, 1000, 10_000] {
        let alpha = cb.tuned_alpha(nu0, t);
        let mut cfg = OptimizerConfig::new(Method::DualSpmd);
        cfg.alpha = StepSchedule::Constant(alpha);
        cfg.nu_init = NuInit::Constant(nu0);
        cfg.budget = Budget::Steps(t);
        cfg.eval_every = Some(t);
        let mut total = 0.0;
        for seed in 0..100 {
            total += dual_only_run(&p, &cfg, seed)?.last("mean_gap").unwrap_or(f64::NAN);
        }
        println!("{t:>8} {alpha:>10.4} {:>12.4e} {:>12.4e}", total / 100.0, spmd_bound(&cb, nu0, t));
    }
    Ok(())
}
