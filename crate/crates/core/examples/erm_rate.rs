//! With the empirical-minimizer schedule the dual iterate is exactly the
//! log of the running mean of `e^s`; the gap decays like `1/T`.

use scent::dual_updates::spmd_step;
use scent::optimizers::dual_only_run;
use scent::oracle::erm_gap_bound;
use scent::problems::DualOnlyProblem;
use scent::{Budget, Method, OptimizerConfig, Rng, StepSchedule};

fn main() -> scent::Result<()> {
    let p = DualOnlyProblem::gaussian(0.0, 0.5)?;
    let mut rng = Rng::new(0);
    let (mut nu, mut sum) = (f64::NAN, 0.0);
    for t in 1..=5u64 {
        let s = p.sample_s(&mut rng);
        nu = spmd_step(nu, s, StepSchedule::ErmRate.alpha(t, nu)?);
        sum += s.exp();
        println!("t={t}: nu = {nu:.12}, log mean = {:.12}", (sum / t as f64).ln());
    }

    println!("{:>8} {:>12} {:>12}", "T", "mean gap", "bound");
    for t in [100u64, 1000, 10_000] {
        let mut cfg = OptimizerConfig::new(Method::DualSpmd);
        cfg.alpha = StepSchedule::ErmRate;
        cfg.budget = Budget::Steps(t);
        cfg.eval_every = Some(t);
        let mut total = 0.0;
        for seed in 0..100 {
            total += dual_only_run(&p, &cfg, seed)?.last("gap").unwrap_or(f64::NAN);
        }
        println!("{t:>8} {:>12.4e} {:>12.4e}", total / 100.0, erm_gap_bound(&p.stats, 0.5, t));
    }
    Ok(())
}
