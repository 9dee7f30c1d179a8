//! The baselines as special cases: an infinite dual step is BSGD, the
//! `gamma' e^{-nu}` schedule is SOX with `gamma = gamma' / (1 + gamma')`.

use scent::optimizers::Trainer;
use scent::problems::{synth_multiclass, MulticlassProblem};
use scent::{Budget, CermProblem, Method, OptimizerConfig, StepSchedule};

fn run(p: &MulticlassProblem, cfg: OptimizerConfig) -> scent::Result<Vec<f64>> {
    let mut tr = Trainer::new(p, cfg, vec![0.0; p.dim()], 7)?;
    for _ in 0..300 {
        tr.step()?;
    }
    Ok(tr.w().to_vec())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> scent::Result<()> {
    let p = MulticlassProblem::new(synth_multiclass(100, 4, 5, 0.5, 1)?, 5)?;
    let base = |m: Method| {
        let mut c = OptimizerConfig::new(m);
        c.batch_anchors = 8;
        c.batch_inner = 3;
        c.budget = Budget::Steps(300);
        c
    };

    let mut a = base(Method::Scent);
    a.alpha = StepSchedule::Infinite;
    a.reuse_inner_sample = true;
    let mut b = base(Method::Bsgd);
    b.reuse_inner_sample = true;
    println!("infinite step vs BSGD: {:.2e}", max_diff(&run(&p, a)?, &run(&p, b)?));

    let mut a = base(Method::Scent);
    a.alpha = StepSchedule::SoxRate { gamma_prime: 0.25 };
    let mut b = base(Method::Sox);
    b.sox_gamma = Some(0.2);
    println!("SOX-rate SCENT vs SOX: {:.2e}", max_diff(&run(&p, a)?, &run(&p, b)?));
    Ok(())
}
