//! SPMD against SGD on the scalar dual problem with Gaussian exponents,
//! reduced to 10^5 steps. Prints the time-averaged squared error ratio.

use scent::experiment::{dual_sim_ratios, load_experiment, run_dual_sim, ConfigMap, Experiment};

fn main() -> scent::Result<()> {
    let mut ov = ConfigMap::new();
    ov.set("optimizer.steps", "100000");
    let cfg = load_experiment(Experiment::DualSim, None, &ov)?;
    let records = run_dual_sim(&cfg)?;
    println!("{:>6} {:>6} {:>12} {:>12} {:>10}", "mu", "sigma", "spmd", "sgd", "ratio");
    for (mu, sigma, spmd, sgd, ratio) in dual_sim_ratios(&cfg, &records, "mean_sq_error") {
        println!("{mu:>6} {sigma:>6} {spmd:>12.4e} {sgd:>12.4e} {ratio:>10.3e}");
    }
    Ok(())
}
