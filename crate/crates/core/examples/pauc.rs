//! One-way partial AUC with a small tuning grid per method.

use scent::experiment::{load_experiment, run_pauc, ConfigMap, Experiment};

fn main() -> scent::Result<()> {
    let mut ov = ConfigMap::new();
    for kv in [
        "run.seeds=0",
        "problem.n=2000",
        "optimizer.epochs=5",
        "tune.scent.log_alpha=-6,-3,0",
        "tune.sox.sox_gamma=0.9,0.99",
        "tune.asgd.alpha=1e-2,1e-1",
    ] {
        ov.set_pair(kv)?;
    }
    let cfg = load_experiment(Experiment::Pauc, None, &ov)?;
    let (records, tuned) = run_pauc(&cfg)?;
    for t in &tuned {
        let chosen: Vec<String> = t.chosen.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("tuned {}: {}", t.method, chosen.join(" "));
    }
    for r in &records {
        println!("{:>6}: objective {:.6}", r.config_id, r.last("objective").unwrap_or(f64::NAN));
    }
    Ok(())
}
