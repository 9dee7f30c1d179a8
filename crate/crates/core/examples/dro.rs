//! KL-regularized DRO regression from the least-squares start. Pass a CSV
//! path (target first) to use real data; the bundled smoke file otherwise.

use scent::experiment::{load_experiment, run_dro, ConfigMap, Experiment};

fn main() -> scent::Result<()> {
    let data = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/smoke.csv").to_string());
    let mut ov = ConfigMap::new();
    ov.set("problem.data", &data);
    for kv in [
        "run.methods=scent,bsgd,sox",
        "run.seeds=0,1",
        "optimizer.epochs=200",
        "optimizer.batch_inner=10",
        "scent.eta=1e-3",
        "scent.log_alpha=-1",
        "bsgd.eta=1e-3",
        "sox.eta=1e-3",
        "sox.sox_gamma=0.4",
    ] {
        ov.set_pair(kv)?;
    }
    let cfg = load_experiment(Experiment::Dro, None, &ov)?;
    let (records, _) = run_dro(&cfg)?;
    for r in &records {
        println!(
            "{:>5} seed {}: objective {:.5}  mse {:.5}",
            r.config_id,
            r.seed,
            r.last("objective").unwrap_or(f64::NAN),
            r.last("mse").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
