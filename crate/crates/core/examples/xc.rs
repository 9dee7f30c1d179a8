//! Multiclass cross-entropy with in-batch negatives: SCENT, SOX and ASGD
//! at fixed settings on a reduced synthetic problem.

use scent::experiment::{load_experiment, run_xc, ConfigMap, Experiment};

fn main() -> scent::Result<()> {
    let mut ov = ConfigMap::new();
    for kv in ["run.methods=scent,sox,asgd", "run.seeds=0", "problem.n=2000", "problem.classes=20", "optimizer.epochs=5"] {
        ov.set_pair(kv)?;
    }
    let cfg = load_experiment(Experiment::Xc, None, &ov)?;
    let (records, _) = run_xc(&cfg)?;
    for r in &records {
        println!(
            "{:>6}: objective {:.5}  cross-entropy {:.5}  accuracy {:.3}",
            r.config_id,
            r.last("objective").unwrap_or(f64::NAN),
            r.last("cross_entropy").unwrap_or(f64::NAN),
            r.last("accuracy").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
