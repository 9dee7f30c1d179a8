use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scent::experiment::{load_experiment, run_experiment, verify_all, ConfigMap, Experiment};
use scent::{Error, Result};

#[derive(Parser)]
#[command(name = "scent", version, about = "Stochastic dual mirror descent for entropic risk: experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scalar dual problem on Gaussian exponents: SPMD against SGD.
    DualSim(RunArgs),
    /// KL-regularized DRO least squares.
    Dro(RunArgs),
    /// Multiclass cross-entropy with sampled classes.
    Xc(RunArgs),
    /// One-way partial AUC.
    Pauc(RunArgs),
    /// Reduced versions of every experiment.
    BenchSuite(RunArgs),
    /// Check the numerical kernels against exact oracles.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file of `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for metric CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// A single seed.
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Seeds, e.g. `0,1,2` or `0..10`.
    #[arg(long)]
    seeds: Option<String>,
    /// Method, or a comma-separated list.
    #[arg(long, alias = "methods")]
    method: Option<String>,
    /// Problem data: a CSV path or `synthetic`.
    #[arg(long)]
    data: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    epochs: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Extra `section.key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn overrides(&self) -> Result<ConfigMap> {
        let mut map = ConfigMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                map.set(k, &v);
            }
        };
        put("run.out", self.out.as_ref().map(|p| p.display().to_string()));
        put("run.seeds", self.seeds.clone().or(self.seed.map(|s| s.to_string())));
        put("run.methods", self.method.clone());
        put("problem.data", self.data.clone());
        put("problem.tau", self.tau.map(|v| v.to_string()));
        put("optimizer.epochs", self.epochs.map(|v| v.to_string()));
        put("optimizer.steps", self.steps.map(|v| v.to_string()));
        for pair in &self.set {
            map.set_pair(pair)?;
        }
        Ok(map)
    }
}

fn run(experiment: Experiment, args: &RunArgs) -> Result<()> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let cfg = load_experiment(experiment, args.config.as_deref(), &args.overrides()?)?;
    let outcome = run_experiment(&cfg)?;
    for t in &outcome.tuned {
        let chosen: Vec<String> = t.chosen.iter().map(|(k, v)| format!("{k}={v}")).collect();
        eprintln!("tuned {}: {} (score {:.6})", t.method, chosen.join(" "), t.score);
    }
    println!(
        "{}: {} runs, metrics in {}",
        experiment.name(),
        outcome.records.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::DualSim(a) => run(Experiment::DualSim, a),
        Command::Dro(a) => run(Experiment::Dro, a),
        Command::Xc(a) => run(Experiment::Xc, a),
        Command::Pauc(a) => run(Experiment::Pauc, a),
        Command::BenchSuite(a) => run(Experiment::BenchSuite, a),
        Command::Verify { seed } => verify_all(*seed).and_then(|checks| {
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok {
                Ok(())
            } else {
                Err(Error::Numerical("a kernel disagrees with its oracle".into()))
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
