//! Benchmark harness: configuration, experiment drivers, metric output and
//! self-checks.

mod config;
mod emit;
mod runs;
mod verify;

pub use config::{
    defaults, parse_f64_list, parse_seeds, ConfigMap, DataSource, Experiment, ExperimentConfig, MethodSpec,
    ProblemParams, ScheduleKind, TuneGrid, OPTIMIZER_KEYS,
};
pub use emit::{emit_metrics, run_csv, sanitize, summarize, summary_csv, SummaryRow};
pub use runs::{
    bench_presets, dual_sim_ratios, grid_search, load_experiment, pauc_problem_from, run_dro, run_dual_sim,
    run_experiment, run_pauc, run_xc, xc_problem, ExperimentOutcome, TuneResult,
};
pub use verify::{verify_all, Check};
