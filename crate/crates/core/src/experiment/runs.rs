//! Experiment drivers: build the problem, optionally tune, run every
//! method over every seed, and write metrics.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{defaults, ConfigMap, DataSource, Experiment, ExperimentConfig, MethodSpec, TuneGrid};
use super::emit::emit_metrics;
use crate::cerm::CermProblem;
use crate::dataio::{least_squares_init, load_csv, normalize_target, standardize, write_atomic, LabelKind};
use crate::error::{Error, Result};
use crate::optimizers::{dual_only_run, train, Method};
use crate::problems::{
    synth_multiclass, synth_pauc, synth_regression, DualOnlyProblem, KlDroProblem, MulticlassProblem, PaucProblem,
};
use crate::record::RunRecord;

/// A tuned method and the parameter values it ended up with.
#[derive(Clone, Debug, PartialEq)]
pub struct TuneResult {
    pub method: Method,
    pub chosen: Vec<(String, String)>,
    pub score: f64,
    /// Every candidate with its mean final objective, in grid order.
    pub trials: Vec<(Vec<(String, String)>, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub tuned: Vec<TuneResult>,
    pub files: Vec<PathBuf>,
}

/// Runs `jobs` in parallel and returns results in input order.
fn run_jobs<J, T>(jobs: Vec<J>, f: impl Fn(&J) -> Result<T> + Sync + Send) -> Result<Vec<T>>
where
    J: Sync,
    T: Send,
{
    jobs.par_iter().map(f).collect()
}

/// Trains one spec on one problem and tags the record with `config_id`.
fn joint_run(
    problem: &dyn CermProblem,
    spec: &MethodSpec,
    w0: &[f64],
    seed: u64,
    config_id: &str,
) -> Result<(RunRecord, Vec<f64>)> {
    let steps = problem.steps_per_epoch(spec.base.batch_anchors, spec.base.batch_inner) as u64;
    let cfg = spec.build(steps, 0)?;
    train(problem, &cfg, w0.to_vec(), seed, config_id)
}

fn final_objective(record: &RunRecord) -> f64 {
    record.last("objective").filter(|v| v.is_finite()).unwrap_or(f64::INFINITY)
}

/// Tries every grid point and keeps the one with the smallest mean final
/// objective over `seeds`. Diverged candidates score infinity; ties keep
/// the earlier candidate.
pub fn grid_search(
    problem: &(dyn CermProblem + Sync),
    spec: &MethodSpec,
    grid: &TuneGrid,
    seeds: &[u64],
    w0: &[f64],
) -> Result<(MethodSpec, TuneResult)> {
    let candidates = grid.candidates();
    let mut jobs = Vec::new();
    for (ci, cand) in candidates.iter().enumerate() {
        let mut s = spec.clone();
        for (k, v) in cand {
            s.apply(k, v, false)?;
        }
        s.validate(1)?;
        // only the final objective matters here
        s.base.eval_every = Some(u64::MAX);
        for &seed in seeds {
            jobs.push((ci, s.clone(), seed));
        }
    }
    let scores = run_jobs(jobs, |(ci, s, seed)| {
        let score = match joint_run(problem, s, w0, *seed, "tune") {
            Ok((r, _)) => final_objective(&r),
            Err(Error::Numerical(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok((*ci, score))
    })?;
    let mut totals = vec![0.0; candidates.len()];
    for (ci, s) in scores {
        totals[ci] += s / seeds.len() as f64;
    }
    let mut best = 0;
    for (i, &v) in totals.iter().enumerate() {
        if v < totals[best] {
            best = i;
        }
    }
    let mut chosen = spec.clone();
    for (k, v) in &candidates[best] {
        chosen.apply(k, v, false)?;
    }
    Ok((
        chosen,
        TuneResult {
            method: spec.method(),
            chosen: candidates[best].clone(),
            score: totals[best],
            trials: candidates.iter().cloned().zip(totals.iter().copied()).collect(),
        },
    ))
}

/// Tunes where a grid is given, then runs each method over all seeds.
/// `extra` adds final metrics computed from the last iterate.
fn run_joint(
    cfg: &ExperimentConfig,
    problem: &(dyn CermProblem + Sync),
    w0: &[f64],
    extra: &(dyn Fn(&[f64]) -> Vec<(&'static str, f64)> + Sync),
) -> Result<(Vec<RunRecord>, Vec<TuneResult>)> {
    let mut specs = Vec::new();
    let mut tuned = Vec::new();
    for spec in &cfg.methods {
        match cfg.tune.get(&spec.method()) {
            Some(grid) => {
                let (s, t) = grid_search(problem, spec, grid, &cfg.tune_seeds, w0)?;
                specs.push(s);
                tuned.push(t);
            }
            None => specs.push(spec.clone()),
        }
    }
    let jobs: Vec<(&MethodSpec, u64)> = specs.iter().flat_map(|s| cfg.seeds.iter().map(move |&seed| (s, seed))).collect();
    let records = run_jobs(jobs, |(spec, seed)| {
        let (mut rec, w) = joint_run(problem, spec, w0, *seed, spec.method().name())?;
        let t = rec.rows.last().map_or(0, |r| r.iteration);
        for (name, v) in extra(&w) {
            rec.push(t, 0.0, name, v)?;
        }
        Ok(rec)
    })?;
    Ok((records, tuned))
}

fn dual_sim_id(method: Method, mu: f64, sigma: f64) -> String {
    format!("{method}_mu{mu}_sigma{sigma}")
}

/// Every `(mu, sigma)` cell for every dual method and seed. The dual step
/// of a method may be listed once per `mu`. A seed drives the same
/// standard normal stream in every cell, so cells are compared on common
/// random numbers.
pub fn run_dual_sim(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let p = &cfg.problem;
    let mut jobs = Vec::new();
    for (mi, &mu) in p.mu.iter().enumerate() {
        for &sigma in &p.sigma {
            let problem = DualOnlyProblem::gaussian(mu, sigma)?;
            for spec in &cfg.methods {
                let oc = spec.build(1, mi)?;
                for &seed in &cfg.seeds {
                    jobs.push((problem.clone(), oc.clone(), seed, dual_sim_id(spec.method(), mu, sigma)));
                }
            }
        }
    }
    run_jobs(jobs, |(problem, oc, seed, id)| {
        let mut r = dual_only_run(problem, oc, *seed)?;
        r.config_id = id.clone();
        Ok(r)
    })
}

/// Ratio of the across-seed mean of `metric` at the final step, SPMD over
/// SGD, for each cell: `(mu, sigma, spmd, sgd, ratio)`.
pub fn dual_sim_ratios(cfg: &ExperimentConfig, records: &[RunRecord], metric: &str) -> Vec<(f64, f64, f64, f64, f64)> {
    let mean_final = |id: &str| -> Option<f64> {
        let v: Vec<f64> = records.iter().filter(|r| r.config_id == id).filter_map(|r| r.last(metric)).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    let mut out = Vec::new();
    for &mu in &cfg.problem.mu {
        for &sigma in &cfg.problem.sigma {
            let spmd = mean_final(&dual_sim_id(Method::DualSpmd, mu, sigma));
            let sgd = mean_final(&dual_sim_id(Method::DualSgd, mu, sigma));
            if let (Some(a), Some(b)) = (spmd, sgd) {
                out.push((mu, sigma, a, b, a / b));
            }
        }
    }
    out
}

fn dro_problem(cfg: &ExperimentConfig) -> Result<(KlDroProblem, Vec<f64>)> {
    let p = &cfg.problem;
    let raw = match p.data.as_ref() {
        Some(DataSource::Csv(path)) => load_csv(path, LabelKind::Regression)?,
        _ => synth_regression(p.n, p.d, p.noise, p.outlier_frac, p.data_seed)?,
    };
    let data = match (p.standardize, p.normalize_target) {
        (true, nt) => standardize(&raw, nt)?,
        (false, true) => normalize_target(&raw)?,
        (false, false) => raw,
    };
    let (a, b) = least_squares_init(&data)?;
    let problem = KlDroProblem::new(data, p.tau)?.with_radius(p.radius);
    Ok((problem, KlDroProblem::pack(&a, b)))
}

/// KL-regularized DRO regression, started from least squares. Each run
/// also records the final mean squared residual as `mse`.
pub fn run_dro(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Vec<TuneResult>)> {
    let (problem, w0) = dro_problem(cfg)?;
    let problem_ref = &problem;
    let extra = move |w: &[f64]| vec![("mse", problem_ref.mean_squared_residual(w))];
    run_joint(cfg, &problem, &w0, &extra)
}

pub fn xc_problem(cfg: &ExperimentConfig) -> Result<MulticlassProblem> {
    let p = &cfg.problem;
    let data = match p.data.as_ref() {
        Some(DataSource::Csv(path)) => load_csv(path, LabelKind::Classification)?,
        _ => synth_multiclass(p.n, p.d, p.classes, p.noise, p.data_seed)?,
    };
    let data = if p.standardize { standardize(&data, false)? } else { data };
    Ok(MulticlassProblem::new(data, p.classes)?
        .with_negatives(p.negatives)
        .with_radius(p.radius))
}

/// Multiclass cross-entropy from zero weights; adds the final training
/// `accuracy` and `cross_entropy`.
pub fn run_xc(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Vec<TuneResult>)> {
    let problem = xc_problem(cfg)?;
    let w0 = vec![0.0; problem.dim()];
    let pr = &problem;
    let extra = move |w: &[f64]| vec![("accuracy", pr.accuracy(w)), ("cross_entropy", pr.cross_entropy(w))];
    run_joint(cfg, &problem, &w0, &extra)
}

pub fn pauc_problem_from(cfg: &ExperimentConfig) -> Result<PaucProblem> {
    let p = &cfg.problem;
    let data = match p.data.as_ref() {
        Some(DataSource::Csv(path)) => load_csv(path, LabelKind::Sign)?,
        _ => synth_pauc(p.n, p.d, p.pos_frac, p.separation, p.noise, p.data_seed)?,
    };
    let data = if p.standardize { standardize(&data, false)? } else { data };
    Ok(PaucProblem::new(data, p.tau, p.margin)?.with_radius(p.radius))
}

/// One-way partial AUC surrogate from zero weights.
pub fn run_pauc(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Vec<TuneResult>)> {
    let problem = pauc_problem_from(cfg)?;
    let w0 = vec![0.0; problem.dim()];
    run_joint(cfg, &problem, &w0, &|_| Vec::new())
}

fn tune_csv(tuned: &[TuneResult]) -> String {
    let mut out = String::from("method,candidate,chosen,score\n");
    for t in tuned {
        for (cand, score) in &t.trials {
            let text: Vec<String> = cand.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{},{},{},{:?}", t.method, text.join(" "), *cand == t.chosen, score);
        }
    }
    out
}

/// Runs the configured experiment and writes its metrics under
/// `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let dir = cfg.output_dir.as_path();
    let mut outcome = ExperimentOutcome::default();
    match cfg.experiment {
        Experiment::DualSim => {
            outcome.records = run_dual_sim(cfg)?;
            outcome.files = emit_metrics(&outcome.records, dir)?;
            let mut text = String::from("mu,sigma,spmd,sgd,ratio\n");
            for (mu, sigma, a, b, r) in dual_sim_ratios(cfg, &outcome.records, "mean_sq_error") {
                let _ = writeln!(text, "{mu},{sigma},{a:?},{b:?},{r:?}");
            }
            let path = dir.join("ratios.csv");
            write_atomic(&path, text.as_bytes())?;
            outcome.files.push(path);
        }
        Experiment::Dro | Experiment::Xc | Experiment::Pauc => {
            let (records, tuned) = match cfg.experiment {
                Experiment::Dro => run_dro(cfg)?,
                Experiment::Xc => run_xc(cfg)?,
                _ => run_pauc(cfg)?,
            };
            outcome.records = records;
            outcome.tuned = tuned;
            outcome.files = emit_metrics(&outcome.records, dir)?;
            if !outcome.tuned.is_empty() {
                let path = dir.join("tuned.csv");
                write_atomic(&path, tune_csv(&outcome.tuned).as_bytes())?;
                outcome.files.push(path);
            }
        }
        Experiment::BenchSuite => {
            for (exp, map) in bench_presets(cfg) {
                let mut sub = ExperimentConfig::from_map(exp, &map)?;
                sub.output_dir = dir.join(exp.name());
                let o = run_experiment(&sub)?;
                outcome.records.extend(o.records);
                outcome.files.extend(o.files);
            }
        }
    }
    Ok(outcome)
}

/// Reduced versions of each experiment, small enough for a laptop core.
pub fn bench_presets(cfg: &ExperimentConfig) -> Vec<(Experiment, ConfigMap)> {
    let seeds: Vec<String> = cfg.seeds.iter().map(u64::to_string).collect();
    let seeds = seeds.join(",");
    let shrink: [(Experiment, &[(&str, &str)]); 4] = [
        (
            Experiment::DualSim,
            &[("optimizer.steps", "20000"), ("run.methods", "dual_spmd,dual_sgd")],
        ),
        (
            Experiment::Dro,
            &[
                ("problem.data", "synthetic"),
                ("problem.n", "2000"),
                ("problem.d", "8"),
                ("problem.normalize_target", "true"),
                ("problem.tau", "5"),
                ("optimizer.epochs", "20"),
                ("optimizer.eta", "3e-4"),
                ("scent.eta", "3e-4"),
                ("scent.log_alpha", "2"),
                ("bsgd.eta", "3e-4"),
                ("run.methods", "scent,bsgd,asgd,umax,sox"),
                ("asgd.alpha", "0.1"),
                ("umax.alpha", "0.1"),
                ("sox.sox_gamma", "0.5"),
            ],
        ),
        (
            Experiment::Xc,
            &[
                ("problem.n", "2000"),
                ("problem.classes", "20"),
                ("optimizer.epochs", "5"),
            ],
        ),
        (
            Experiment::Pauc,
            &[("problem.n", "2000"), ("optimizer.epochs", "5")],
        ),
    ];
    shrink
        .into_iter()
        .map(|(exp, kv)| {
            let mut map = defaults(exp);
            for (k, v) in kv {
                map.set(k, v);
            }
            map.set("run.seeds", &seeds);
            (exp, map)
        })
        .collect()
}

/// Reads `path` as a config for `experiment` on top of its defaults, then
/// applies `overrides`, and validates the result.
pub fn load_experiment(experiment: Experiment, path: Option<&Path>, overrides: &ConfigMap) -> Result<ExperimentConfig> {
    let mut map = defaults(experiment);
    if let Some(p) = path {
        let file = ConfigMap::load(p)?;
        if let Some(methods) = file.get("run.methods") {
            // a file that names its methods replaces the default list
            map.set("run.methods", methods);
        }
        map.merge(&file);
    }
    map.merge(overrides);
    ExperimentConfig::from_map(experiment, &map)
}
