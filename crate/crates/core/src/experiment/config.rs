//! Experiment configuration: `section.key = value` text, command-line
//! overrides, and validation into typed settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cerm::NuInit;
use crate::error::{Error, Result};
use crate::optimizers::{Budget, DualClamp, Method, OptimizerConfig, UmaxTrigger};
use crate::problems::Negatives;
use crate::schedule::StepSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    DualSim,
    Dro,
    Xc,
    Pauc,
    BenchSuite,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::DualSim => "dual_sim",
            Experiment::Dro => "dro",
            Experiment::Xc => "xc",
            Experiment::Pauc => "pauc",
            Experiment::BenchSuite => "bench_suite",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "dual_sim" => Ok(Experiment::DualSim),
            "dro" => Ok(Experiment::Dro),
            "xc" => Ok(Experiment::Xc),
            "pauc" => Ok(Experiment::Pauc),
            "bench_suite" => Ok(Experiment::BenchSuite),
            other => Err(Error::Config(format!("unknown experiment {other:?}"))),
        }
    }
}

/// Flat `section.key -> value` map. Later insertions override earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `section.key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected `section.key = value`, got {line:?}"),
            })?;
            let k = k.trim();
            if !k.contains('.') {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("key {k:?} has no section"),
                });
            }
            map.set(k, v.trim());
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        // a malformed config file is a configuration problem, not a data one
        Self::parse(&text).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Config(format!("{}:{line}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.trim().to_string(), value.trim().to_string());
    }

    /// Parses a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {pair:?} is not key=value")))?;
        if !k.contains('.') {
            return Err(Error::Config(format!("key {k:?} has no section")));
        }
        self.set(k, v);
        Ok(())
    }

    pub fn merge(&mut self, other: &ConfigMap) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

pub(crate) fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: {v:?} is not a number")))
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    let t = v.trim();
    // allow 1e6-style integers
    if let Ok(n) = t.parse::<u64>() {
        return Ok(n);
    }
    match t.parse::<f64>() {
        Ok(f) if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 => Ok(f as u64),
        _ => Err(Error::Config(format!("{key}: {v:?} is not a nonnegative integer"))),
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: {v:?} is not a boolean"))),
    }
}

/// A list of reals: `a,b,c`, `geom:lo:hi:n` (geometric) or `lin:lo:hi:n`.
pub fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let t = v.trim();
    let spaced = |rest: &str, geometric: bool| -> Result<Vec<f64>> {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("{key}: expected lo:hi:n in {v:?}")));
        }
        let lo = parse_f64(key, parts[0])?;
        let hi = parse_f64(key, parts[1])?;
        let n = parse_u64(key, parts[2])? as usize;
        if n == 0 || (geometric && !(lo > 0.0 && hi > 0.0)) {
            return Err(Error::Config(format!("{key}: bad range {v:?}")));
        }
        Ok((0..n)
            .map(|k| {
                let f = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                if geometric {
                    (lo.ln() + f * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + f * (hi - lo)
                }
            })
            .collect())
    };
    if let Some(rest) = t.strip_prefix("geom:") {
        return spaced(rest, true);
    }
    if let Some(rest) = t.strip_prefix("lin:") {
        return spaced(rest, false);
    }
    let out: Result<Vec<f64>> = t.split(',').map(|p| parse_f64(key, p)).collect();
    let out = out?;
    if out.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

/// Seeds: `1,2,3` or a half-open range `0..10`.
pub fn parse_seeds(key: &str, v: &str) -> Result<Vec<u64>> {
    let t = v.trim();
    let mut out = Vec::new();
    for part in t.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let a = parse_u64(key, a)?;
            let b = parse_u64(key, b)?;
            out.extend(a..b);
        } else {
            out.push(parse_u64(key, part)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!("{key}: no seeds")));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    InvSqrtT,
    Cosine,
    ErmRate,
    SoxRate,
    Infinite,
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "constant" => Ok(ScheduleKind::Constant),
            "inv_sqrt_t" => Ok(ScheduleKind::InvSqrtT),
            "cosine" => Ok(ScheduleKind::Cosine),
            "erm_rate" => Ok(ScheduleKind::ErmRate),
            "sox_rate" => Ok(ScheduleKind::SoxRate),
            "infinite" => Ok(ScheduleKind::Infinite),
            other => Err(Error::Config(format!("unknown schedule {other:?}"))),
        }
    }
}

fn build_schedule(kind: ScheduleKind, base: f64, gamma_prime: f64, horizon: u64) -> StepSchedule {
    match kind {
        ScheduleKind::Constant => StepSchedule::Constant(base),
        ScheduleKind::InvSqrtT => StepSchedule::InvSqrtT { base, horizon },
        ScheduleKind::Cosine => StepSchedule::Cosine { base, horizon },
        ScheduleKind::ErmRate => StepSchedule::ErmRate,
        ScheduleKind::SoxRate => StepSchedule::SoxRate { gamma_prime },
        ScheduleKind::Infinite => StepSchedule::Infinite,
    }
}

/// Optimizer settings for one method before the problem (and so the
/// horizon) is known.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSpec {
    pub base: OptimizerConfig,
    pub eta_kind: ScheduleKind,
    pub eta: f64,
    pub alpha_kind: ScheduleKind,
    /// One value, or one per entry of `problem.mu` in dual simulations.
    pub alpha: Vec<f64>,
    pub gamma_prime: f64,
    pub sox_cosine: bool,
}

pub const OPTIMIZER_KEYS: &[&str] = &[
    "eta",
    "eta_schedule",
    "alpha",
    "log_alpha",
    "alpha_schedule",
    "gamma_prime",
    "batch",
    "batch_anchors",
    "batch_inner",
    "momentum",
    "epochs",
    "steps",
    "softplus_rho",
    "umax_delta",
    "umax_trigger",
    "sox_gamma",
    "sox_gamma_schedule",
    "nu_init",
    "reuse_inner_sample",
    "dual_clamp",
    "eval_every",
    "rho_monitor",
];

impl MethodSpec {
    pub fn new(method: Method) -> Self {
        let base = OptimizerConfig::new(method);
        let (alpha_kind, alpha) = match method {
            Method::Bsgd => (ScheduleKind::Infinite, vec![1.0]),
            _ => (ScheduleKind::Constant, vec![1.0]),
        };
        Self {
            base,
            eta_kind: ScheduleKind::Constant,
            eta: 0.1,
            alpha_kind,
            alpha,
            gamma_prime: 1.0,
            sox_cosine: false,
        }
    }

    pub fn method(&self) -> Method {
        self.base.method
    }

    /// Applies one optimizer key. With `lenient`, keys that only concern
    /// other methods are ignored instead of rejected later by validation.
    pub fn apply(&mut self, key: &str, value: &str, lenient: bool) -> Result<()> {
        let m = self.base.method;
        let c = &mut self.base;
        match key {
            "eta" => self.eta = parse_f64(key, value)?,
            "eta_schedule" => self.eta_kind = value.parse()?,
            "alpha" => {
                if lenient && m == Method::Bsgd {
                    return Ok(());
                }
                self.alpha = parse_f64_list(key, value)?;
            }
            "log_alpha" => {
                if lenient && m == Method::Bsgd {
                    return Ok(());
                }
                self.alpha = parse_f64_list(key, value)?.into_iter().map(f64::exp).collect();
            }
            "alpha_schedule" => {
                if lenient && matches!(m, Method::Bsgd | Method::Sox) {
                    return Ok(());
                }
                self.alpha_kind = value.parse()?;
            }
            "gamma_prime" => self.gamma_prime = parse_f64(key, value)?,
            "batch" | "batch_anchors" => c.batch_anchors = parse_u64(key, value)? as usize,
            "batch_inner" => c.batch_inner = parse_u64(key, value)? as usize,
            "momentum" => c.momentum = parse_f64(key, value)?,
            "epochs" => c.budget = Budget::Epochs(parse_u64(key, value)?),
            "steps" => c.budget = Budget::Steps(parse_u64(key, value)?),
            "softplus_rho" => {
                if !lenient || m == Method::AsgdSoftplus {
                    c.softplus_rho = Some(parse_f64(key, value)?);
                }
            }
            "umax_delta" => {
                if !lenient || m == Method::Umax {
                    c.umax_delta = Some(parse_f64(key, value)?);
                }
            }
            "umax_trigger" => {
                c.umax_trigger = match value.trim() {
                    "lagging" => UmaxTrigger::Lagging,
                    "deviation" => UmaxTrigger::Deviation,
                    other => return Err(Error::Config(format!("unknown U-max trigger {other:?}"))),
                }
            }
            "sox_gamma" => {
                if !lenient || m == Method::Sox {
                    c.sox_gamma = Some(parse_f64(key, value)?);
                }
            }
            "sox_gamma_schedule" => {
                if lenient && m != Method::Sox {
                    return Ok(());
                }
                self.sox_cosine = match value.parse::<ScheduleKind>()? {
                    ScheduleKind::Constant => false,
                    ScheduleKind::Cosine => true,
                    other => return Err(Error::Config(format!("sox_gamma_schedule must be constant or cosine, not {other:?}"))),
                };
            }
            "nu_init" => {
                c.nu_init = match value.trim() {
                    "first_batch" | "from_first_batch" => NuInit::FromFirstBatch,
                    v => NuInit::Constant(parse_f64(key, v)?),
                }
            }
            "reuse_inner_sample" => c.reuse_inner_sample = parse_bool(key, value)?,
            "dual_clamp" => {
                c.dual_clamp = match value.trim() {
                    "problem" => DualClamp::Problem,
                    "none" | "unclamped" => DualClamp::Unclamped,
                    v => {
                        let (a, b) = v
                            .split_once(':')
                            .ok_or_else(|| Error::Config(format!("dual_clamp: expected lo:hi, got {v:?}")))?;
                        DualClamp::Fixed(parse_f64(key, a)?, parse_f64(key, b)?)
                    }
                }
            }
            "eval_every" => c.eval_every = Some(parse_u64(key, value)?),
            "rho_monitor" => c.rho_monitor = Some(parse_f64(key, value)?),
            other => return Err(Error::Config(format!("unknown optimizer key {other:?}"))),
        }
        Ok(())
    }

    /// Concrete configuration given the number of steps per epoch; `cell`
    /// selects the per-cell dual step when several are listed.
    pub fn build(&self, steps_per_epoch: u64, cell: usize) -> Result<OptimizerConfig> {
        let mut c = self.base.clone();
        let horizon = match c.budget {
            Budget::Steps(s) => s,
            Budget::Epochs(e) => e * steps_per_epoch.max(1),
        };
        let alpha = match self.alpha.len() {
            1 => self.alpha[0],
            _ => *self.alpha.get(cell).ok_or_else(|| {
                Error::Config(format!("{}: no dual step listed for cell {cell}", c.method))
            })?,
        };
        c.eta = build_schedule(self.eta_kind, self.eta, self.gamma_prime, horizon);
        c.alpha = build_schedule(self.alpha_kind, alpha, self.gamma_prime, horizon);
        c.sox_gamma_horizon = self.sox_cosine.then_some(horizon);
        Ok(c)
    }

    pub fn validate(&self, cells: usize) -> Result<()> {
        if self.alpha.len() > 1 && self.alpha.len() != cells {
            return Err(Error::Config(format!(
                "{}: {} dual steps listed for {cells} cells",
                self.base.method,
                self.alpha.len()
            )));
        }
        for cell in 0..self.alpha.len() {
            self.build(1, cell)?.validate()?;
        }
        Ok(())
    }
}

/// Where feature data comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum DataSource {
    Synthetic,
    Csv(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemParams {
    pub tau: f64,
    pub margin: f64,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub classes: usize,
    pub n: usize,
    pub d: usize,
    pub noise: f64,
    pub data: Option<DataSource>,
    pub standardize: bool,
    pub normalize_target: bool,
    pub negatives: Negatives,
    pub radius: Option<f64>,
    pub pos_frac: f64,
    pub separation: f64,
    pub outlier_frac: f64,
    pub data_seed: u64,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self {
            tau: 1.0,
            margin: 0.5,
            mu: vec![-1.0, -10.0],
            sigma: vec![0.1, 0.3, 1.0],
            classes: 100,
            n: 10_000,
            d: 16,
            noise: 0.5,
            data: None,
            standardize: false,
            normalize_target: false,
            negatives: Negatives::InBatch,
            radius: None,
            pos_frac: 0.2,
            separation: 1.0,
            outlier_frac: 0.1,
            data_seed: 0,
        }
    }
}

impl ProblemParams {
    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "tau" => self.tau = parse_f64(key, value)?,
            "margin" => self.margin = parse_f64(key, value)?,
            "mu" => self.mu = parse_f64_list(key, value)?,
            "sigma" => self.sigma = parse_f64_list(key, value)?,
            "classes" => self.classes = parse_u64(key, value)? as usize,
            "n" => self.n = parse_u64(key, value)? as usize,
            "d" => self.d = parse_u64(key, value)? as usize,
            "noise" => self.noise = parse_f64(key, value)?,
            "data" => {
                self.data = Some(match value.trim() {
                    "synthetic" => DataSource::Synthetic,
                    p => DataSource::Csv(PathBuf::from(p)),
                })
            }
            "standardize" => self.standardize = parse_bool(key, value)?,
            "normalize_target" => self.normalize_target = parse_bool(key, value)?,
            "negatives" => {
                self.negatives = match value.trim() {
                    "in_batch" | "in-batch" => Negatives::InBatch,
                    "uniform" => Negatives::Uniform,
                    other => return Err(Error::Config(format!("unknown negative sampling {other:?}"))),
                }
            }
            "radius" => {
                self.radius = match value.trim() {
                    "none" | "unbounded" => None,
                    v => Some(parse_f64(key, v)?),
                }
            }
            "pos_frac" => self.pos_frac = parse_f64(key, value)?,
            "separation" => self.separation = parse_f64(key, value)?,
            "outlier_frac" => self.outlier_frac = parse_f64(key, value)?,
            "data_seed" => self.data_seed = parse_u64(key, value)?,
            other => return Err(Error::Config(format!("unknown problem key {other:?}"))),
        }
        Ok(())
    }

    fn validate(&self, experiment: Experiment) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::Config(format!("tau must be positive, got {}", self.tau)));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0) {
                return Err(Error::Config(format!("radius must be positive, got {r}")));
            }
        }
        match experiment {
            Experiment::DualSim => {
                if self.mu.iter().any(|m| !m.is_finite()) || self.sigma.iter().any(|s| !(*s >= 0.0)) {
                    return Err(Error::Config("dual simulation grid needs finite mu and sigma >= 0".into()));
                }
            }
            Experiment::Xc => {
                if self.classes < 2 {
                    return Err(Error::Config("need at least two classes".into()));
                }
            }
            Experiment::Dro => {
                if self.data.is_none() {
                    return Err(Error::Config("dro needs problem.data (a CSV path or `synthetic`)".into()));
                }
            }
            Experiment::Pauc => {
                if !(0.0..=1.0).contains(&self.pos_frac) {
                    return Err(Error::Config("pos_frac must lie in [0, 1]".into()));
                }
            }
            Experiment::BenchSuite => {}
        }
        if matches!(experiment, Experiment::Xc | Experiment::Pauc | Experiment::Dro)
            && self.data.as_ref().map_or(true, |d| *d == DataSource::Synthetic)
            && (self.n < 2 || self.d == 0)
        {
            return Err(Error::Config("synthetic data needs n >= 2 and d >= 1".into()));
        }
        Ok(())
    }
}

/// Hyperparameter grid for one method: each key maps to candidate values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TuneGrid {
    pub axes: Vec<(String, Vec<String>)>,
}

impl TuneGrid {
    /// Every combination, as lists of `(key, value)` pairs.
    pub fn candidates(&self) -> Vec<Vec<(String, String)>> {
        let mut out: Vec<Vec<(String, String)>> = vec![Vec::new()];
        for (key, values) in &self.axes {
            let mut next = Vec::with_capacity(out.len() * values.len());
            for prefix in &out {
                for v in values {
                    let mut c = prefix.clone();
                    c.push((key.clone(), v.clone()));
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub methods: Vec<MethodSpec>,
    pub problem: ProblemParams,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    /// Per-method grids, searched before the final runs when non-empty.
    pub tune: BTreeMap<Method, TuneGrid>,
    pub tune_seeds: Vec<u64>,
}

/// Built-in settings for each experiment, applied before the config file.
pub fn defaults(experiment: Experiment) -> ConfigMap {
    let text = match experiment {
        Experiment::DualSim => {
            "run.methods = dual_spmd,dual_sgd
             run.seeds = 0,1,2
             problem.mu = -1,-10
             problem.sigma = 0.1,0.3,1.0
             optimizer.steps = 1000000
             optimizer.dual_clamp = none
             dual_sgd.alpha = 1.0
             dual_spmd.log_alpha = -6,3"
        }
        Experiment::Dro => {
            "run.methods = scent,bsgd
             run.seeds = 0..10
             problem.tau = 1.0
             problem.standardize = true
             optimizer.batch_anchors = 1
             optimizer.batch_inner = 100
             optimizer.epochs = 300
             optimizer.momentum = 0.9
             optimizer.eta_schedule = cosine
             scent.eta = 5e-6
             scent.log_alpha = -4
             bsgd.eta = 5e-6"
        }
        Experiment::Xc => {
            "run.methods = scent,sox,asgd,bsgd
             run.seeds = 0,1,2
             problem.data = synthetic
             problem.n = 10000
             problem.d = 16
             problem.classes = 100
             problem.noise = 0.5
             problem.negatives = in_batch
             optimizer.batch_anchors = 128
             optimizer.epochs = 20
             optimizer.eta_schedule = cosine
             optimizer.eta = 1.0
             scent.log_alpha = 3
             sox.sox_gamma = 0.5
             asgd.alpha = 1.0"
        }
        Experiment::Pauc => {
            "run.methods = scent,sox,asgd
             run.seeds = 0,1,2
             problem.data = synthetic
             problem.n = 5000
             problem.d = 16
             problem.pos_frac = 0.2
             problem.separation = 1.0
             problem.noise = 1.0
             problem.tau = 0.1
             problem.margin = 0.5
             optimizer.batch_anchors = 64
             optimizer.batch_inner = 64
             optimizer.epochs = 20
             optimizer.eta_schedule = cosine
             optimizer.eta = 1e-3
             scent.alpha = 1.0
             sox.sox_gamma = 0.1
             asgd.alpha = 1e-2"
        }
        Experiment::BenchSuite => "run.seeds = 0,1,2",
    };
    ConfigMap::parse(&text.lines().map(str::trim).collect::<Vec<_>>().join("\n")).expect("built-in defaults parse")
}

impl ExperimentConfig {
    /// Builds and fully validates the configuration. Sections:
    /// `run.*`, `problem.*`, `optimizer.*` (all methods), `<method>.*`
    /// (one method, overriding `optimizer.*`) and `tune.<method>.<key>`.
    pub fn from_map(experiment: Experiment, map: &ConfigMap) -> Result<Self> {
        let mut methods: Vec<Method> = Vec::new();
        let mut seeds = vec![0];
        let mut output_dir = PathBuf::from(format!("results/{}", experiment.name()));
        let mut tune_seeds: Option<Vec<u64>> = None;
        let mut problem = ProblemParams::default();
        if experiment == Experiment::Pauc {
            problem.tau = 0.1;
        }

        for (key, value) in map.iter() {
            let (section, rest) = key.split_once('.').expect("keys carry a section");
            match section {
                "run" => match rest {
                    "methods" => {
                        methods = value
                            .split(',')
                            .map(|m| m.parse::<Method>())
                            .collect::<Result<Vec<_>>>()?;
                    }
                    "seeds" => seeds = parse_seeds(key, value)?,
                    "seed" => seeds = vec![parse_u64(key, value)?],
                    "out" => output_dir = PathBuf::from(value),
                    "tune_seeds" => tune_seeds = Some(parse_seeds(key, value)?),
                    "experiment" => {
                        let e: Experiment = value.parse()?;
                        if e != experiment {
                            return Err(Error::Config(format!(
                                "config is for {}, but {} was requested",
                                e.name(),
                                experiment.name()
                            )));
                        }
                    }
                    other => return Err(Error::Config(format!("unknown run key {other:?}"))),
                },
                "problem" => problem.apply(rest, value)?,
                "optimizer" | "tune" => {}
                other => {
                    other
                        .parse::<Method>()
                        .map_err(|_| Error::Config(format!("unknown section {other:?}")))?;
                }
            }
        }
        if methods.is_empty() && experiment != Experiment::BenchSuite {
            return Err(Error::Config("run.methods is empty".into()));
        }
        let mut dedup = Vec::new();
        for m in methods {
            if !dedup.contains(&m) {
                dedup.push(m);
            }
        }
        let methods = dedup;
        let dual_only = experiment == Experiment::DualSim;
        for m in &methods {
            if m.is_dual_only() != dual_only {
                return Err(Error::Config(format!("method {m} cannot run in {}", experiment.name())));
            }
        }

        let mut specs = Vec::new();
        for &m in &methods {
            let mut spec = MethodSpec::new(m);
            for (key, value) in map.iter() {
                if let Some(k) = key.strip_prefix("optimizer.") {
                    spec.apply(k, value, true)?;
                }
            }
            for (key, value) in map.iter() {
                if let Some((sec, k)) = key.split_once('.') {
                    if sec.parse::<Method>().ok() == Some(m) {
                        spec.apply(k, value, false)?;
                    }
                }
            }
            let cells = if dual_only { problem.mu.len() } else { 1 };
            spec.validate(cells)?;
            specs.push(spec);
        }

        let mut tune: BTreeMap<Method, TuneGrid> = BTreeMap::new();
        for (key, value) in map.iter() {
            if let Some(rest) = key.strip_prefix("tune.") {
                let (msec, k) = rest
                    .split_once('.')
                    .ok_or_else(|| Error::Config(format!("tune key {key:?} needs tune.<method>.<key>")))?;
                let m: Method = msec.parse()?;
                if !OPTIMIZER_KEYS.contains(&k) {
                    return Err(Error::Config(format!("cannot tune unknown key {k:?}")));
                }
                let values: Vec<String> = parse_f64_list(key, value)?.iter().map(|v| format!("{v}")).collect();
                tune.entry(m).or_default().axes.push((k.to_string(), values));
            }
        }
        for (m, grid) in &tune {
            let Some(spec) = specs.iter().find(|s| s.method() == *m) else {
                return Err(Error::Config(format!("tuning grid for {m}, which is not in run.methods")));
            };
            for cand in grid.candidates() {
                let mut s = spec.clone();
                for (k, v) in &cand {
                    s.apply(k, v, false)?;
                }
                s.validate(1)?;
            }
        }

        problem.validate(experiment)?;
        if seeds.is_empty() {
            return Err(Error::Config("no seeds".into()));
        }
        Ok(Self {
            experiment,
            methods: specs,
            problem,
            tune_seeds: tune_seeds.unwrap_or_else(|| seeds.clone()),
            seeds,
            output_dir,
            tune,
        })
    }

    pub fn method_spec(&self, method: Method) -> Option<&MethodSpec> {
        self.methods.iter().find(|s| s.method() == method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let mut map = ConfigMap::parse("# comment\noptimizer.eta = 0.5\nscent.eta = 0.25 # inline\n").unwrap();
        let mut flags = ConfigMap::new();
        flags.set_pair("scent.eta=0.125").unwrap();
        map.merge(&flags);
        assert_eq!(map.get("scent.eta"), Some("0.125"));
        assert!(ConfigMap::parse("no_equals_here").is_err());
        assert!(ConfigMap::parse("nosection = 1").is_err());
    }

    #[test]
    fn lists_and_seeds() {
        assert_eq!(parse_f64_list("k", "1,2.5").unwrap(), vec![1.0, 2.5]);
        let g = parse_f64_list("k", "geom:1e-3:1e1:5").unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[2] - 0.1).abs() < 1e-12);
        assert_eq!(parse_f64_list("k", "lin:3:30:4").unwrap(), vec![3.0, 12.0, 21.0, 30.0]);
        assert_eq!(parse_seeds("k", "0..3,7").unwrap(), vec![0, 1, 2, 7]);
        assert_eq!(parse_u64("k", "1e6").unwrap(), 1_000_000);
    }

    #[test]
    fn defaults_build_for_every_experiment() {
        for e in [Experiment::DualSim, Experiment::Xc, Experiment::Pauc] {
            let cfg = ExperimentConfig::from_map(e, &defaults(e)).unwrap();
            assert!(!cfg.methods.is_empty());
        }
        let mut dro = defaults(Experiment::Dro);
        assert!(ExperimentConfig::from_map(Experiment::Dro, &dro).is_err());
        dro.set("problem.data", "synthetic");
        ExperimentConfig::from_map(Experiment::Dro, &dro).unwrap();
    }

    #[test]
    fn method_sections_override_optimizer() {
        let mut map = defaults(Experiment::Xc);
        map.set("optimizer.eta", "0.5");
        map.set("sox.eta", "0.25");
        let cfg = ExperimentConfig::from_map(Experiment::Xc, &map).unwrap();
        assert_eq!(cfg.method_spec(Method::Scent).unwrap().eta, 0.5);
        assert_eq!(cfg.method_spec(Method::Sox).unwrap().eta, 0.25);
    }

    #[test]
    fn validation_fails_fast() {
        let mut map = defaults(Experiment::Xc);
        map.set("scent.sox_gamma", "0.5");
        assert!(matches!(ExperimentConfig::from_map(Experiment::Xc, &map), Err(Error::Config(_))));
        let mut map = defaults(Experiment::Xc);
        map.set("run.methods", "dual_spmd");
        assert!(ExperimentConfig::from_map(Experiment::Xc, &map).is_err());
        let mut map = defaults(Experiment::DualSim);
        map.set("dual_spmd.log_alpha", "-6,3,1");
        assert!(ExperimentConfig::from_map(Experiment::DualSim, &map).is_err());
        let mut map = defaults(Experiment::Xc);
        map.set("problem.colour", "red");
        assert!(ExperimentConfig::from_map(Experiment::Xc, &map).is_err());
        let mut map = defaults(Experiment::Xc);
        map.set("scent.momentum", "1.5");
        assert!(ExperimentConfig::from_map(Experiment::Xc, &map).is_err());
    }

    #[test]
    fn tune_grid_expands() {
        let mut map = defaults(Experiment::Xc);
        map.set("tune.scent.eta", "geom:0.1:1:2");
        map.set("tune.scent.log_alpha", "3,10,20");
        let cfg = ExperimentConfig::from_map(Experiment::Xc, &map).unwrap();
        assert_eq!(cfg.tune[&Method::Scent].candidates().len(), 6);
    }
}
