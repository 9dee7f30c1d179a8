//! The compositional entropic risk problem abstraction, the dual state it
//! is optimized with, and the batch sampling contract shared by all
//! optimizers.
//!
//! A problem exposes `n` anchors. Anchor `i` owns a finite inner population
//! indexed `0..population_size(i)`, sampled uniformly, and a loss
//! `s_i(w; zeta)`. The objective is
//! `F(w) = (1/n) sum_i log E_zeta exp(s_i(w; zeta))`, scaled for reporting by
//! [`CermProblem::objective_scale`].

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Identifier of one inner sample. Its meaning (class id, row index, ...)
/// is private to the problem.
pub type InnerSample = usize;

pub trait CermProblem: Send + Sync {
    fn n_anchors(&self) -> usize;

    fn dim(&self) -> usize;

    /// `[c0, c1]` containing every `s_i(w; zeta)` for `w` in the feasible set,
    /// or `None` when unknown.
    fn bounds(&self) -> Option<(f64, f64)> {
        None
    }

    /// Radius of the origin-centered feasible ball; `None` means unbounded.
    fn projection_radius(&self) -> Option<f64> {
        None
    }

    /// Size of the finite inner population of `anchor`.
    fn population_size(&self, anchor: usize) -> usize;

    /// The `k`-th member of the inner population of `anchor`.
    fn population_item(&self, anchor: usize, k: usize) -> InnerSample;

    fn loss(&self, anchor: usize, w: &[f64], zeta: InnerSample) -> f64;

    /// Returns `s_i(w; zeta)` and adds `scale * grad_w s_i(w; zeta)` to `grad`.
    fn loss_and_grad(
        &self,
        anchor: usize,
        w: &[f64],
        zeta: InnerSample,
        scale: f64,
        grad: &mut [f64],
    ) -> f64;

    /// Multiplier applied to the reported objective and to the primal step
    /// (the temperature for pAUC and KL-DRO).
    fn objective_scale(&self) -> f64 {
        1.0
    }

    /// Draw `per_anchor` inner samples for each anchor of the batch.
    /// The default draws i.i.d. uniformly from each population.
    fn sample_inner(&self, anchors: &[usize], per_anchor: usize, rng: &mut Rng) -> Vec<Vec<InnerSample>> {
        anchors
            .iter()
            .map(|&i| {
                let n = self.population_size(i);
                (0..per_anchor).map(|_| self.population_item(i, rng.index(n))).collect()
            })
            .collect()
    }

    /// Optimizer steps that make up one pass over the data.
    fn steps_per_epoch(&self, batch_anchors: usize, _batch_inner: usize) -> usize {
        self.n_anchors().div_ceil(batch_anchors).max(1)
    }
}

/// One iteration's random draws.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    /// Distinct anchor indices.
    pub anchors: Vec<usize>,
    /// Samples for the dual update, one list per anchor.
    pub dual: Vec<Vec<InnerSample>>,
    /// Samples for the primal update; `None` when the dual samples are reused.
    pub primal: Option<Vec<Vec<InnerSample>>>,
}

impl Batch {
    pub fn primal_samples(&self) -> &[Vec<InnerSample>] {
        self.primal.as_deref().unwrap_or(&self.dual)
    }
}

/// Draws `batch_size` distinct anchors, then independent dual and primal
/// inner batches (the primal draw is skipped when `reuse_inner` is set).
pub fn sample_batch(
    problem: &dyn CermProblem,
    batch_size: usize,
    batch_inner: usize,
    reuse_inner: bool,
    rng: &mut Rng,
) -> Result<Batch> {
    let n = problem.n_anchors();
    if batch_size == 0 || batch_size > n {
        return Err(Error::InvalidArgument(format!(
            "batch size {batch_size} must be in 1..={n}"
        )));
    }
    if batch_inner == 0 {
        return Err(Error::InvalidArgument("inner batch size must be positive".into()));
    }
    let anchors = rng.sample_without_replacement(n, batch_size);
    let dual = problem.sample_inner(&anchors, batch_inner, rng);
    let primal = if reuse_inner {
        None
    } else {
        Some(problem.sample_inner(&anchors, batch_inner, rng))
    };
    Ok(Batch {
        anchors,
        dual,
        primal,
    })
}

/// Euclidean projection onto the ball of the given radius (identity when
/// unbounded).
pub fn project_primal(w: &mut [f64], radius: Option<f64>) {
    let Some(r) = radius else { return };
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > r {
        let scale = r / norm;
        w.iter_mut().for_each(|x| *x *= scale);
    }
}

/// How the dual coordinates are initialized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NuInit {
    Constant(f64),
    /// Set on first visit to the log-mean-exp of that visit's dual samples.
    FromFirstBatch,
}

/// Dual variables `nu_i` (with `pi_i = e^{-nu_i}`) and per-coordinate visit
/// counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DualState {
    pub nu: Vec<f64>,
    visits: Vec<u64>,
    init: NuInit,
}

impl DualState {
    pub fn new(n: usize, init: NuInit) -> Self {
        let start = match init {
            NuInit::Constant(v) => v,
            NuInit::FromFirstBatch => 0.0,
        };
        Self {
            nu: vec![start; n],
            visits: vec![0; n],
            init,
        }
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    pub fn visits(&self, i: usize) -> u64 {
        self.visits[i]
    }

    pub fn pi(&self, i: usize) -> f64 {
        (-self.nu[i]).exp()
    }

    /// Value of `nu_i` before this visit, initializing it if needed from
    /// the log-mean-exp of the visit's samples.
    pub(crate) fn begin_visit(&mut self, i: usize, batch_lme: f64) -> f64 {
        if self.visits[i] == 0 && self.init == NuInit::FromFirstBatch {
            self.nu[i] = batch_lme;
        }
        self.visits[i] += 1;
        self.nu[i]
    }

    pub fn all_finite(&self) -> bool {
        self.nu.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Tiny problem: anchor `i` has `pop` inner items; `s_i(w; k) = a_{ik} . w + b_{ik}`.
    pub struct LinearToy {
        pub dim: usize,
        pub coef: Vec<Vec<Vec<f64>>>,
        pub offset: Vec<Vec<f64>>,
        pub radius: Option<f64>,
    }

    impl LinearToy {
        pub fn random(n: usize, pop: usize, dim: usize, seed: u64) -> Self {
            let mut rng = Rng::new(seed);
            let coef = (0..n)
                .map(|_| (0..pop).map(|_| (0..dim).map(|_| rng.normal(0.0, 1.0)).collect()).collect())
                .collect();
            let offset = (0..n).map(|_| (0..pop).map(|_| rng.normal(0.0, 0.5)).collect()).collect();
            Self {
                dim,
                coef,
                offset,
                radius: None,
            }
        }
    }

    impl CermProblem for LinearToy {
        fn n_anchors(&self) -> usize {
            self.coef.len()
        }
        fn dim(&self) -> usize {
            self.dim
        }
        fn projection_radius(&self) -> Option<f64> {
            self.radius
        }
        fn population_size(&self, anchor: usize) -> usize {
            self.coef[anchor].len()
        }
        fn population_item(&self, _anchor: usize, k: usize) -> InnerSample {
            k
        }
        fn loss(&self, anchor: usize, w: &[f64], zeta: InnerSample) -> f64 {
            let a = &self.coef[anchor][zeta];
            a.iter().zip(w).map(|(x, y)| x * y).sum::<f64>() + self.offset[anchor][zeta]
        }
        fn loss_and_grad(&self, anchor: usize, w: &[f64], zeta: InnerSample, scale: f64, grad: &mut [f64]) -> f64 {
            let a = &self.coef[anchor][zeta];
            for (g, x) in grad.iter_mut().zip(a) {
                *g += scale * x;
            }
            self.loss(anchor, w, zeta)
        }
    }
}
