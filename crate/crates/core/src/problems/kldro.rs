//! KL-regularized DRO least squares:
//! `tau log (1/N) sum_j exp((a.x_j + b - y_j)^2 / tau)`, a single anchor
//! whose inner population is the data rows. `w = (a, b)`.

use crate::cerm::{CermProblem, InnerSample};
use crate::dataio::{FeatureDataset, Labels};
use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Clone, Debug)]
pub struct KlDroProblem {
    data: FeatureDataset,
    targets: Vec<f64>,
    pub tau: f64,
    pub radius: Option<f64>,
}

pub fn kldro_problem(data: FeatureDataset, tau: f64) -> Result<KlDroProblem> {
    KlDroProblem::new(data, tau)
}

impl KlDroProblem {
    pub fn new(data: FeatureDataset, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
        }
        let targets = match &data.labels {
            Labels::Real(v) => v.clone(),
            _ => return Err(Error::Data("DRO regression needs real targets".into())),
        };
        Ok(Self {
            data,
            targets,
            tau,
            radius: None,
        })
    }

    pub fn with_radius(mut self, radius: Option<f64>) -> Self {
        self.radius = radius;
        self
    }

    pub fn n_rows(&self) -> usize {
        self.data.n_rows
    }

    pub fn residual(&self, w: &[f64], row: usize) -> f64 {
        let d = self.data.dim;
        let x = self.data.row(row);
        super::multiclass::dot(&w[..d], x) + w[d] - self.targets[row]
    }

    /// `(a, b)` packed into a parameter vector.
    pub fn pack(a: &[f64], b: f64) -> Vec<f64> {
        let mut w = a.to_vec();
        w.push(b);
        w
    }

    /// The reported objective `tau log mean exp(r^2 / tau)`.
    pub fn dro_objective(&self, w: &[f64]) -> f64 {
        self.tau * crate::oracle::full_objective(self, w)
    }

    pub fn mean_squared_residual(&self, w: &[f64]) -> f64 {
        (0..self.n_rows()).map(|j| self.residual(w, j).powi(2)).sum::<f64>() / self.n_rows() as f64
    }
}

impl CermProblem for KlDroProblem {
    fn n_anchors(&self) -> usize {
        1
    }

    fn dim(&self) -> usize {
        self.data.dim + 1
    }

    fn bounds(&self) -> Option<(f64, f64)> {
        self.radius.map(|r| {
            let worst = (0..self.n_rows())
                .map(|j| {
                    let xn = self.data.row(j).iter().map(|x| x * x).sum::<f64>();
                    r * (xn + 1.0).sqrt() + self.targets[j].abs()
                })
                .fold(0.0, f64::max);
            (0.0, worst * worst / self.tau)
        })
    }

    fn projection_radius(&self) -> Option<f64> {
        self.radius
    }

    fn population_size(&self, _anchor: usize) -> usize {
        self.data.n_rows
    }

    fn population_item(&self, _anchor: usize, k: usize) -> InnerSample {
        k
    }

    fn loss(&self, _anchor: usize, w: &[f64], zeta: InnerSample) -> f64 {
        self.residual(w, zeta).powi(2) / self.tau
    }

    fn loss_and_grad(&self, _anchor: usize, w: &[f64], zeta: InnerSample, scale: f64, grad: &mut [f64]) -> f64 {
        let r = self.residual(w, zeta);
        let c = scale * 2.0 * r / self.tau;
        let d = self.data.dim;
        for (g, x) in grad[..d].iter_mut().zip(self.data.row(zeta)) {
            *g += c * x;
        }
        grad[d] += c;
        r * r / self.tau
    }

    fn objective_scale(&self) -> f64 {
        self.tau
    }

    /// Rows without replacement (with replacement past the data size).
    fn sample_inner(&self, anchors: &[usize], per_anchor: usize, rng: &mut Rng) -> Vec<Vec<InnerSample>> {
        let n = self.data.n_rows;
        anchors
            .iter()
            .map(|_| {
                if per_anchor <= n {
                    rng.sample_without_replacement(n, per_anchor)
                } else {
                    (0..per_anchor).map(|_| rng.index(n)).collect()
                }
            })
            .collect()
    }

    fn steps_per_epoch(&self, _batch_anchors: usize, batch_inner: usize) -> usize {
        self.data.n_rows.div_ceil(batch_inner).max(1)
    }
}
