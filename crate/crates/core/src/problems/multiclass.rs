//! Multiclass cross-entropy over fixed features: anchor `i` is a labelled
//! row and `s_i(w; c) = x_i . (w_c - w_{y_i})`, so that
//! `log E_c e^{s}` is the softmax cross-entropy up to `log K`.

use crate::cerm::{CermProblem, InnerSample};
use crate::dataio::{FeatureDataset, Labels};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Where the inner class samples come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Negatives {
    /// Uniform over all `K` classes, matching the population objective.
    Uniform,
    /// The labels of the other rows in the batch; `batch_inner` is ignored.
    InBatch,
}

#[derive(Clone, Debug)]
pub struct MulticlassProblem {
    data: FeatureDataset,
    labels: Vec<usize>,
    classes: usize,
    pub negatives: Negatives,
    pub radius: Option<f64>,
    max_norm: f64,
}

pub fn multiclass_ce_problem(data: FeatureDataset, classes: usize) -> Result<MulticlassProblem> {
    MulticlassProblem::new(data, classes)
}

impl MulticlassProblem {
    pub fn new(data: FeatureDataset, classes: usize) -> Result<Self> {
        if classes < 2 {
            return Err(Error::InvalidArgument("need at least two classes".into()));
        }
        let labels = match &data.labels {
            Labels::Class(v) => v.clone(),
            _ => return Err(Error::Data("multiclass problem needs class labels".into())),
        };
        if let Some(&bad) = labels.iter().find(|&&y| y >= classes) {
            return Err(Error::Data(format!("label {bad} outside [0, {classes})")));
        }
        let max_norm = data.max_row_norm();
        Ok(Self {
            data,
            labels,
            classes,
            negatives: Negatives::Uniform,
            radius: None,
            max_norm,
        })
    }

    pub fn with_negatives(mut self, negatives: Negatives) -> Self {
        self.negatives = negatives;
        self
    }

    pub fn with_radius(mut self, radius: Option<f64>) -> Self {
        self.radius = radius;
        self
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn data(&self) -> &FeatureDataset {
        &self.data
    }

    /// Softmax cross-entropy `(1/n) sum_i -log softmax(W x_i)_{y_i}`.
    pub fn cross_entropy(&self, w: &[f64]) -> f64 {
        crate::oracle::full_objective(self, w) + (self.classes as f64).ln()
    }

    /// Fraction of rows whose highest logit is the true class.
    pub fn accuracy(&self, w: &[f64]) -> f64 {
        let d = self.data.dim;
        let correct = (0..self.data.n_rows)
            .filter(|&i| {
                let x = self.data.row(i);
                let mut best = (f64::NEG_INFINITY, 0);
                for c in 0..self.classes {
                    let v = dot(x, &w[c * d..(c + 1) * d]);
                    if v > best.0 {
                        best = (v, c);
                    }
                }
                best.1 == self.labels[i]
            })
            .count();
        correct as f64 / self.data.n_rows as f64
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl CermProblem for MulticlassProblem {
    fn n_anchors(&self) -> usize {
        self.data.n_rows
    }

    fn dim(&self) -> usize {
        self.classes * self.data.dim
    }

    fn bounds(&self) -> Option<(f64, f64)> {
        // |x.(w_c - w_y)| <= |x| |w_c - w_y| <= |x| sqrt(2) |w|
        self.radius.map(|r| {
            let c = self.max_norm * std::f64::consts::SQRT_2 * r;
            (-c, c)
        })
    }

    fn projection_radius(&self) -> Option<f64> {
        self.radius
    }

    fn population_size(&self, _anchor: usize) -> usize {
        self.classes
    }

    fn population_item(&self, _anchor: usize, k: usize) -> InnerSample {
        k
    }

    fn loss(&self, anchor: usize, w: &[f64], zeta: InnerSample) -> f64 {
        let y = self.labels[anchor];
        if zeta == y {
            return 0.0;
        }
        let d = self.data.dim;
        let x = self.data.row(anchor);
        dot(x, &w[zeta * d..(zeta + 1) * d]) - dot(x, &w[y * d..(y + 1) * d])
    }

    fn loss_and_grad(&self, anchor: usize, w: &[f64], zeta: InnerSample, scale: f64, grad: &mut [f64]) -> f64 {
        let y = self.labels[anchor];
        if zeta == y {
            return 0.0;
        }
        let d = self.data.dim;
        let x = self.data.row(anchor);
        for (g, xv) in grad[zeta * d..(zeta + 1) * d].iter_mut().zip(x) {
            *g += scale * xv;
        }
        for (g, xv) in grad[y * d..(y + 1) * d].iter_mut().zip(x) {
            *g -= scale * xv;
        }
        self.loss(anchor, w, zeta)
    }

    fn sample_inner(&self, anchors: &[usize], per_anchor: usize, rng: &mut Rng) -> Vec<Vec<InnerSample>> {
        match self.negatives {
            Negatives::InBatch if anchors.len() > 1 => (0..anchors.len())
                .map(|pos| {
                    anchors
                        .iter()
                        .enumerate()
                        .filter(|&(q, _)| q != pos)
                        .map(|(_, &j)| self.labels[j])
                        .collect()
                })
                .collect(),
            _ => anchors
                .iter()
                .map(|_| (0..per_anchor).map(|_| rng.index(self.classes)).collect())
                .collect(),
        }
    }
}
