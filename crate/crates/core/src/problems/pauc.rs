//! One-way partial AUC with a squared-hinge surrogate: anchors are the
//! positive rows, inner samples are negatives, and
//! `s_i(w; j) = max(0, margin + w.(x_j - x_i))^2 / tau`.

use crate::cerm::{CermProblem, InnerSample};
use crate::dataio::{FeatureDataset, Labels};
use crate::error::{Error, Result};
use crate::rng::Rng;

use super::multiclass::dot;

#[derive(Clone, Debug)]
pub struct PaucProblem {
    data: FeatureDataset,
    positives: Vec<usize>,
    negatives: Vec<usize>,
    pub tau: f64,
    pub margin: f64,
    pub radius: Option<f64>,
    max_pos_norm: f64,
    max_neg_norm: f64,
}

pub fn pauc_problem(data: FeatureDataset, tau: f64, margin: f64) -> Result<PaucProblem> {
    PaucProblem::new(data, tau, margin)
}

impl PaucProblem {
    pub fn new(data: FeatureDataset, tau: f64, margin: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
        }
        let signs = match &data.labels {
            Labels::Sign(v) => v.clone(),
            _ => return Err(Error::Data("partial AUC needs +1/-1 labels".into())),
        };
        let positives: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] > 0).collect();
        let negatives: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] < 0).collect();
        if positives.is_empty() || negatives.is_empty() {
            return Err(Error::Data("partial AUC needs at least one positive and one negative row".into()));
        }
        let norm = |i: &usize| data.row(*i).iter().map(|x| x * x).sum::<f64>().sqrt();
        let max_pos_norm = positives.iter().map(norm).fold(0.0, f64::max);
        let max_neg_norm = negatives.iter().map(norm).fold(0.0, f64::max);
        Ok(Self {
            data,
            positives,
            negatives,
            tau,
            margin,
            radius: None,
            max_pos_norm,
            max_neg_norm,
        })
    }

    pub fn with_radius(mut self, radius: Option<f64>) -> Self {
        self.radius = radius;
        self
    }

    pub fn n_negatives(&self) -> usize {
        self.negatives.len()
    }

    /// Hinge argument `margin + w.(x_neg - x_pos)` for positive `anchor`
    /// and negative row `zeta`.
    pub fn hinge_argument(&self, anchor: usize, w: &[f64], zeta: InnerSample) -> f64 {
        let xp = self.data.row(self.positives[anchor]);
        let xn = self.data.row(zeta);
        self.margin + dot(w, xn) - dot(w, xp)
    }
}

impl CermProblem for PaucProblem {
    fn n_anchors(&self) -> usize {
        self.positives.len()
    }

    fn dim(&self) -> usize {
        self.data.dim
    }

    fn bounds(&self) -> Option<(f64, f64)> {
        self.radius.map(|r| {
            let hi = (self.margin + r * (self.max_pos_norm + self.max_neg_norm)).max(0.0);
            (0.0, hi * hi / self.tau)
        })
    }

    fn projection_radius(&self) -> Option<f64> {
        self.radius
    }

    fn population_size(&self, _anchor: usize) -> usize {
        self.negatives.len()
    }

    fn population_item(&self, _anchor: usize, k: usize) -> InnerSample {
        self.negatives[k]
    }

    fn loss(&self, anchor: usize, w: &[f64], zeta: InnerSample) -> f64 {
        let h = self.hinge_argument(anchor, w, zeta).max(0.0);
        h * h / self.tau
    }

    fn loss_and_grad(&self, anchor: usize, w: &[f64], zeta: InnerSample, scale: f64, grad: &mut [f64]) -> f64 {
        let h = self.hinge_argument(anchor, w, zeta).max(0.0);
        if h > 0.0 {
            let c = scale * 2.0 * h / self.tau;
            let xp = self.data.row(self.positives[anchor]);
            let xn = self.data.row(zeta);
            for ((g, a), b) in grad.iter_mut().zip(xn).zip(xp) {
                *g += c * (a - b);
            }
        }
        h * h / self.tau
    }

    fn objective_scale(&self) -> f64 {
        self.tau
    }

    /// One negative set shared by every positive in the batch, drawn
    /// without replacement when it fits.
    fn sample_inner(&self, anchors: &[usize], per_anchor: usize, rng: &mut Rng) -> Vec<Vec<InnerSample>> {
        let n_neg = self.negatives.len();
        let picks: Vec<InnerSample> = if per_anchor <= n_neg {
            rng.sample_without_replacement(n_neg, per_anchor)
                .into_iter()
                .map(|k| self.negatives[k])
                .collect()
        } else {
            (0..per_anchor).map(|_| self.negatives[rng.index(n_neg)]).collect()
        };
        vec![picks; anchors.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::full_objective;

    fn toy() -> FeatureDataset {
        FeatureDataset::new(
            vec![1.0, 0.0, 2.0, 1.0, -1.0, 0.5, -2.0, -1.0],
            2,
            Labels::Sign(vec![1, 1, -1, -1]),
        )
        .unwrap()
    }

    #[test]
    fn zero_weights_give_margin_squared() {
        let p = PaucProblem::new(toy(), 0.07, 0.5).unwrap();
        let f = full_objective(&p, &[0.0, 0.0]) * p.objective_scale();
        assert!((f - 0.25).abs() < 1e-14);
    }

    #[test]
    fn separated_scores_give_zero() {
        let p = PaucProblem::new(toy(), 0.1, 0.5).unwrap();
        // positives score >= 1, negatives <= -1.5 under w = (1, 0)
        assert_eq!(full_objective(&p, &[1.0, 0.0]), 0.0);
    }

    #[test]
    fn needs_both_classes() {
        let d = FeatureDataset::new(vec![1.0, 2.0], 1, Labels::Sign(vec![1, 1])).unwrap();
        assert!(matches!(PaucProblem::new(d, 0.1, 0.5), Err(Error::Data(_))));
    }

    #[test]
    fn negatives_are_shared() {
        let p = PaucProblem::new(toy(), 0.1, 0.5).unwrap();
        let mut rng = Rng::new(2);
        let s = p.sample_inner(&[0, 1], 2, &mut rng);
        assert_eq!(s[0], s[1]);
        assert_ne!(s[0][0], s[0][1]);
        assert!(s[0].iter().all(|&j| j >= 2));
    }
}
