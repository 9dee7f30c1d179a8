//! Synthetic datasets, deterministic in the seed.

use crate::dataio::{FeatureDataset, Labels};
use crate::error::{Error, Result};
use crate::rng::Rng;

fn unit_vector(d: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `K` centroids on the unit sphere; each row is a uniformly chosen
/// centroid plus `N(0, noise^2)` per coordinate.
pub fn synth_multiclass(n: usize, d: usize, classes: usize, noise: f64, seed: u64) -> Result<FeatureDataset> {
    if classes < 2 {
        return Err(Error::InvalidArgument("need at least two classes".into()));
    }
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("rows and dimension must be positive".into()));
    }
    let mut rng = Rng::new(seed);
    let centroids: Vec<Vec<f64>> = (0..classes).map(|_| unit_vector(d, &mut rng)).collect();
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let c = rng.index(classes);
        labels.push(c);
        for &v in &centroids[c] {
            features.push(v + noise * rng.standard_normal());
        }
    }
    FeatureDataset::new(features, d, Labels::Class(labels))
}

/// Two Gaussian blobs at `+-separation/2` along a random direction.
/// A `pos_frac` share of rows are positive; the first row is always
/// positive and the second always negative.
pub fn synth_pauc(n: usize, d: usize, pos_frac: f64, separation: f64, noise: f64, seed: u64) -> Result<FeatureDataset> {
    if n < 2 || d == 0 {
        return Err(Error::InvalidArgument("need at least two rows and one feature".into()));
    }
    if !(0.0..=1.0).contains(&pos_frac) {
        return Err(Error::InvalidArgument(format!("positive fraction {pos_frac} outside [0, 1]")));
    }
    let mut rng = Rng::new(seed);
    let dir = unit_vector(d, &mut rng);
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let positive = match i {
            0 => true,
            1 => false,
            _ => rng.uniform() < pos_frac,
        };
        let sign = if positive { 1.0 } else { -1.0 };
        labels.push(if positive { 1 } else { -1 });
        for &u in &dir {
            features.push(sign * 0.5 * separation * u + noise * rng.standard_normal());
        }
    }
    FeatureDataset::new(features, d, Labels::Sign(labels))
}

/// Linear regression data `y = a.x + b + eps` with standard normal
/// features; a fraction `outlier_frac` of rows get noise scaled by 10.
pub fn synth_regression(n: usize, d: usize, noise: f64, outlier_frac: f64, seed: u64) -> Result<FeatureDataset> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("rows and dimension must be positive".into()));
    }
    let mut rng = Rng::new(seed);
    let a: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
    let b = rng.standard_normal();
    let mut features = Vec::with_capacity(n * d);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let scale = if rng.uniform() < outlier_frac { 10.0 } else { 1.0 };
        let target = x.iter().zip(&a).map(|(u, v)| u * v).sum::<f64>() + b + scale * noise * rng.standard_normal();
        features.extend_from_slice(&x);
        y.push(target);
    }
    FeatureDataset::new(features, d, Labels::Real(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            synth_multiclass(50, 4, 5, 0.1, 3).unwrap(),
            synth_multiclass(50, 4, 5, 0.1, 3).unwrap()
        );
        assert_ne!(
            synth_multiclass(50, 4, 5, 0.1, 3).unwrap(),
            synth_multiclass(50, 4, 5, 0.1, 4).unwrap()
        );
        assert_eq!(
            synth_pauc(30, 3, 0.2, 1.0, 0.5, 1).unwrap(),
            synth_pauc(30, 3, 0.2, 1.0, 0.5, 1).unwrap()
        );
        assert_eq!(
            synth_regression(30, 3, 0.5, 0.1, 1).unwrap(),
            synth_regression(30, 3, 0.5, 0.1, 1).unwrap()
        );
    }

    #[test]
    fn pauc_has_both_signs() {
        let d = synth_pauc(2, 2, 0.0, 1.0, 0.1, 0).unwrap();
        assert_eq!(d.labels, Labels::Sign(vec![1, -1]));
    }
}
