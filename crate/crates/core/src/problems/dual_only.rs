//! Scalar problems `min_nu E[e^{s(zeta) - nu}] + nu` with no primal variable.

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DualDist {
    /// `s ~ N(mu, sigma^2)`, so `z = e^s` is lognormal.
    Gaussian { mu: f64, sigma: f64 },
    /// `z = high` with probability `p`, otherwise `z = low`.
    TwoPoint { low: f64, high: f64, p: f64 },
}

/// Moments of `z = e^s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistributionStats {
    pub m: f64,
    pub var_z: f64,
    pub kappa: f64,
    pub nu_star: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualOnlyProblem {
    pub dist: DualDist,
    pub stats: DistributionStats,
}

impl DualOnlyProblem {
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!("bad gaussian parameters mu={mu}, sigma={sigma}")));
        }
        let nu_star = mu + 0.5 * sigma * sigma;
        let m = nu_star.exp();
        let kappa = (sigma * sigma).exp();
        let var_z = m * m * (sigma * sigma).exp_m1();
        Ok(Self {
            dist: DualDist::Gaussian { mu, sigma },
            stats: DistributionStats { m, var_z, kappa, nu_star },
        })
    }

    pub fn two_point(low: f64, high: f64, p: f64) -> Result<Self> {
        if !(low > 0.0 && high > 0.0 && low.is_finite() && high.is_finite()) || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "bad two-point parameters low={low}, high={high}, p={p}"
            )));
        }
        let m = (1.0 - p) * low + p * high;
        let var_z = p * (1.0 - p) * (high - low) * (high - low);
        Ok(Self {
            dist: DualDist::TwoPoint { low, high, p },
            stats: DistributionStats {
                m,
                var_z,
                kappa: 1.0 + var_z / (m * m),
                nu_star: m.ln(),
            },
        })
    }

    /// Draws `s(zeta)`.
    #[inline]
    pub fn sample_s(&self, rng: &mut Rng) -> f64 {
        match self.dist {
            DualDist::Gaussian { mu, sigma } => rng.normal(mu, sigma),
            DualDist::TwoPoint { low, high, p } => {
                if rng.uniform() < p {
                    high.ln()
                } else {
                    low.ln()
                }
            }
        }
    }

    /// Range of `s`, when bounded.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self.dist {
            DualDist::Gaussian { sigma, mu } if sigma == 0.0 => Some((mu, mu)),
            DualDist::Gaussian { .. } => None,
            DualDist::TwoPoint { low, high, p } => {
                let (l, h) = (low.ln(), high.ln());
                if p == 0.0 {
                    Some((l, l))
                } else if p == 1.0 {
                    Some((h, h))
                } else {
                    Some((l.min(h), l.max(h)))
                }
            }
        }
    }

    /// Sub-Gaussian parameter of `s` (the standard deviation for the
    /// Gaussian, half the range for two-point laws).
    pub fn subgaussian_sigma(&self) -> f64 {
        match self.dist {
            DualDist::Gaussian { sigma, .. } => sigma,
            DualDist::TwoPoint { low, high, .. } => 0.5 * (high.ln() - low.ln()).abs(),
        }
    }

    pub fn objective(&self, nu: f64) -> f64 {
        crate::dual_updates::dual_objective(self.stats.nu_star, nu)
    }

    pub fn gap(&self, nu: f64) -> f64 {
        crate::dual_updates::dual_gap(self.stats.nu_star, nu)
    }
}

/// The two-point pair supported on `{1, kappa}` with
/// `p0 = 1/kappa`, `p1 = p0 + 1/(8 sqrt(kappa T))`.
pub fn hard_instance_pair(kappa: f64, horizon: u64) -> Result<(DualOnlyProblem, DualOnlyProblem)> {
    if !(kappa >= 2.0) || !kappa.is_finite() {
        return Err(Error::InvalidArgument(format!("kappa must be at least 2, got {kappa}")));
    }
    if (horizon as f64) < kappa {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be at least kappa = {kappa}"
        )));
    }
    let p0 = 1.0 / kappa;
    let h = 1.0 / (8.0 * (kappa * horizon as f64).sqrt());
    Ok((
        DualOnlyProblem::two_point(1.0, kappa, p0)?,
        DualOnlyProblem::two_point(1.0, kappa, p0 + h)?,
    ))
}
