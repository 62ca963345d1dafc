use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Attempts allowed per truncated draw before the arm is declared pathological.
pub const MAX_REJECTION_ATTEMPTS: u64 = 1_000_000;

/// Covariance `σ · [[1, 2x√(1-x²)], [2x√(1-x²), 1]]`.
///
/// `x` steers the correlation between reward and cost; the matrix is
/// singular at `x = 1/√2`, where the off-diagonal factor reaches 1.
pub fn make_cov(x: f64, sigma: f64) -> Result<[[f64; 2]; 2]> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, 1]")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma = {sigma} must be > 0")));
    }
    let factor = correlation_factor(x);
    if factor >= 1.0 - 1e-12 {
        return Err(Error::SingularCovariance { x, factor });
    }
    let off = sigma * factor;
    Ok([[sigma, off], [off, sigma]])
}

fn correlation_factor(x: f64) -> f64 {
    2.0 * x * (1.0 - x * x).sqrt()
}

/// Bivariate Gaussian over (reward, cost) conditioned on `[0, 1]²`.
///
/// `mean` is the pre-truncation mean; moments of the truncated law come
/// from the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianArmSpec {
    mean: [f64; 2],
    x: f64,
    sigma: f64,
    cov: [[f64; 2]; 2],
    chol: [f64; 3],
}

impl GaussianArmSpec {
    pub fn new(mean: [f64; 2], x: f64, sigma: f64) -> Result<Self> {
        if !mean.iter().all(|m| m.is_finite()) {
            return Err(Error::domain("gaussian mean must be finite"));
        }
        let cov = make_cov(x, sigma)?;
        let l11 = cov[0][0].sqrt();
        let l21 = cov[1][0] / l11;
        let l22 = (cov[1][1] - l21 * l21).sqrt();
        Ok(Self {
            mean,
            x,
            sigma,
            cov,
            chol: [l11, l21, l22],
        })
    }

    pub fn mean(&self) -> [f64; 2] {
        self.mean
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cov(&self) -> [[f64; 2]; 2] {
        self.cov
    }

    /// Untruncated density at `(r, c)`.
    pub fn density(&self, r: f64, c: f64) -> f64 {
        let [[a, b], [_, d]] = self.cov;
        let det = a * d - b * b;
        let dr = r - self.mean[0];
        let dc = c - self.mean[1];
        let q = (d * dr * dr - 2.0 * b * dr * dc + a * dc * dc) / det;
        (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    }

    /// One (reward, cost) draw from the truncated law, by rejection.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, f64)> {
        let [l11, l21, l22] = self.chol;
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let r = self.mean[0] + l11 * z1;
            let c = self.mean[1] + l21 * z1 + l22 * z2;
            if (0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&c) {
                return Ok((r, c));
            }
        }
        Err(Error::SamplingCap {
            attempts: MAX_REJECTION_ATTEMPTS,
        })
    }
}
