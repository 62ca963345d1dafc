//! Discount and cost functions over allocated resources, and the per-pair
//! objective built from them.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Family of the discount function `γ` applied to a realized reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscountKind {
    /// `(τ - τ̃) / τ`
    Linear,
    /// `((τ - τ̃) / τ)^k` with `k > 1`
    Polynomial { k: f64 },
    /// `((τ - τ̃) / τ)^k` with `k ∈ (0, 1)`
    Sublinear { k: f64 },
    /// `(1 + ρ)^(-τ̃ / τ)` with `ρ ∈ (0, 1)`
    Geometric { rho: f64 },
    /// `exp(-1 / (τ - τ̃)^k) / exp(-1 / τ^k)` with `k > 0`, extended by 0 at `τ̃ = τ`
    Exponential { k: f64 },
}

/// A discount family together with the maximal resource limit `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountSpec {
    kind: DiscountKind,
    tau_max: f64,
}

impl DiscountSpec {
    pub fn new(kind: DiscountKind, tau_max: f64) -> Result<Self> {
        if !(tau_max.is_finite() && tau_max > 0.0) {
            return Err(Error::domain(format!("tau_max must be finite and > 0, got {tau_max}")));
        }
        let ok = match kind {
            DiscountKind::Linear => true,
            DiscountKind::Polynomial { k } => k.is_finite() && k > 1.0,
            DiscountKind::Sublinear { k } => k > 0.0 && k < 1.0,
            DiscountKind::Geometric { rho } => rho > 0.0 && rho < 1.0,
            DiscountKind::Exponential { k } => k.is_finite() && k > 0.0,
        };
        if !ok {
            return Err(Error::domain(format!("invalid discount parameters: {kind:?}")));
        }
        Ok(Self { kind, tau_max })
    }

    pub fn linear(tau_max: f64) -> Result<Self> {
        Self::new(DiscountKind::Linear, tau_max)
    }

    pub fn kind(&self) -> DiscountKind {
        self.kind
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Evaluates `γ(τ̃)` for `τ̃ ∈ [0, tau_max]`.
    pub fn eval(&self, tau_tilde: f64) -> Result<f64> {
        if !(0.0..=self.tau_max).contains(&tau_tilde) {
            return Err(Error::domain(format!(
                "resource {tau_tilde} outside [0, {}]",
                self.tau_max
            )));
        }
        let tau = self.tau_max;
        let slack = (tau - tau_tilde) / tau;
        let value = match self.kind {
            DiscountKind::Linear => slack,
            DiscountKind::Polynomial { k } | DiscountKind::Sublinear { k } => slack.powf(k),
            DiscountKind::Geometric { rho } => (1.0 + rho).powf(-tau_tilde / tau),
            DiscountKind::Exponential { k } => {
                let rest = tau - tau_tilde;
                if rest <= 0.0 {
                    0.0
                } else {
                    (tau.powf(-k) - rest.powf(-k)).exp()
                }
            }
        };
        Ok(value.clamp(0.0, 1.0))
    }
}

/// Additive cost `c(τ̃) = scale · (τ̃ / τ)^exponent`, mapping `[0, τ]` into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    pub scale: f64,
    #[serde(default = "one")]
    pub exponent: f64,
}

fn one() -> f64 {
    1.0
}

impl CostSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.scale) {
            return Err(Error::domain(format!("cost scale {} outside [0, 1]", self.scale)));
        }
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::domain(format!("cost exponent {} must be > 0", self.exponent)));
        }
        Ok(())
    }

    pub fn eval(&self, tau_tilde: f64, tau_max: f64) -> Result<f64> {
        if !(0.0..=tau_max).contains(&tau_tilde) {
            return Err(Error::domain(format!("resource {tau_tilde} outside [0, {tau_max}]")));
        }
        Ok((self.scale * (tau_tilde / tau_max).powf(self.exponent)).clamp(0.0, 1.0))
    }
}

/// How the realizable mixed moment is turned into the value of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    /// `γ(τ') · μ`
    #[default]
    MultiplicativeDiscount,
    /// `μ - c(τ')`
    AdditiveCost { cost: CostSpec },
}

impl Objective {
    /// Multiplier and offset such that the value of a pair at `tau_prime` is
    /// `weight · μ + offset`.
    pub fn affine(&self, discount: &DiscountSpec, tau_prime: f64) -> Result<(f64, f64)> {
        match self {
            Objective::MultiplicativeDiscount => Ok((discount.eval(tau_prime)?, 0.0)),
            Objective::AdditiveCost { cost } => {
                Ok((1.0, -cost.eval(tau_prime, discount.tau_max())?))
            }
        }
    }
}

/// Value of a pair with mixed moment `mu` at resource limit `tau_prime`.
pub fn objective_value(
    objective: &Objective,
    discount: &DiscountSpec,
    mu: f64,
    tau_prime: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::domain(format!("mixed moment {mu} outside [0, 1]")));
    }
    let (weight, offset) = objective.affine(discount, tau_prime)?;
    Ok(weight * mu + offset)
}
