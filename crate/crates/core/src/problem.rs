//! Bandit instance, action pairs and censored feedback.

use crate::discount::{DiscountSpec, Objective};
use crate::envs::ArmModel;
use crate::grid::ResourceGrid;
use crate::{Error, Result};

/// An (arm, resource limit) decision.
///
/// Both fields are 0-based indices: `arm` into the instance's arms and
/// `tau_index` into its grid. Files and console output use 1-based arm
/// numbers and the grid value of the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionPair {
    pub arm: usize,
    pub tau_index: usize,
}

impl ActionPair {
    pub fn new(arm: usize, tau_index: usize) -> Self {
        Self { arm, tau_index }
    }

    /// Position in the arm-major pair order used by tables and state vectors.
    pub fn flat(&self, grid_size: usize) -> usize {
        self.arm * grid_size + self.tau_index
    }
}

/// What the learner sees after playing a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feedback {
    pub censored: bool,
    pub cost: Option<f64>,
    pub reward: Option<f64>,
}

impl Feedback {
    pub fn completed(cost: f64, reward: f64) -> Self {
        Self {
            censored: false,
            cost: Some(cost),
            reward: Some(reward),
        }
    }

    pub fn censored() -> Self {
        Self {
            censored: true,
            cost: None,
            reward: None,
        }
    }

    /// Reward actually realized this round (0 when censored).
    pub fn realized_reward(&self) -> f64 {
        self.reward.unwrap_or(0.0)
    }

    /// `reward · 1{cost ≤ limit}`, with 0 for censored feedback.
    pub fn reward_within(&self, limit: f64) -> f64 {
        match (self.cost, self.reward) {
            (Some(c), Some(r)) if c <= limit => r,
            _ => 0.0,
        }
    }
}

/// A full bandit instance.
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub arms: Vec<ArmModel>,
    pub grid: ResourceGrid,
    pub discount: DiscountSpec,
    pub objective: Objective,
}

impl InstanceSpec {
    pub fn new(
        arms: Vec<ArmModel>,
        grid: ResourceGrid,
        discount: DiscountSpec,
        objective: Objective,
    ) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::domain("instance needs at least one arm"));
        }
        if (grid.tau_max() - discount.tau_max()).abs() > 0.0 {
            return Err(Error::domain("grid and discount disagree on tau_max"));
        }
        if let Objective::AdditiveCost { cost } = &objective {
            cost.validate()?;
        }
        for arm in &arms {
            arm.validate()?;
        }
        Ok(Self {
            arms,
            grid,
            discount,
            objective,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn n_pairs(&self) -> usize {
        self.n_arms() * self.grid_size()
    }

    pub fn tau(&self, pair: ActionPair) -> f64 {
        self.grid.point(pair.tau_index)
    }

    pub fn profile(&self) -> Result<ObjectiveProfile> {
        ObjectiveProfile::new(&self.objective, &self.discount, &self.grid)
    }
}

/// Per-grid-point affine map from a mixed moment to a pair value:
/// `value = weight[j] · μ + offset[j]`.
///
/// For the multiplicative objective `weight = γ(τ')`, `offset = 0`; for the
/// additive one `weight = 1`, `offset = -c(τ')`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveProfile {
    pub weight: Vec<f64>,
    pub offset: Vec<f64>,
}

impl ObjectiveProfile {
    pub fn new(objective: &Objective, discount: &DiscountSpec, grid: &ResourceGrid) -> Result<Self> {
        let mut weight = Vec::with_capacity(grid.len());
        let mut offset = Vec::with_capacity(grid.len());
        for &p in grid.points() {
            let (w, o) = objective.affine(discount, p)?;
            weight.push(w);
            offset.push(o);
        }
        Ok(Self { weight, offset })
    }

    pub fn value(&self, tau_index: usize, mu: f64) -> f64 {
        self.weight[tau_index] * mu + self.offset[tau_index]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feedback_indicator() {
        let fb = Feedback::completed(0.6, 0.9);
        assert_eq!(fb.reward_within(1.0), 0.9);
        assert_eq!(fb.reward_within(0.5), 0.0);
        assert_eq!(fb.reward_within(0.6), 0.9);
        assert_eq!(Feedback::censored().reward_within(1.0), 0.0);
        assert_eq!(Feedback::censored().realized_reward(), 0.0);
    }

    #[test]
    fn flat_index_is_arm_major() {
        assert_eq!(ActionPair::new(0, 3).flat(4), 3);
        assert_eq!(ActionPair::new(2, 1).flat(4), 9);
    }
}
