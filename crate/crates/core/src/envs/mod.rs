//! Arm models and the per-round environment.
//!
//! Every round draws one (reward, cost) pair per arm, independently across
//! arms. The environment itself is stateless: a draw depends only on the
//! arm models, the round number (for cyclic traces) and the RNG.

mod gaussian;
mod trace;

pub use gaussian::{make_cov, GaussianArmSpec, MAX_REJECTION_ATTEMPTS};
pub use trace::{read_trace_csv, trace_env_load, ReplayMode, TraceArmSpec};

use rand::Rng;

use crate::problem::{ActionPair, Feedback, InstanceSpec};
use crate::{Error, Result};

/// Arms whose mixed moments have closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticArmSpec {
    /// Always returns `(reward, cost)`.
    Degenerate { reward: f64, cost: f64 },
    /// Reward ~ Bernoulli(`reward_mean`), cost ~ Uniform[0, 1], independent.
    IndependentUniformCost { reward_mean: f64 },
}

impl AnalyticArmSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            AnalyticArmSpec::Degenerate { reward, cost } => {
                if !(0.0..=1.0).contains(&reward) || !(cost.is_finite() && cost >= 0.0) {
                    return Err(Error::domain(format!(
                        "degenerate arm needs reward in [0, 1] and cost >= 0, got ({reward}, {cost})"
                    )));
                }
            }
            AnalyticArmSpec::IndependentUniformCost { reward_mean } => {
                if !(0.0..=1.0).contains(&reward_mean) {
                    return Err(Error::domain(format!("reward mean {reward_mean} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// `E[R · 1{C ≤ τ'}]`.
    pub fn mixed_moment(&self, tau_prime: f64) -> f64 {
        match *self {
            AnalyticArmSpec::Degenerate { reward, cost } => {
                if cost <= tau_prime {
                    reward
                } else {
                    0.0
                }
            }
            AnalyticArmSpec::IndependentUniformCost { reward_mean } => {
                reward_mean * tau_prime.clamp(0.0, 1.0)
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            AnalyticArmSpec::Degenerate { reward, cost } => (reward, cost),
            AnalyticArmSpec::IndependentUniformCost { reward_mean } => {
                let reward = if rng.random::<f64>() < reward_mean { 1.0 } else { 0.0 };
                (reward, rng.random::<f64>())
            }
        }
    }
}

/// Joint reward/consumption law of one arm.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmModel {
    Gaussian(GaussianArmSpec),
    Analytic(AnalyticArmSpec),
    Trace(TraceArmSpec),
}

impl ArmModel {
    pub fn degenerate(reward: f64, cost: f64) -> Self {
        ArmModel::Analytic(AnalyticArmSpec::Degenerate { reward, cost })
    }

    pub fn uniform_cost(reward_mean: f64) -> Self {
        ArmModel::Analytic(AnalyticArmSpec::IndependentUniformCost { reward_mean })
    }

    pub fn gaussian(mean: [f64; 2], x: f64, sigma: f64) -> Result<Self> {
        GaussianArmSpec::new(mean, x, sigma).map(ArmModel::Gaussian)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ArmModel::Analytic(a) => a.validate(),
            ArmModel::Gaussian(_) | ArmModel::Trace(_) => Ok(()),
        }
    }

    /// One (reward, cost) draw for 1-based `round`.
    pub fn sample<R: Rng + ?Sized>(&self, round: u64, rng: &mut R) -> Result<(f64, f64)> {
        match self {
            ArmModel::Gaussian(g) => g.sample(rng),
            ArmModel::Analytic(a) => Ok(a.sample(rng)),
            ArmModel::Trace(t) => Ok(t.sample(round, rng)),
        }
    }
}

/// Per-arm (reward, cost) pairs of one round.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoundOutcome {
    pub pairs: Vec<(f64, f64)>,
}

impl RoundOutcome {
    pub fn reward(&self, arm: usize) -> f64 {
        self.pairs[arm].0
    }

    pub fn cost(&self, arm: usize) -> f64 {
        self.pairs[arm].1
    }
}

/// Draws one round for every arm of `instance`, in arm order, into `out`.
pub fn sample_round_into<R: Rng + ?Sized>(
    instance: &InstanceSpec,
    round: u64,
    rng: &mut R,
    out: &mut RoundOutcome,
) -> Result<()> {
    out.pairs.clear();
    for arm in &instance.arms {
        out.pairs.push(arm.sample(round, rng)?);
    }
    Ok(())
}

pub fn sample_round<R: Rng + ?Sized>(
    instance: &InstanceSpec,
    round: u64,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let mut out = RoundOutcome::default();
    sample_round_into(instance, round, rng, &mut out)?;
    Ok(out)
}

/// Censors the chosen arm's draw against the chosen limit. `C ≤ τ'` completes.
pub fn observe(outcome: &RoundOutcome, action: ActionPair, tau_prime: f64) -> Feedback {
    let (reward, cost) = outcome.pairs[action.arm];
    if cost <= tau_prime {
        Feedback::completed(cost, reward)
    } else {
        Feedback::censored()
    }
}
