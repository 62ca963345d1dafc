//! Action-selection rules over (arm, resource limit) pairs.
//!
//! Every policy alternates strictly between [`Policy::select`] and
//! [`Policy::update`]. Ties are broken deterministically: smallest limit
//! first, then smallest arm.

mod kl;

pub use kl::{kl_bernoulli, klucb_index, KLUCB_TOLERANCE};

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::estimators::{BetaPosterior, CensoredEstimator, EstimatorSnapshot, NaiveEstimator, TsIndicator};
use crate::problem::{ActionPair, Feedback, InstanceSpec, ObjectiveProfile};
use crate::{Error, Result};

fn default_alpha() -> f64 {
    2.0
}

fn default_kl_c() -> f64 {
    3.0
}

fn default_prior() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicyKind {
    Rcucb {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Ucb {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Ts {
        #[serde(default = "default_prior")]
        prior_alpha: f64,
        #[serde(default = "default_prior")]
        prior_beta: f64,
        #[serde(default)]
        indicator: TsIndicator,
    },
    KlRcucb {
        #[serde(default = "default_kl_c")]
        c: f64,
    },
    UniformRandom,
    FixedOracle,
}

impl PolicyKind {
    pub fn default_name(&self) -> &'static str {
        match self {
            PolicyKind::Rcucb { .. } => "RCUCB",
            PolicyKind::Ucb { .. } => "UCB",
            PolicyKind::Ts { .. } => "TS",
            PolicyKind::KlRcucb { .. } => "KL-RCUCB",
            PolicyKind::UniformRandom => "Uniform",
            PolicyKind::FixedOracle => "Oracle",
        }
    }

    /// Rounds of the forced initialization phase.
    pub fn init_len(&self, n_arms: usize, grid_size: usize) -> u64 {
        match self {
            PolicyKind::Rcucb { .. } | PolicyKind::KlRcucb { .. } => n_arms as u64,
            PolicyKind::Ucb { .. } | PolicyKind::Ts { .. } => (n_arms * grid_size) as u64,
            PolicyKind::UniformRandom | PolicyKind::FixedOracle => 0,
        }
    }

    /// Hard errors for unusable parameters; returns warnings for parameters
    /// outside the range covered by the regret guarantees.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        match *self {
            PolicyKind::Rcucb { alpha } | PolicyKind::Ucb { alpha } => {
                if !(alpha.is_finite() && alpha > 0.0) {
                    return Err(Error::domain(format!("alpha must be > 0, got {alpha}")));
                }
                if alpha <= 1.0 {
                    warnings.push(format!(
                        "{}: alpha = {alpha} <= 1 is outside the range with regret guarantees",
                        self.default_name()
                    ));
                }
            }
            PolicyKind::Ts {
                prior_alpha,
                prior_beta,
                ..
            } => {
                if !(prior_alpha > 0.0 && prior_beta > 0.0 && prior_alpha.is_finite() && prior_beta.is_finite()) {
                    return Err(Error::domain(format!(
                        "Beta prior must be positive, got ({prior_alpha}, {prior_beta})"
                    )));
                }
            }
            PolicyKind::KlRcucb { c } => {
                if !(c.is_finite() && c >= 0.0) {
                    return Err(Error::domain(format!("KL exploration constant must be >= 0, got {c}")));
                }
            }
            PolicyKind::UniformRandom | PolicyKind::FixedOracle => {}
        }
        Ok(warnings)
    }
}

/// A policy entry of an experiment: kind, parameters and an optional label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    #[serde(flatten)]
    pub kind: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        Self { kind, label: None }
    }

    pub fn rcucb(alpha: f64) -> Self {
        Self::new(PolicyKind::Rcucb { alpha })
    }

    pub fn ucb(alpha: f64) -> Self {
        Self::new(PolicyKind::Ucb { alpha })
    }

    pub fn ts() -> Self {
        Self::new(PolicyKind::Ts {
            prior_alpha: 1.0,
            prior_beta: 1.0,
            indicator: TsIndicator::PairLimit,
        })
    }

    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or_else(|| self.kind.default_name())
    }
}

/// Index of the first maximal score in tie-break order (limit-major, then arm).
///
/// NaN scores are never selected.
pub fn argmax_pairs(n_arms: usize, grid_size: usize, mut score: impl FnMut(usize, usize) -> f64) -> ActionPair {
    let mut best = ActionPair::new(0, 0);
    let mut best_score = f64::NEG_INFINITY;
    let mut found = false;
    for j in 0..grid_size {
        for arm in 0..n_arms {
            let s = score(arm, j);
            if !found && !s.is_nan() || s > best_score {
                best = ActionPair::new(arm, j);
                best_score = s;
                found = true;
            }
        }
    }
    best
}

/// RCUCB optimism index of one pair: `w · (μ̂ + √(2α ln t / N)) + offset`,
/// `+∞` for `N = 0`.
pub fn rcucb_index(weight: f64, offset: f64, mu_hat: f64, n: u64, ln_t: f64, alpha: f64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    weight * (mu_hat + (2.0 * alpha * ln_t / n as f64).sqrt()) + offset
}

/// Modified UCB index: `w · (μ̃ + √(α ln t / (2T))) + offset`, `+∞` for `T = 0`.
pub fn ucb_index(weight: f64, offset: f64, mu_tilde: f64, t_count: u64, ln_t: f64, alpha: f64) -> f64 {
    if t_count == 0 {
        return f64::INFINITY;
    }
    weight * (mu_tilde + (alpha * ln_t / (2.0 * t_count as f64)).sqrt()) + offset
}

#[derive(Debug, Clone)]
enum Strategy {
    Rcucb { alpha: f64, est: CensoredEstimator },
    KlRcucb { c: f64, est: CensoredEstimator },
    Ucb { alpha: f64, est: NaiveEstimator },
    Ts { post: BetaPosterior, theta: Vec<f64> },
    UniformRandom,
    FixedOracle { pair: ActionPair },
}

/// A running policy: parameters, owned estimator state and round bookkeeping.
#[derive(Debug, Clone)]
pub struct Policy {
    name: String,
    kind: PolicyKind,
    strategy: Strategy,
    profile: ObjectiveProfile,
    n_arms: usize,
    grid_size: usize,
    completed: u64,
    pending: Option<ActionPair>,
}

impl Policy {
    /// `optimum` is required by the fixed-oracle baseline only.
    pub fn new(spec: &PolicySpec, instance: &InstanceSpec, optimum: Option<ActionPair>) -> Result<Self> {
        spec.kind.validate()?;
        let n = instance.n_arms();
        let grid = &instance.grid;
        let strategy = match spec.kind {
            PolicyKind::Rcucb { alpha } => Strategy::Rcucb {
                alpha,
                est: CensoredEstimator::new(n, grid),
            },
            PolicyKind::KlRcucb { c } => Strategy::KlRcucb {
                c,
                est: CensoredEstimator::new(n, grid),
            },
            PolicyKind::Ucb { alpha } => Strategy::Ucb {
                alpha,
                est: NaiveEstimator::new(n, grid),
            },
            PolicyKind::Ts {
                prior_alpha,
                prior_beta,
                indicator,
            } => Strategy::Ts {
                post: BetaPosterior::new(n, grid, prior_alpha, prior_beta, indicator)?,
                theta: vec![0.0; n * grid.len()],
            },
            PolicyKind::UniformRandom => Strategy::UniformRandom,
            PolicyKind::FixedOracle => {
                let pair = optimum.ok_or_else(|| Error::Usage("fixed-oracle policy needs the optimal pair".into()))?;
                if pair.arm >= n || pair.tau_index >= grid.len() {
                    return Err(Error::Usage(format!("optimal pair {pair:?} outside the instance")));
                }
                Strategy::FixedOracle { pair }
            }
        };
        Ok(Self {
            name: spec.name().to_owned(),
            kind: spec.kind.clone(),
            strategy,
            profile: instance.profile()?,
            n_arms: n,
            grid_size: grid.len(),
            completed: 0,
            pending: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &PolicyKind {
        &self.kind
    }

    /// Completed select/update cycles.
    pub fn rounds_completed(&self) -> u64 {
        self.completed
    }

    pub fn init_len(&self) -> u64 {
        self.kind.init_len(self.n_arms, self.grid_size)
    }

    pub fn censored_estimator(&self) -> Option<&CensoredEstimator> {
        match &self.strategy {
            Strategy::Rcucb { est, .. } | Strategy::KlRcucb { est, .. } => Some(est),
            _ => None,
        }
    }

    pub fn naive_estimator(&self) -> Option<&NaiveEstimator> {
        match &self.strategy {
            Strategy::Ucb { est, .. } => Some(est),
            _ => None,
        }
    }

    pub fn beta_posterior(&self) -> Option<&BetaPosterior> {
        match &self.strategy {
            Strategy::Ts { post, .. } => Some(post),
            _ => None,
        }
    }

    pub fn snapshot(&self) -> EstimatorSnapshot {
        match &self.strategy {
            Strategy::Rcucb { est, .. } | Strategy::KlRcucb { est, .. } => EstimatorSnapshot::Censored(est.snapshot()),
            Strategy::Ucb { est, .. } => EstimatorSnapshot::Naive(est.snapshot()),
            Strategy::Ts { post, .. } => EstimatorSnapshot::Beta(post.snapshot()),
            Strategy::UniformRandom | Strategy::FixedOracle { .. } => EstimatorSnapshot::None,
        }
    }

    /// Chooses the pair for the current round `t = rounds_completed() + 1`.
    pub fn select<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<ActionPair> {
        if let Some(p) = self.pending {
            return Err(Error::Usage(format!("select called twice without update (pending {p:?})")));
        }
        let t = self.completed + 1;
        let (n, m) = (self.n_arms, self.grid_size);
        let profile = &self.profile;
        let action = match &mut self.strategy {
            Strategy::Rcucb { alpha, est } => {
                if t <= n as u64 {
                    ActionPair::new((t - 1) as usize, m - 1)
                } else {
                    let ln_t = (t as f64).ln();
                    let alpha = *alpha;
                    argmax_pairs(n, m, |arm, j| {
                        let (mu, cnt) = est.query(arm, j);
                        rcucb_index(profile.weight[j], profile.offset[j], mu, cnt, ln_t, alpha)
                    })
                }
            }
            Strategy::KlRcucb { c, est } => {
                if t <= n as u64 {
                    ActionPair::new((t - 1) as usize, m - 1)
                } else {
                    let c = *c;
                    argmax_pairs(n, m, |arm, j| {
                        let (mu, cnt) = est.query(arm, j);
                        if cnt == 0 {
                            f64::INFINITY
                        } else {
                            klucb_index(profile.weight[j] * mu, cnt, t, c) + profile.offset[j]
                        }
                    })
                }
            }
            Strategy::Ucb { alpha, est } => {
                if t <= (n * m) as u64 {
                    sweep_pair(t, m)
                } else {
                    let ln_t = (t as f64).ln();
                    let alpha = *alpha;
                    argmax_pairs(n, m, |arm, j| {
                        let (mu, cnt) = est.query(arm, j);
                        ucb_index(profile.weight[j], profile.offset[j], mu, cnt, ln_t, alpha)
                    })
                }
            }
            Strategy::Ts { post, theta } => {
                if t <= (n * m) as u64 {
                    sweep_pair(t, m)
                } else {
                    for arm in 0..n {
                        for j in 0..m {
                            let (a, b) = post.posterior(arm, j);
                            let beta = Beta::new(a, b)
                                .map_err(|e| Error::domain(format!("Beta({a}, {b}): {e}")))?;
                            theta[arm * m + j] = beta.sample(rng);
                        }
                    }
                    argmax_pairs(n, m, |arm, j| profile.value(j, theta[arm * m + j]))
                }
            }
            Strategy::UniformRandom => {
                let k = rng.random_range(0..n * m);
                ActionPair::new(k / m, k % m)
            }
            Strategy::FixedOracle { pair } => *pair,
        };
        self.pending = Some(action);
        Ok(action)
    }

    /// Feeds the feedback of the pending action back into the estimator.
    pub fn update<R: Rng + ?Sized>(&mut self, action: ActionPair, feedback: &Feedback, rng: &mut R) -> Result<()> {
        match self.pending {
            Some(p) if p == action => {}
            Some(p) => {
                return Err(Error::Usage(format!("update for {action:?} but {p:?} was selected")));
            }
            None => return Err(Error::Usage("update called without a pending select".into())),
        }
        match &mut self.strategy {
            Strategy::Rcucb { est, .. } | Strategy::KlRcucb { est, .. } => {
                est.update(action.arm, action.tau_index, feedback)?;
            }
            Strategy::Ucb { est, .. } => est.update(action.arm, action.tau_index, feedback)?,
            Strategy::Ts { post, .. } => post.update(action.arm, action.tau_index, feedback, rng)?,
            Strategy::UniformRandom | Strategy::FixedOracle { .. } => {}
        }
        self.pending = None;
        self.completed += 1;
        Ok(())
    }
}

/// Initialization sweep: arm-major, ascending limit.
fn sweep_pair(t: u64, grid_size: usize) -> ActionPair {
    let k = (t - 1) as usize;
    ActionPair::new(k / grid_size, k % grid_size)
}
