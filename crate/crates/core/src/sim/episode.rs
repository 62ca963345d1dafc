use serde::Serialize;

use crate::envs::{observe, sample_round_into, RoundOutcome};
use crate::estimators::{CensoredEstimator, EstimatorSnapshot};
use crate::oracle::NuTable;
use crate::policies::{Policy, PolicySpec};
use crate::problem::{ActionPair, InstanceSpec};
use crate::seed::{stream_rng, ENV_STREAM, POLICY_STREAM};
use crate::{Error, Result};

/// One round of an episode. `arm` and `tau_index` are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundRecord {
    pub arm: u32,
    pub tau_index: u32,
    pub censored: bool,
    pub reward: f64,
    pub inst_regret: f64,
    pub cum_regret: f64,
}

impl RoundRecord {
    pub fn pair(&self) -> ActionPair {
        ActionPair::new(self.arm as usize, self.tau_index as usize)
    }
}

/// Everything recorded about one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub policy: String,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
    /// Play counts `T_{i,τ'}(T)`, arm-major.
    pub play_counts: Vec<u64>,
    pub grid_size: usize,
    pub censored_rounds: u64,
    pub total_reward: f64,
    /// `Σ N_{i,τ'}` of a censored estimator fed with this episode's feedback.
    pub information_total: u64,
    /// Largest number of pairs a single censored update touched.
    pub max_touched: usize,
    pub final_state: EstimatorSnapshot,
}

impl RunTrace {
    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn cumulative_regret(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.cum_regret)
    }

    pub fn censoring_proportion(&self) -> f64 {
        if self.rounds.is_empty() {
            0.0
        } else {
            self.censored_rounds as f64 / self.rounds.len() as f64
        }
    }

    pub fn play_count(&self, pair: ActionPair) -> u64 {
        self.play_counts[pair.flat(self.grid_size)]
    }
}

/// Plays `spec` on `instance` for `horizon` rounds.
///
/// Environment draws come from ChaCha stream [`ENV_STREAM`] of `seed`, the
/// policy's own randomness from [`POLICY_STREAM`], so two policies run under
/// the same seed face the same reward/cost sequence.
pub fn run_episode(
    instance: &InstanceSpec,
    spec: &PolicySpec,
    horizon: u64,
    table: &NuTable,
    seed: u64,
) -> Result<RunTrace> {
    table.check_matches(instance)?;
    let mut policy = Policy::new(spec, instance, Some(table.optimal_pair()))?;
    let init = policy.init_len();
    if horizon < init {
        return Err(Error::config(
            "horizon",
            format!(
                "horizon shorter than initialization ({horizon} < {init} rounds for {})",
                policy.name()
            ),
        ));
    }

    let m = instance.grid_size();
    let mut env_rng = stream_rng(seed, ENV_STREAM);
    let mut policy_rng = stream_rng(seed, POLICY_STREAM);
    let mut shadow = CensoredEstimator::new(instance.n_arms(), &instance.grid);
    let mut outcome = RoundOutcome::default();

    let mut rounds = Vec::with_capacity(horizon as usize);
    let mut play_counts = vec![0u64; instance.n_pairs()];
    let (mut censored_rounds, mut total_reward, mut cum, mut max_touched) = (0u64, 0.0, 0.0, 0usize);

    for t in 1..=horizon {
        sample_round_into(instance, t, &mut env_rng, &mut outcome)?;
        let action = policy.select(&mut policy_rng)?;
        let fb = observe(&outcome, action, instance.tau(action));
        let inst_regret = table.gap(action);
        cum += inst_regret;
        play_counts[action.flat(m)] += 1;
        censored_rounds += fb.censored as u64;
        total_reward += fb.realized_reward();
        max_touched = max_touched.max(shadow.update(action.arm, action.tau_index, &fb)?);
        rounds.push(RoundRecord {
            arm: action.arm as u32,
            tau_index: action.tau_index as u32,
            censored: fb.censored,
            reward: fb.realized_reward(),
            inst_regret,
            cum_regret: cum,
        });
        policy.update(action, &fb, &mut policy_rng)?;
    }

    Ok(RunTrace {
        policy: policy.name().to_owned(),
        seed,
        rounds,
        play_counts,
        grid_size: m,
        censored_rounds,
        total_reward,
        information_total: shadow.counts().iter().sum(),
        max_touched,
        final_state: policy.snapshot(),
    })
}

/// `|R_T − Σ Δ · T_{i,τ'}(T)|` for a completed trace.
pub fn decomposition_check(trace: &RunTrace, table: &NuTable) -> f64 {
    let by_pairs: f64 = trace
        .play_counts
        .iter()
        .zip(&table.pairs)
        .map(|(&n, p)| p.gap * n as f64)
        .sum();
    (trace.cumulative_regret() - by_pairs).abs()
}
