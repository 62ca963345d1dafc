//! Online sufficient statistics per (arm, resource limit) pair.
//!
//! All states store counts and reward sums in arm-major order
//! (`arm * m + tau_index`); means are derived on query.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::grid::ResourceGrid;
use crate::problem::{ActionPair, Feedback};
use crate::{Error, Result};

fn check_pair(n_arms: usize, m: usize, arm: usize, tau_index: usize) -> Result<()> {
    if arm >= n_arms {
        return Err(Error::domain(format!("arm index {arm} out of range (n = {n_arms})")));
    }
    if tau_index >= m {
        return Err(Error::domain(format!("grid index {tau_index} is not a grid point (m = {m})")));
    }
    Ok(())
}

/// Censored mixed-moment estimator.
///
/// Playing `(i, τ_t)` reveals, for every grid point `τ' ≤ τ_t`, a sample of
/// `R · 1{C ≤ τ'}`: a censored round at `τ_t` means `C > τ_t ≥ τ'`. All those
/// pairs are updated, so the counts `N` are non-increasing in `τ'`.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredEstimator {
    points: Vec<f64>,
    n_arms: usize,
    counts: Vec<u64>,
    sums: Vec<f64>,
    touched: u64,
}

impl CensoredEstimator {
    pub fn new(n_arms: usize, grid: &ResourceGrid) -> Self {
        let len = n_arms * grid.len();
        Self {
            points: grid.points().to_vec(),
            n_arms,
            counts: vec![0; len],
            sums: vec![0.0; len],
            touched: 0,
        }
    }

    fn m(&self) -> usize {
        self.points.len()
    }

    /// Updates every pair `(arm, τ')` with `τ' ≤ τ_chosen`; returns how many
    /// pairs were touched (at most `m`).
    pub fn update(&mut self, arm: usize, tau_chosen: usize, feedback: &Feedback) -> Result<usize> {
        check_pair(self.n_arms, self.m(), arm, tau_chosen)?;
        let base = arm * self.m();
        for j in 0..=tau_chosen {
            self.counts[base + j] += 1;
            self.sums[base + j] += feedback.reward_within(self.points[j]);
        }
        let touched = tau_chosen + 1;
        self.touched += touched as u64;
        Ok(touched)
    }

    /// `(μ̂, N)`; `(0, 0)` for a pair never updated.
    pub fn query(&self, arm: usize, tau_index: usize) -> (f64, u64) {
        let k = arm * self.m() + tau_index;
        let n = self.counts[k];
        if n == 0 {
            (0.0, 0)
        } else {
            (self.sums[k] / n as f64, n)
        }
    }

    pub fn count(&self, arm: usize, tau_index: usize) -> u64 {
        self.counts[arm * self.m() + tau_index]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// Total pair updates performed so far.
    pub fn touched_total(&self) -> u64 {
        self.touched
    }

    pub fn snapshot(&self) -> Vec<CensoredEntry> {
        self.counts
            .iter()
            .zip(&self.sums)
            .enumerate()
            .map(|(k, (&n, &sum))| CensoredEntry {
                arm: k / self.m() + 1,
                tau: self.points[k % self.m()],
                n,
                sum,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensoredEntry {
    pub arm: usize,
    pub tau: f64,
    pub n: u64,
    pub sum: f64,
}

/// Per-pair running mean using only rounds where exactly that pair was played.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveEstimator {
    points: Vec<f64>,
    n_arms: usize,
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl NaiveEstimator {
    pub fn new(n_arms: usize, grid: &ResourceGrid) -> Self {
        let len = n_arms * grid.len();
        Self {
            points: grid.points().to_vec(),
            n_arms,
            counts: vec![0; len],
            sums: vec![0.0; len],
        }
    }

    fn m(&self) -> usize {
        self.points.len()
    }

    pub fn update(&mut self, arm: usize, tau_chosen: usize, feedback: &Feedback) -> Result<()> {
        check_pair(self.n_arms, self.m(), arm, tau_chosen)?;
        let k = arm * self.m() + tau_chosen;
        self.counts[k] += 1;
        self.sums[k] += feedback.realized_reward();
        Ok(())
    }

    /// `(μ̃, T)`; `(0, 0)` for a pair never played.
    pub fn query(&self, arm: usize, tau_index: usize) -> (f64, u64) {
        let k = arm * self.m() + tau_index;
        let t = self.counts[k];
        if t == 0 {
            (0.0, 0)
        } else {
            (self.sums[k] / t as f64, t)
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn snapshot(&self) -> Vec<NaiveEntry> {
        self.counts
            .iter()
            .zip(&self.sums)
            .enumerate()
            .map(|(k, (&t, &sum))| NaiveEntry {
                arm: k / self.m() + 1,
                tau: self.points[k % self.m()],
                t,
                sum,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveEntry {
    pub arm: usize,
    pub tau: f64,
    pub t: u64,
    pub sum: f64,
}

/// Threshold inside the Bernoulli trial of the Beta posterior update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TsIndicator {
    /// Success probability `R · 1{C ≤ τ'}` for each updated pair `τ'`.
    #[default]
    PairLimit,
    /// Success probability `R · 1{C ≤ τ_t}` (the played limit) for every updated pair.
    ChosenLimit,
}

/// Beta posterior counts per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPosterior {
    points: Vec<f64>,
    n_arms: usize,
    successes: Vec<u64>,
    failures: Vec<u64>,
    prior: (f64, f64),
    indicator: TsIndicator,
}

impl BetaPosterior {
    pub fn new(
        n_arms: usize,
        grid: &ResourceGrid,
        prior_alpha: f64,
        prior_beta: f64,
        indicator: TsIndicator,
    ) -> Result<Self> {
        if !(prior_alpha > 0.0 && prior_beta > 0.0 && prior_alpha.is_finite() && prior_beta.is_finite()) {
            return Err(Error::domain(format!(
                "Beta prior must be positive, got ({prior_alpha}, {prior_beta})"
            )));
        }
        let len = n_arms * grid.len();
        Ok(Self {
            points: grid.points().to_vec(),
            n_arms,
            successes: vec![0; len],
            failures: vec![0; len],
            prior: (prior_alpha, prior_beta),
            indicator,
        })
    }

    fn m(&self) -> usize {
        self.points.len()
    }

    /// One Bernoulli trial per pair `τ' ≤ τ_chosen`, drawn in ascending `τ'`.
    pub fn update<R: Rng + ?Sized>(
        &mut self,
        arm: usize,
        tau_chosen: usize,
        feedback: &Feedback,
        rng: &mut R,
    ) -> Result<()> {
        check_pair(self.n_arms, self.m(), arm, tau_chosen)?;
        let base = arm * self.m();
        for j in 0..=tau_chosen {
            let p = match self.indicator {
                TsIndicator::PairLimit => feedback.reward_within(self.points[j]),
                TsIndicator::ChosenLimit => feedback.realized_reward(),
            };
            if rng.random::<f64>() < p {
                self.successes[base + j] += 1;
            } else {
                self.failures[base + j] += 1;
            }
        }
        Ok(())
    }

    /// Posterior parameters `(α₀ + S, β₀ + F)`.
    pub fn posterior(&self, arm: usize, tau_index: usize) -> (f64, f64) {
        let k = arm * self.m() + tau_index;
        (
            self.prior.0 + self.successes[k] as f64,
            self.prior.1 + self.failures[k] as f64,
        )
    }

    pub fn counts(&self, arm: usize, tau_index: usize) -> (u64, u64) {
        let k = arm * self.m() + tau_index;
        (self.successes[k], self.failures[k])
    }

    pub fn snapshot(&self) -> Vec<BetaEntry> {
        self.successes
            .iter()
            .zip(&self.failures)
            .enumerate()
            .map(|(k, (&s, &f))| BetaEntry {
                arm: k / self.m() + 1,
                tau: self.points[k % self.m()],
                s,
                f,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub arm: usize,
    pub tau: f64,
    pub s: u64,
    pub f: u64,
}

/// Estimator state dump, tagged by estimator kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", content = "pairs", rename_all = "snake_case")]
pub enum EstimatorSnapshot {
    Censored(Vec<CensoredEntry>),
    Naive(Vec<NaiveEntry>),
    Beta(Vec<BetaEntry>),
    None,
}

/// Convenience: update any pair-indexed estimator from an [`ActionPair`].
pub fn censored_update(
    state: &mut CensoredEstimator,
    action: ActionPair,
    feedback: &Feedback,
) -> Result<usize> {
    state.update(action.arm, action.tau_index, feedback)
}
