use rayon::prelude::*;
use serde::Serialize;

use crate::envs::ArmModel;
use crate::oracle::concentration_bound;
use crate::seed::{mix, stream_rng, ENV_STREAM};
use crate::{Error, Result};

/// Outcome of a two-sided tail audit of the censored estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditReport {
    pub runs: u64,
    pub upper_violations: u64,
    pub lower_violations: u64,
    pub upper_rate: f64,
    pub lower_rate: f64,
    pub bound: f64,
}

impl AuditReport {
    /// Allowed rate: `bound + 3 · √(bound / runs)`.
    pub fn threshold(&self) -> f64 {
        threshold(self.bound, self.runs)
    }

    pub fn passes(&self) -> bool {
        self.upper_rate <= self.threshold() && self.lower_rate <= self.threshold()
    }
}

pub fn threshold(bound: f64, runs: u64) -> f64 {
    bound + 3.0 * (bound / runs as f64).sqrt()
}

/// Audits the deviation of `μ̂_{τ'}(t_check)` from `mu_true`.
///
/// Each run plays the arm at the largest limit for `t_check − 1` rounds, so
/// every grid point `τ' ≤ τ_max` has `N = t_check − 1` samples when the
/// estimate is formed at round `t_check`. A run violates the upper (lower)
/// tail when `μ̂ − μ > r` (`μ̂ − μ < −r`) with `r = √(2α ln t / N)`. The
/// discount factor scales both sides equally and is left out.
pub fn concentration_audit(
    arm: &ArmModel,
    tau_prime: f64,
    mu_true: f64,
    alpha: f64,
    t_check: u64,
    runs: u64,
    base_seed: u64,
) -> Result<AuditReport> {
    if !(alpha > 1.0) {
        return Err(Error::config("alpha", format!("must be > 1, got {alpha}")));
    }
    if t_check < 2 {
        return Err(Error::config("t", format!("must be >= 2, got {t_check}")));
    }
    if runs == 0 {
        return Err(Error::config("runs", "must be at least 1"));
    }
    arm.validate()?;
    let n = (t_check - 1) as f64;
    let radius = (2.0 * alpha * (t_check as f64).ln() / n).sqrt();

    let flags: Vec<(bool, bool)> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream_rng(mix(base_seed, run), ENV_STREAM);
            let mut sum = 0.0;
            for s in 1..t_check {
                let (r, c) = arm.sample(s, &mut rng)?;
                if c <= tau_prime {
                    sum += r;
                }
            }
            let dev = sum / n - mu_true;
            Ok((dev > radius, dev < -radius))
        })
        .collect::<Result<_>>()?;

    let upper = flags.iter().filter(|f| f.0).count() as u64;
    let lower = flags.iter().filter(|f| f.1).count() as u64;
    Ok(AuditReport {
        runs,
        upper_violations: upper,
        lower_violations: lower,
        upper_rate: upper as f64 / runs as f64,
        lower_rate: lower as f64 / runs as f64,
        bound: concentration_bound(t_check, alpha)?,
    })
}
