use rayon::prelude::*;
use serde::Serialize;

use super::episode::{decomposition_check, run_episode, RunTrace};
use crate::oracle::NuTable;
use crate::policies::PolicySpec;
use crate::problem::InstanceSpec;
use crate::seed::episode_seed;
use crate::{Error, Result};

/// How repetitions are scheduled. Both produce identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub instance: InstanceSpec,
    pub policies: Vec<PolicySpec>,
    pub horizon: u64,
    pub repetitions: usize,
    pub base_seed: u64,
    pub table: NuTable,
}

/// Mean and standard error over repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    /// Sample mean and `std / √n` with the `n − 1` variance; SE is 0 for `n = 1`.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut sum, mut sumsq) = (0usize, 0.0, 0.0);
        for v in values {
            n += 1;
            sum += v;
            sumsq += v * v;
        }
        if n == 0 {
            return Self { mean: 0.0, se: 0.0 };
        }
        let nf = n as f64;
        let mean = sum / nf;
        let se = if n > 1 {
            (((sumsq - nf * mean * mean) / (nf - 1.0)).max(0.0) / nf).sqrt()
        } else {
            0.0
        };
        Self { mean, se }
    }
}

/// Per-policy results: the repetitions' traces and their aggregates.
#[derive(Debug, Clone)]
pub struct PolicyResult {
    pub name: String,
    pub traces: Vec<RunTrace>,
    /// Per round `t = 1..T`: mean cumulative regret and its standard error.
    pub curve: Vec<MeanSe>,
    pub censoring: MeanSe,
    pub final_regret: MeanSe,
    pub total_reward: MeanSe,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub policies: Vec<PolicyResult>,
}

/// Runs every (policy, repetition) episode and aggregates the results.
///
/// Episode seeds depend only on the base seed and the (policy, repetition)
/// indices, and aggregation folds in repetition order, so the schedule has
/// no effect on the output. The first failed repetition aborts the run.
pub fn run_experiment(plan: &ExperimentPlan, execution: Execution) -> Result<ExperimentResult> {
    if plan.repetitions == 0 {
        return Err(Error::config("repetitions", "must be at least 1"));
    }
    if plan.policies.is_empty() {
        return Err(Error::config("policies", "at least one policy is required"));
    }
    plan.table.check_matches(&plan.instance)?;

    let tasks: Vec<(usize, usize)> = (0..plan.policies.len())
        .flat_map(|p| (0..plan.repetitions).map(move |r| (p, r)))
        .collect();
    let run = |&(p, r): &(usize, usize)| {
        let seed = episode_seed(plan.base_seed, p, r);
        run_episode(&plan.instance, &plan.policies[p], plan.horizon, &plan.table, seed).map_err(|e| {
            Error::Repetition {
                policy: plan.policies[p].name().to_owned(),
                rep: r,
                seed,
                source: Box::new(e),
            }
        })
    };
    let outcomes: Vec<Result<RunTrace>> = match execution {
        Execution::Serial => tasks.iter().map(run).collect(),
        Execution::Parallel => tasks.par_iter().map(run).collect(),
    };

    let mut outcomes = outcomes.into_iter();
    let mut policies = Vec::with_capacity(plan.policies.len());
    for spec in &plan.policies {
        let traces = outcomes.by_ref().take(plan.repetitions).collect::<Result<Vec<_>>>()?;
        policies.push(aggregate(spec.name(), traces, &plan.table));
    }
    Ok(ExperimentResult { policies })
}

fn aggregate(name: &str, traces: Vec<RunTrace>, table: &NuTable) -> PolicyResult {
    let horizon = traces.first().map_or(0, RunTrace::horizon);
    let curve = (0..horizon)
        .map(|t| MeanSe::of(traces.iter().map(|tr| tr.rounds[t].cum_regret)))
        .collect();
    PolicyResult {
        name: name.to_owned(),
        curve,
        censoring: MeanSe::of(traces.iter().map(RunTrace::censoring_proportion)),
        final_regret: MeanSe::of(traces.iter().map(RunTrace::cumulative_regret)),
        total_reward: MeanSe::of(traces.iter().map(|tr| tr.total_reward)),
        residuals: traces.iter().map(|tr| decomposition_check(tr, table)).collect(),
        traces,
    }
}
