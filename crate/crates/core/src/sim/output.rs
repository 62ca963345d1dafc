//! File formats written by experiments. Reals use Rust's shortest
//! round-trip formatting, so equal results give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::experiment::{ExperimentResult, MeanSe, PolicyResult};
use crate::oracle::{NuTable, Optimum};
use crate::problem::InstanceSpec;
use crate::Result;

pub const TRACE_HEADER: [&str; 8] = [
    "rep",
    "round",
    "arm",
    "tau",
    "censored",
    "reward",
    "inst_regret",
    "cum_regret",
];
pub const AGGREGATE_HEADER: [&str; 4] = ["round", "policy", "mean_cum_regret", "stderr"];

/// All repetitions of one policy; arms are 1-based, `tau` is the grid value.
pub fn write_trace_csv(path: &Path, result: &PolicyResult, instance: &InstanceSpec) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(TRACE_HEADER)?;
    for (rep, trace) in result.traces.iter().enumerate() {
        for (k, r) in trace.rounds.iter().enumerate() {
            w.write_record([
                rep.to_string(),
                (k + 1).to_string(),
                (r.arm + 1).to_string(),
                instance.grid.point(r.tau_index as usize).to_string(),
                u8::from(r.censored).to_string(),
                r.reward.to_string(),
                r.inst_regret.to_string(),
                r.cum_regret.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv(path: &Path, result: &ExperimentResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(AGGREGATE_HEADER)?;
    for p in &result.policies {
        for (k, point) in p.curve.iter().enumerate() {
            w.write_record([
                (k + 1).to_string(),
                p.name.clone(),
                point.mean.to_string(),
                point.se.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RepSummary {
    pub rep: usize,
    pub seed: u64,
    pub censoring_proportion: f64,
    pub cum_regret: f64,
    pub total_reward: f64,
    pub decomposition_residual: f64,
    pub information_total: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicySummary {
    pub policy: String,
    pub censoring_proportion: MeanSe,
    pub final_cum_regret: MeanSe,
    pub total_reward: MeanSe,
    pub max_decomposition_residual: f64,
    pub repetitions: Vec<RepSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub horizon: u64,
    pub repetitions: usize,
    pub base_seed: u64,
    pub optimal: Optimum,
    pub policies: Vec<PolicySummary>,
}

impl Summary {
    pub fn new(result: &ExperimentResult, table: &NuTable, horizon: u64, base_seed: u64) -> Self {
        let policies = result
            .policies
            .iter()
            .map(|p| PolicySummary {
                policy: p.name.clone(),
                censoring_proportion: p.censoring,
                final_cum_regret: p.final_regret,
                total_reward: p.total_reward,
                max_decomposition_residual: p.residuals.iter().copied().fold(0.0, f64::max),
                repetitions: p
                    .traces
                    .iter()
                    .zip(&p.residuals)
                    .enumerate()
                    .map(|(rep, (tr, &res))| RepSummary {
                        rep,
                        seed: tr.seed,
                        censoring_proportion: tr.censoring_proportion(),
                        cum_regret: tr.cumulative_regret(),
                        total_reward: tr.total_reward,
                        decomposition_residual: res,
                        information_total: tr.information_total,
                    })
                    .collect(),
            })
            .collect();
        Self {
            horizon,
            repetitions: result.policies.first().map_or(0, |p| p.traces.len()),
            base_seed,
            optimal: table.optimal.clone(),
            policies,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(())
    }
}

/// File-system friendly form of a policy name.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
