//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "instance": {
//!     "tau_max": 1.0, "m": 10,
//!     "discount": { "kind": "linear" },
//!     "arms": [{ "model": "gaussian", "mean": [0.6, 0.45], "x": 0.2, "sigma": 0.1 }]
//!   },
//!   "policies": [{ "kind": "rcucb", "alpha": 2.0 }, { "kind": "ts" }],
//!   "horizon": 50000, "repetitions": 20, "base_seed": 1,
//!   "oracle": { "method": "quadrature", "nodes": 200 },
//!   "output_dir": "out/m10"
//! }
//! ```
//!
//! Relative paths inside the instance (trace files, a precomputed value
//! table) are resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::discount::{DiscountKind, DiscountSpec, Objective};
use crate::envs::{read_trace_csv, AnalyticArmSpec, ArmModel, GaussianArmSpec, ReplayMode, TraceArmSpec};
use crate::grid::ResourceGrid;
use crate::oracle::{nu_table, NuTable, OracleMethod};
use crate::policies::PolicySpec;
use crate::problem::InstanceSpec;
use crate::sim::ExperimentPlan;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ArmConfig {
    Gaussian {
        mean: [f64; 2],
        x: f64,
        sigma: f64,
    },
    Degenerate {
        reward: f64,
        cost: f64,
    },
    IndependentUniformCost {
        reward_mean: f64,
    },
    /// Inline `[reward, cost]` rows.
    Trace {
        rows: Vec<[f64; 2]>,
        #[serde(default)]
        mode: ReplayMode,
    },
    /// Rows of arm `arm` (1-based) in a CSV file with header `arm,reward,cost`.
    TraceFile {
        path: PathBuf,
        arm: usize,
        #[serde(default)]
        mode: ReplayMode,
    },
}

impl ArmConfig {
    fn resolve(&self, base_dir: &Path) -> Result<ArmModel> {
        Ok(match self {
            ArmConfig::Gaussian { mean, x, sigma } => ArmModel::Gaussian(GaussianArmSpec::new(*mean, *x, *sigma)?),
            ArmConfig::Degenerate { reward, cost } => ArmModel::Analytic(AnalyticArmSpec::Degenerate {
                reward: *reward,
                cost: *cost,
            }),
            ArmConfig::IndependentUniformCost { reward_mean } => {
                ArmModel::Analytic(AnalyticArmSpec::IndependentUniformCost {
                    reward_mean: *reward_mean,
                })
            }
            ArmConfig::Trace { rows, mode } => {
                ArmModel::Trace(TraceArmSpec::new(rows.iter().map(|r| (r[0], r[1])).collect(), *mode)?)
            }
            ArmConfig::TraceFile { path, arm, mode } => {
                let path = base_dir.join(path);
                let mut arms = read_trace_csv(&path)?;
                let rows = arms.remove(arm).ok_or_else(|| Error::Load {
                    path: path.clone(),
                    message: format!("no rows for arm {arm}"),
                })?;
                ArmModel::Trace(TraceArmSpec::new(rows, *mode)?)
            }
        })
    }
}

fn linear() -> DiscountKind {
    DiscountKind::Linear
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub tau_max: f64,
    pub m: usize,
    #[serde(default = "linear")]
    pub discount: DiscountKind,
    #[serde(default)]
    pub objective: Objective,
    pub arms: Vec<ArmConfig>,
}

impl InstanceConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<InstanceSpec> {
        let field = |name: &'static str| move |e: Error| Error::config(format!("instance.{name}"), e.to_string());
        let grid = ResourceGrid::equidistant(self.m, self.tau_max).map_err(field("m"))?;
        let discount = DiscountSpec::new(self.discount, self.tau_max).map_err(field("discount"))?;
        if self.arms.is_empty() {
            return Err(Error::config("instance.arms", "at least one arm is required"));
        }
        let arms = self
            .arms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let arm = a.resolve(base_dir).map_err(|e| match e {
                    e @ (Error::Load { .. } | Error::Parse { .. } | Error::Io(_)) => e,
                    e => Error::config(format!("instance.arms[{i}]"), e.to_string()),
                })?;
                arm.validate()
                    .map_err(|e| Error::config(format!("instance.arms[{i}]"), e.to_string()))?;
                Ok(arm)
            })
            .collect::<Result<Vec<_>>>()?;
        InstanceSpec::new(arms, grid, discount, self.objective).map_err(field("objective"))
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceConfig,
    pub policies: Vec<PolicySpec>,
    pub horizon: u64,
    pub repetitions: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub oracle: OracleMethod,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "yes")]
    pub write_traces: bool,
    /// Precomputed value table to use instead of running the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_table: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Load {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// Checks everything that does not need the instance's files; returns
    /// non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.repetitions == 0 {
            return Err(Error::config("repetitions", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "at least one policy is required"));
        }
        if self.instance.arms.is_empty() {
            return Err(Error::config("instance.arms", "at least one arm is required"));
        }
        if self.instance.m == 0 {
            return Err(Error::config("instance.m", "grid size must be at least 1"));
        }
        self.oracle
            .validate()
            .map_err(|e| Error::config("oracle", e.to_string()))?;
        let mut warnings = Vec::new();
        for (k, p) in self.policies.iter().enumerate() {
            warnings.extend(
                p.kind
                    .validate()
                    .map_err(|e| Error::config(format!("policies[{k}]"), e.to_string()))?,
            );
            let init = p.kind.init_len(self.instance.arms.len(), self.instance.m);
            if self.horizon < init {
                return Err(Error::config(
                    "horizon",
                    format!(
                        "horizon shorter than initialization ({} < {init} rounds for {})",
                        self.horizon,
                        p.name()
                    ),
                ));
            }
        }
        Ok(warnings)
    }

    /// Value table for `instance`: loaded from `nu_table` if set, otherwise
    /// computed with the configured oracle.
    pub fn table(&self, instance: &InstanceSpec, base_dir: &Path) -> Result<NuTable> {
        match &self.nu_table {
            Some(path) => {
                let path = base_dir.join(path);
                let table = NuTable::load(&path).map_err(|e| Error::Load {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                table
                    .check_matches(instance)
                    .map_err(|e| Error::config("nu_table", e.to_string()))?;
                Ok(table)
            }
            None => nu_table(instance, &self.oracle),
        }
    }

    /// Validates and resolves the config into a runnable plan.
    pub fn plan(&self, base_dir: &Path) -> Result<ExperimentPlan> {
        self.validate()?;
        let instance = self.instance.resolve(base_dir)?;
        let table = self.table(&instance, base_dir)?;
        Ok(ExperimentPlan {
            instance,
            policies: self.policies.clone(),
            horizon: self.horizon,
            repetitions: self.repetitions,
            base_seed: self.base_seed,
            table,
        })
    }
}
