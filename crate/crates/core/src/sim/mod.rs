//! Episodes, experiments, regret accounting and tail audits.

mod audit;
mod episode;
mod experiment;
pub mod output;

pub use audit::{concentration_audit, threshold, AuditReport};
pub use episode::{decomposition_check, run_episode, RoundRecord, RunTrace};
pub use experiment::{run_experiment, Execution, ExperimentPlan, ExperimentResult, MeanSe, PolicyResult};
