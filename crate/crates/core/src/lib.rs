//! Multi-armed bandits where every pull also consumes a random amount of a
//! resource, and the learner picks both an arm and a resource limit from a
//! finite grid. Pulls that exceed their limit are censored: no reward, only
//! the exceedance indicator is observed.
//!
//! The crate provides:
//! - [`discount`], [`grid`], [`problem`]: domain types (discount and cost
//!   functions, the resource grid, action pairs, feedback, instances).
//! - [`envs`]: arm models (truncated bivariate Gaussian, analytic arms,
//!   trace replay) and per-round sampling.
//! - [`estimators`]: the censored mixed-moment estimator, the naive
//!   per-pair estimator and Beta posteriors.
//! - [`policies`]: RCUCB, KL-RCUCB, modified UCB / Thompson sampling and
//!   reference baselines.
//! - [`oracle`]: ground-truth mixed moments, the value table, gaps and the
//!   regret / concentration bounds.
//! - [`sim`]: episode runner, experiment aggregation, decomposition check
//!   and tail audits.
//! - [`config`]: the JSON experiment configuration.

pub mod config;
pub mod discount;
pub mod envs;
mod error;
pub mod estimators;
pub mod grid;
pub mod oracle;
pub mod policies;
pub mod problem;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};
