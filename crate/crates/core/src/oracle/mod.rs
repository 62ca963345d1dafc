//! Ground truth for an instance: mixed moments `μ = E[R · 1{C ≤ τ'}]`, pair
//! values, the optimal pair, gaps, and the theoretical bounds.

mod bounds;
mod quadrature;

pub use bounds::{concentration_bound, regret_bound_from_gaps, regret_upper_bound};
pub use quadrature::gauss_legendre;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::envs::{ArmModel, GaussianArmSpec};
use crate::policies::argmax_pairs;
use crate::problem::{ActionPair, InstanceSpec};
use crate::seed::{mix, stream_rng};
use crate::{Error, Result};

/// Minimum Monte Carlo sample count accepted by the oracle.
pub const MIN_MC_SAMPLES: u64 = 10_000;
/// Minimum quadrature nodes per axis accepted by the oracle.
pub const MIN_QUADRATURE_NODES: usize = 32;
/// Samples per Monte Carlo work unit; each unit has its own derived RNG.
const MC_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum OracleMethod {
    MonteCarlo {
        samples: u64,
        #[serde(default)]
        seed: u64,
    },
    Quadrature {
        nodes: usize,
    },
}

impl Default for OracleMethod {
    fn default() -> Self {
        OracleMethod::Quadrature { nodes: 200 }
    }
}

impl OracleMethod {
    pub fn name(&self) -> &'static str {
        match self {
            OracleMethod::MonteCarlo { .. } => "monte_carlo",
            OracleMethod::Quadrature { .. } => "quadrature",
        }
    }

    pub fn budget(&self) -> u64 {
        match *self {
            OracleMethod::MonteCarlo { samples, .. } => samples,
            OracleMethod::Quadrature { nodes } => nodes as u64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OracleMethod::MonteCarlo { samples, .. } if samples < MIN_MC_SAMPLES => Err(Error::domain(format!(
                "Monte Carlo oracle needs >= {MIN_MC_SAMPLES} samples, got {samples}"
            ))),
            OracleMethod::Quadrature { nodes } if nodes < MIN_QUADRATURE_NODES => Err(Error::domain(format!(
                "quadrature oracle needs >= {MIN_QUADRATURE_NODES} nodes, got {nodes}"
            ))),
            _ => Ok(()),
        }
    }
}

/// A mixed-moment value and its standard error (0 for exact methods).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mu: f64,
    pub se: f64,
}

/// `μ` for one arm at one limit.
pub fn true_mixed_moment(arm: &ArmModel, tau_prime: f64, method: &OracleMethod) -> Result<MomentEstimate> {
    Ok(mixed_moment_profile(arm, &[tau_prime], method, 0)?[0])
}

/// `μ` for one arm at every limit in `taus`.
///
/// Monte Carlo shares one sample set across all limits; `stream` separates
/// the sample sets of different arms under the same seed. Analytic and trace
/// arms are always evaluated exactly.
pub fn mixed_moment_profile(
    arm: &ArmModel,
    taus: &[f64],
    method: &OracleMethod,
    stream: u64,
) -> Result<Vec<MomentEstimate>> {
    method.validate()?;
    match arm {
        ArmModel::Analytic(a) => Ok(taus
            .iter()
            .map(|&t| MomentEstimate {
                mu: a.mixed_moment(t),
                se: 0.0,
            })
            .collect()),
        ArmModel::Trace(tr) => {
            let len = tr.rows().len() as f64;
            Ok(taus
                .iter()
                .map(|&t| {
                    let total: f64 = tr.rows().iter().filter(|(_, c)| *c <= t).map(|(r, _)| r).sum();
                    MomentEstimate { mu: total / len, se: 0.0 }
                })
                .collect())
        }
        ArmModel::Gaussian(g) => match *method {
            OracleMethod::MonteCarlo { samples, seed } => monte_carlo(arm, taus, samples, mix(seed, stream)),
            OracleMethod::Quadrature { nodes } => quadrature(g, taus, nodes),
        },
    }
}

fn monte_carlo(arm: &ArmModel, taus: &[f64], samples: u64, seed: u64) -> Result<Vec<MomentEstimate>> {
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(mix(seed, k), 0);
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut acc = vec![(0.0, 0.0); taus.len()];
            for _ in 0..count {
                let (r, c) = arm.sample(1, &mut rng)?;
                for (slot, &t) in acc.iter_mut().zip(taus) {
                    if c <= t {
                        slot.0 += r;
                        slot.1 += r * r;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let n = samples as f64;
    Ok((0..taus.len())
        .map(|i| {
            let (sum, sumsq) = partial.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p[i].0, acc.1 + p[i].1));
            let mu = sum / n;
            let var = ((sumsq - n * mu * mu) / (n - 1.0)).max(0.0);
            MomentEstimate {
                mu,
                se: (var / n).sqrt(),
            }
        })
        .collect())
}

/// Tensor Gauss-Legendre over `[0, 1] × [0, τ']`, divided by the mass on `[0, 1]²`.
fn quadrature(g: &GaussianArmSpec, taus: &[f64], nodes: usize) -> Result<Vec<MomentEstimate>> {
    let (x, w) = gauss_legendre(nodes);
    let (r_nodes, r_weights) = quadrature::mapped(&x, &w, 0.0, 1.0);

    let integrate = |upper: f64, with_reward: bool| -> f64 {
        let (c_nodes, c_weights) = quadrature::mapped(&x, &w, 0.0, upper);
        let mut total = 0.0;
        for (&r, &wr) in r_nodes.iter().zip(&r_weights) {
            let factor = if with_reward { wr * r } else { wr };
            let inner: f64 = c_nodes
                .iter()
                .zip(&c_weights)
                .map(|(&c, &wc)| wc * g.density(r, c))
                .sum();
            total += factor * inner;
        }
        total
    };

    let normalizer = integrate(1.0, false);
    if !(normalizer >= 1e-12) {
        return Err(Error::DegenerateDensity { normalizer });
    }
    Ok(taus
        .iter()
        .map(|&t| {
            let upper = t.clamp(0.0, 1.0);
            let mu = if upper == 0.0 { 0.0 } else { integrate(upper, true) / normalizer };
            MomentEstimate { mu, se: 0.0 }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuEntry {
    pub arm: usize,
    pub tau: f64,
    pub mu: f64,
    pub se: f64,
    pub nu: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub arm: usize,
    pub tau: f64,
    pub nu_star: f64,
}

/// Ground-truth table over all pairs, arm-major with ascending limits.
/// Arms are 1-based in the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuTable {
    pub method: String,
    pub samples_or_nodes: u64,
    pub pairs: Vec<NuEntry>,
    pub optimal: Optimum,
    /// Number of pairs attaining `nu_star` (1 when the optimum is unique).
    #[serde(default = "one")]
    pub tied_optima: usize,
    #[serde(skip)]
    grid_size: usize,
}

fn one() -> usize {
    1
}

impl NuTable {
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn n_arms(&self) -> usize {
        self.pairs.len() / self.grid_size.max(1)
    }

    fn entry(&self, pair: ActionPair) -> &NuEntry {
        &self.pairs[pair.flat(self.grid_size)]
    }

    pub fn gap(&self, pair: ActionPair) -> f64 {
        self.entry(pair).gap
    }

    pub fn nu(&self, pair: ActionPair) -> f64 {
        self.entry(pair).nu
    }

    pub fn mu(&self, pair: ActionPair) -> f64 {
        self.entry(pair).mu
    }

    pub fn optimal_pair(&self) -> ActionPair {
        let flat = self
            .pairs
            .iter()
            .position(|p| p.arm == self.optimal.arm && p.tau == self.optimal.tau)
            .expect("optimal pair is one of the table's pairs");
        ActionPair::new(flat / self.grid_size, flat % self.grid_size)
    }

    pub fn nu_star(&self) -> f64 {
        self.optimal.nu_star
    }

    /// Smallest strictly positive gap, if any pair is suboptimal.
    pub fn min_positive_gap(&self) -> Option<f64> {
        self.pairs
            .iter()
            .map(|p| p.gap)
            .filter(|&g| g > 0.0)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Checks that the table was built for `instance` (shape and limits).
    pub fn check_matches(&self, instance: &InstanceSpec) -> Result<()> {
        let m = instance.grid_size();
        if self.pairs.len() != instance.n_pairs() || self.grid_size != m {
            return Err(Error::domain(format!(
                "value table has {} pairs, instance has {}",
                self.pairs.len(),
                instance.n_pairs()
            )));
        }
        for (k, p) in self.pairs.iter().enumerate() {
            let tau = instance.grid.point(k % m);
            if p.arm != k / m + 1 || (p.tau - tau).abs() > 1e-12 * instance.grid.tau_max() {
                return Err(Error::domain(format!("value table entry {k} does not match the instance grid")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut table: NuTable = serde_json::from_str(text)?;
        let m = table.pairs.iter().filter(|p| p.arm == 1).count();
        if m == 0 || table.pairs.len() % m != 0 {
            return Err(Error::domain("value table is not a full arm-by-grid table"));
        }
        table.grid_size = m;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Evaluates every pair of `instance` and fills in the optimum and gaps.
pub fn nu_table(instance: &InstanceSpec, method: &OracleMethod) -> Result<NuTable> {
    method.validate()?;
    let profile = instance.profile()?;
    let (n, m) = (instance.n_arms(), instance.grid_size());
    let taus = instance.grid.points();

    let mut pairs = Vec::with_capacity(n * m);
    for (i, arm) in instance.arms.iter().enumerate() {
        let moments = mixed_moment_profile(arm, taus, method, i as u64)?;
        for (j, est) in moments.into_iter().enumerate() {
            pairs.push(NuEntry {
                arm: i + 1,
                tau: taus[j],
                mu: est.mu,
                se: est.se,
                nu: profile.value(j, est.mu),
                gap: 0.0,
            });
        }
    }

    let best = argmax_pairs(n, m, |arm, j| pairs[arm * m + j].nu);
    let nu_star = pairs[best.flat(m)].nu;
    for p in &mut pairs {
        p.gap = nu_star - p.nu;
    }
    let tied_optima = pairs.iter().filter(|p| p.nu == nu_star).count();
    Ok(NuTable {
        method: method.name().to_owned(),
        samples_or_nodes: method.budget(),
        optimal: Optimum {
            arm: best.arm + 1,
            tau: taus[best.tau_index],
            nu_star,
        },
        pairs,
        tied_optima,
        grid_size: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discount::{DiscountSpec, Objective};
    use crate::grid::ResourceGrid;
    use approx::assert_abs_diff_eq;

    const QUAD: OracleMethod = OracleMethod::Quadrature { nodes: 200 };

    fn linear_instance(arms: Vec<ArmModel>, points: Vec<f64>) -> InstanceSpec {
        InstanceSpec::new(
            arms,
            ResourceGrid::from_points(points, 1.0).unwrap(),
            DiscountSpec::linear(1.0).unwrap(),
            Objective::MultiplicativeDiscount,
        )
        .unwrap()
    }

    #[test]
    fn analytic_closed_forms() {
        for method in [QUAD, OracleMethod::MonteCarlo { samples: 10_000, seed: 1 }] {
            assert_eq!(true_mixed_moment(&ArmModel::degenerate(0.8, 0.3), 0.5, &method).unwrap().mu, 0.8);
            assert_eq!(true_mixed_moment(&ArmModel::degenerate(0.8, 0.6), 0.5, &method).unwrap().mu, 0.0);
            let m = true_mixed_moment(&ArmModel::uniform_cost(0.6), 0.25, &method).unwrap();
            assert_eq!(m, MomentEstimate { mu: 0.6 * 0.25, se: 0.0 });
        }
    }

    #[test]
    fn budget_preconditions() {
        let arm = ArmModel::degenerate(0.8, 0.3);
        assert!(true_mixed_moment(&arm, 0.5, &OracleMethod::Quadrature { nodes: 8 }).is_err());
        assert!(true_mixed_moment(&arm, 0.5, &OracleMethod::MonteCarlo { samples: 100, seed: 0 }).is_err());
    }

    #[test]
    fn first_synthetic_arm_matches_frozen_reference() {
        // Reference values from an independent numpy/scipy computation
        // (adaptive 2-D quadrature; 1e7-sample rejection Monte Carlo).
        const QUAD_REF: f64 = 0.2982457840128512;
        const MC_REF: f64 = 0.29811529279315485;
        const MC_REF_SE: f64 = 9.957311995267907e-05;
        let arm = ArmModel::gaussian([0.6, 0.45], 0.2, 0.1).unwrap();
        let q = true_mixed_moment(&arm, 0.5, &QUAD).unwrap();
        assert_abs_diff_eq!(q.mu, QUAD_REF, epsilon = 1e-10);
        assert!((q.mu - MC_REF).abs() <= 3.0 * MC_REF_SE);
    }

    #[test]
    fn degenerate_density_is_rejected() {
        let arm = ArmModel::gaussian([40.0, 40.0], 0.0, 0.01).unwrap();
        assert!(matches!(
            true_mixed_moment(&arm, 0.5, &QUAD),
            Err(Error::DegenerateDensity { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let arm = ArmModel::gaussian([0.5, 0.5], 0.4, 0.1).unwrap();
        let method = OracleMethod::MonteCarlo { samples: 200_000, seed: 3 };
        let a = mixed_moment_profile(&arm, &[0.3, 0.7], &method, 0).unwrap();
        let b = mixed_moment_profile(&arm, &[0.3, 0.7], &method, 0).unwrap();
        assert_eq!(a, b);
        let q = mixed_moment_profile(&arm, &[0.3, 0.7], &QUAD, 0).unwrap();
        for (mc, q) in a.iter().zip(&q) {
            assert!(mc.se > 0.0);
            assert!((mc.mu - q.mu).abs() <= 4.0 * mc.se);
        }
    }

    #[test]
    fn single_degenerate_arm_table() {
        let inst = linear_instance(vec![ArmModel::degenerate(1.0, 0.0)], vec![0.5, 1.0]);
        let t = nu_table(&inst, &QUAD).unwrap();
        assert_eq!(t.pairs[0].nu, 0.5);
        assert_eq!(t.pairs[1].nu, 0.0);
        assert_eq!(t.optimal, Optimum { arm: 1, tau: 0.5, nu_star: 0.5 });
        assert_eq!(t.optimal_pair(), ActionPair::new(0, 0));
    }

    #[test]
    fn two_degenerate_arms_table() {
        let inst = linear_instance(
            vec![ArmModel::degenerate(0.9, 0.2), ArmModel::degenerate(1.0, 0.9)],
            vec![0.25, 0.5, 0.75, 1.0],
        );
        let t = nu_table(&inst, &QUAD).unwrap();
        assert_eq!(t.optimal.arm, 1);
        assert_eq!(t.optimal.tau, 0.25);
        assert_abs_diff_eq!(t.optimal.nu_star, 0.675, epsilon = 1e-15);
        let gaps: Vec<f64> = t.pairs.iter().map(|p| p.gap).collect();
        let expected = [0.0, 0.225, 0.45, 0.675, 0.675, 0.675, 0.675, 0.675];
        for (g, e) in gaps.iter().zip(expected) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
        assert_eq!(t.gap(t.optimal_pair()), 0.0);
        assert_abs_diff_eq!(t.min_positive_gap().unwrap(), 0.225, epsilon = 1e-12);
        assert_eq!(t.tied_optima, 1);
    }

    #[test]
    fn ties_are_counted_and_broken_deterministically() {
        let inst = linear_instance(vec![ArmModel::degenerate(0.5, 0.1); 2], vec![0.5, 1.0]);
        let t = nu_table(&inst, &QUAD).unwrap();
        assert_eq!(t.tied_optima, 2);
        assert_eq!(t.optimal_pair(), ActionPair::new(0, 0));
    }

    #[test]
    fn json_round_trip_and_schema() {
        let inst = linear_instance(
            vec![ArmModel::degenerate(0.9, 0.2), ArmModel::uniform_cost(0.5)],
            vec![0.25, 0.5, 0.75, 1.0],
        );
        let t = nu_table(&inst, &QUAD).unwrap();
        let text = t.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["method", "samples_or_nodes", "pairs", "optimal"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["arm", "tau", "mu", "se", "nu", "gap"] {
            assert!(v["pairs"][0].get(key).is_some(), "missing pairs.{key}");
        }
        for key in ["arm", "tau", "nu_star"] {
            assert!(v["optimal"].get(key).is_some(), "missing optimal.{key}");
        }
        let back = NuTable::from_json(&text).unwrap();
        assert_eq!(back, t);
        back.check_matches(&inst).unwrap();
        let other = linear_instance(vec![ArmModel::degenerate(0.9, 0.2)], vec![0.5, 1.0]);
        assert!(back.check_matches(&other).is_err());
    }

    #[test]
    fn additive_objective_values() {
        use crate::discount::CostSpec;
        let inst = InstanceSpec::new(
            vec![ArmModel::degenerate(0.5, 0.1)],
            ResourceGrid::from_points(vec![0.5, 1.0], 1.0).unwrap(),
            DiscountSpec::linear(1.0).unwrap(),
            Objective::AdditiveCost {
                cost: CostSpec { scale: 0.5, exponent: 1.0 },
            },
        )
        .unwrap();
        let t = nu_table(&inst, &QUAD).unwrap();
        assert_abs_diff_eq!(t.pairs[0].nu, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(t.pairs[1].nu, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mu_is_monotone_in_the_limit() {
        let arm = ArmModel::gaussian([0.5, 0.5], 0.6, 0.1).unwrap();
        let taus: Vec<f64> = (1..=20).map(|j| j as f64 / 20.0).collect();
        let mus = mixed_moment_profile(&arm, &taus, &QUAD, 0).unwrap();
        assert!(mus.windows(2).all(|w| w[0].mu <= w[1].mu));
    }
}
