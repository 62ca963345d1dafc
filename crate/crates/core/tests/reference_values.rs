//! Values frozen from an independent numpy/scipy computation
//! (`scripts/oracle_values.py`).

use std::path::Path;

use approx::assert_abs_diff_eq;
use rcbandit::config::ExperimentConfig;
use rcbandit::envs::{make_cov, ArmModel};
use rcbandit::oracle::{concentration_bound, nu_table, regret_bound_from_gaps, OracleMethod};
use rcbandit::policies::{kl_bernoulli, klucb_index, rcucb_index, ucb_index};
use rcbandit::problem::ActionPair;
use rcbandit::seed::stream_rng;

const QUAD: OracleMethod = OracleMethod::Quadrature { nodes: 200 };

fn synthetic_config(m: usize) -> ExperimentConfig {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    ExperimentConfig::load(&dir.join(format!("paper_synthetic_m{m}.json"))).unwrap()
}

#[test]
fn covariance_off_diagonal() {
    let cov = make_cov(0.2, 0.1).unwrap();
    assert_abs_diff_eq!(cov[0][1], 0.03919183588453085, epsilon = 1e-15);
    assert_eq!(cov[0][0], 0.1);
}

#[test]
fn index_values() {
    let ln10 = 10f64.ln();
    assert_abs_diff_eq!(rcucb_index(0.75, 0.0, 0.9, 4, ln10, 2.0), 1.81307034703886, epsilon = 1e-12);
    assert_abs_diff_eq!(rcucb_index(0.5, 0.0, 0.9, 4, ln10, 2.0), 1.2087135646925733, epsilon = 1e-12);
    assert_abs_diff_eq!(ucb_index(0.75, 0.0, 0.9, 4, ln10, 2.0), 1.24403517351943, epsilon = 1e-12);
    assert_abs_diff_eq!(kl_bernoulli(0.5, 0.75), 0.14384103622589042, epsilon = 1e-15);
    assert_abs_diff_eq!(klucb_index(0.5, 10, 100, 0.0), 0.8879087616458614, epsilon = 1e-8);
}

#[test]
fn bound_values() {
    let gaps = [0.0, 0.1];
    assert_abs_diff_eq!(regret_bound_from_gaps(gaps, 1000, 2.0).unwrap(), 561.5991147831261, epsilon = 1e-9);
    assert_abs_diff_eq!(concentration_bound(1000, 2.0).unwrap(), 0.0018036620761802725, epsilon = 1e-15);
}

#[test]
fn synthetic_instance_optimum() {
    let dir = Path::new(".");
    let cfg = synthetic_config(10);
    let inst = cfg.instance.resolve(dir).unwrap();
    let table = nu_table(&inst, &QUAD).unwrap();
    assert_eq!(table.pairs.len(), 100);
    assert_eq!(table.optimal_pair(), ActionPair::new(0, 5));
    assert_abs_diff_eq!(table.nu_star(), 0.15135303403934733, epsilon = 1e-10);

    for m in [50, 100] {
        let inst = synthetic_config(m).instance.resolve(dir).unwrap();
        let table = nu_table(&inst, &QUAD).unwrap();
        assert_eq!(table.optimal.arm, 1);
        assert_abs_diff_eq!(table.optimal.tau, 0.56, epsilon = 1e-12);
        assert_abs_diff_eq!(table.nu_star(), 0.15274327383255004, epsilon = 1e-10);
    }
}

fn sample_correlation(x: f64, n: usize) -> f64 {
    let arm = ArmModel::gaussian([0.5, 0.5], x, 0.1).unwrap();
    let mut rng = stream_rng(12, 0);
    let draws: Vec<(f64, f64)> = (0..n).map(|_| arm.sample(1, &mut rng).unwrap()).collect();
    let nf = n as f64;
    let (mr, mc) = draws
        .iter()
        .fold((0.0, 0.0), |a, (r, c)| (a.0 + r / nf, a.1 + c / nf));
    let (mut srr, mut scc, mut src) = (0.0, 0.0, 0.0);
    for (r, c) in &draws {
        srr += (r - mr) * (r - mr);
        scc += (c - mc) * (c - mc);
        src += (r - mr) * (c - mc);
    }
    src / (srr * scc).sqrt()
}

#[test]
fn truncated_draws_have_reference_correlation() {
    assert_abs_diff_eq!(sample_correlation(0.0, 200_000), 0.0, epsilon = 0.01);
    assert_abs_diff_eq!(sample_correlation(0.6, 200_000), 0.9303588488866538, epsilon = 0.002);
}

#[test]
fn monte_carlo_matches_reference_quadrature() {
    const REF: f64 = 0.2982457840128512;
    let arm = ArmModel::gaussian([0.6, 0.45], 0.2, 0.1).unwrap();
    let mc = rcbandit::oracle::true_mixed_moment(&arm, 0.5, &OracleMethod::MonteCarlo { samples: 1_000_000, seed: 2 })
        .unwrap();
    assert!((mc.mu - REF).abs() <= 4.0 * mc.se, "{mc:?}");
}
