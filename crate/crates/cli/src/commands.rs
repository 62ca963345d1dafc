use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rcbandit::config::ExperimentConfig;
use rcbandit::oracle::{nu_table, true_mixed_moment, NuTable};
use rcbandit::sim::output::{file_stem, write_aggregate_csv, write_trace_csv, Summary};
use rcbandit::sim::{concentration_audit, run_experiment, AuditReport, Execution};

use crate::plot::{read_aggregate, render_svg};
use crate::CliError;

/// Overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub dump_state: bool,
    pub execution: Execution,
}

fn load(config_path: &Path) -> Result<(ExperimentConfig, PathBuf), CliError> {
    let cfg = ExperimentConfig::load(config_path)?;
    let base = config_path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, base))
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Runs the experiment of `config_path` and writes traces, the aggregate
/// curves, a summary and the value table into the output directory.
pub fn cmd_run(config_path: &Path, opts: &RunOptions, out: &mut dyn Write) -> Result<PathBuf, CliError> {
    let (mut cfg, base) = load(config_path)?;
    if let Some(r) = opts.reps {
        cfg.repetitions = r;
    }
    if let Some(s) = opts.seed {
        cfg.base_seed = s;
    }
    if let Some(d) = &opts.out_dir {
        cfg.output_dir = d.clone();
    }
    warn_all(&cfg.validate()?);
    let plan = cfg.plan(&base)?;
    let result = run_experiment(&plan, opts.execution)?;

    let dir = &cfg.output_dir;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("nu_table.json"), plan.table.to_json()? + "\n")?;
    write_aggregate_csv(&dir.join("aggregate.csv"), &result)?;
    let summary = Summary::new(&result, &plan.table, plan.horizon, plan.base_seed);
    summary.write(&dir.join("summary.json"))?;
    for p in &result.policies {
        let stem = file_stem(&p.name);
        if cfg.write_traces {
            write_trace_csv(&dir.join(format!("trace_{stem}.csv")), p, &plan.instance)?;
        }
        if opts.dump_state {
            let states: Vec<_> = p.traces.iter().map(|t| &t.final_state).collect();
            fs::write(
                dir.join(format!("state_{stem}.json")),
                serde_json::to_string_pretty(&states).map_err(rcbandit::Error::from)? + "\n",
            )?;
        }
    }

    writeln!(
        out,
        "optimum: arm {}, tau {}, nu* = {}",
        plan.table.optimal.arm, plan.table.optimal.tau, plan.table.optimal.nu_star
    )?;
    for p in &summary.policies {
        writeln!(
            out,
            "{}: final regret {:.3} ± {:.3}, censoring {:.4} ± {:.4}, max residual {:e}",
            p.policy,
            p.final_cum_regret.mean,
            p.final_cum_regret.se,
            p.censoring_proportion.mean,
            p.censoring_proportion.se,
            p.max_decomposition_residual
        )?;
    }
    writeln!(out, "wrote {}", dir.display())?;
    Ok(dir.clone())
}

/// Computes the value table of the configured instance and writes
/// `nu_table.json` into the output directory.
pub fn cmd_oracle(config_path: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> Result<NuTable, CliError> {
    let (cfg, base) = load(config_path)?;
    cfg.oracle
        .validate()
        .map_err(|e| rcbandit::Error::Config {
            field: "oracle".into(),
            message: e.to_string(),
        })?;
    let instance = cfg.instance.resolve(&base)?;
    let table = nu_table(&instance, &cfg.oracle)?;
    let dir = out_dir.map(Path::to_path_buf).unwrap_or(cfg.output_dir);
    fs::create_dir_all(&dir)?;
    let path = dir.join("nu_table.json");
    fs::write(&path, table.to_json()? + "\n")?;
    writeln!(
        out,
        "optimum: arm {}, tau {}, nu* = {}",
        table.optimal.arm, table.optimal.tau, table.optimal.nu_star
    )?;
    match table.min_positive_gap() {
        Some(g) => writeln!(out, "min positive gap: {g}")?,
        None => writeln!(out, "min positive gap: none (all pairs optimal)")?,
    }
    if table.tied_optima > 1 {
        writeln!(out, "note: {} pairs attain nu*", table.tied_optima)?;
    }
    writeln!(out, "pairs: {}", table.pairs.len())?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct AuditOptions {
    pub alpha: f64,
    pub t: u64,
    pub runs: u64,
    pub seed: u64,
    /// 1-based arm of the config's instance.
    pub arm: usize,
    /// Limit to audit; defaults to the largest grid point.
    pub tau: Option<f64>,
}

/// Tail audit of the censored estimator for one arm of the configured
/// instance. Fails (exit 1) when either tail exceeds the allowed rate.
pub fn cmd_audit(config_path: &Path, opts: &AuditOptions, out: &mut dyn Write) -> Result<AuditReport, CliError> {
    if !(opts.alpha > 1.0) {
        return Err(CliError::Usage(format!("--alpha must be > 1, got {}", opts.alpha)));
    }
    if opts.t < 2 {
        return Err(CliError::Usage(format!("--t must be >= 2, got {}", opts.t)));
    }
    if opts.runs == 0 {
        return Err(CliError::Usage("--runs must be >= 1".into()));
    }
    let (cfg, base) = load(config_path)?;
    let instance = cfg.instance.resolve(&base)?;
    if opts.arm == 0 || opts.arm > instance.n_arms() {
        return Err(CliError::Usage(format!(
            "--arm must be in 1..={}, got {}",
            instance.n_arms(),
            opts.arm
        )));
    }
    let tau = match opts.tau {
        Some(v) => instance.grid.point(instance.grid.index_of(v)?),
        None => instance.grid.tau_max(),
    };
    let arm = &instance.arms[opts.arm - 1];
    let mu = true_mixed_moment(arm, tau, &cfg.oracle)?.mu;
    let report = concentration_audit(arm, tau, mu, opts.alpha, opts.t, opts.runs, opts.seed)?;
    writeln!(out, "arm {} at tau {tau}: mu = {mu}", opts.arm)?;
    writeln!(
        out,
        "bound {:.6e}, allowed rate {:.6e}",
        report.bound,
        report.threshold()
    )?;
    writeln!(
        out,
        "upper tail: {}/{} = {:.6e}",
        report.upper_violations, report.runs, report.upper_rate
    )?;
    writeln!(
        out,
        "lower tail: {}/{} = {:.6e}",
        report.lower_violations, report.runs, report.lower_rate
    )?;
    let pass = report.passes();
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" })?;
    if pass {
        Ok(report)
    } else {
        Err(CliError::AuditFailed)
    }
}

pub fn cmd_plot(aggregate_csv: &Path, out_svg: &Path) -> Result<(), CliError> {
    let series = read_aggregate(aggregate_csv)?;
    if let Some(parent) = out_svg.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(out_svg, render_svg(&series))?;
    Ok(())
}
