use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rcbandit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcbandit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A copy of a bundled config with some top-level fields replaced.
fn derived_config(dir: &Path, base: &str, patch: serde_json::Value) -> PathBuf {
    let text = std::fs::read_to_string(configs().join(base)).unwrap();
    let mut cfg: serde_json::Value = serde_json::from_str(&text).unwrap();
    for (k, v) in patch.as_object().unwrap() {
        cfg[k] = v.clone();
    }
    let path = dir.join(base);
    std::fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn oracle_prints_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let o = rcbandit(&["oracle", s(&configs().join("two_degenerate.json")), "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("optimum: arm 1, tau 0.25, nu* = 0.675"), "{out}");
    assert!(out.contains("min positive gap: 0.225"), "{out}");
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nu_table.json")).unwrap()).unwrap();
    assert_eq!(table["pairs"].as_array().unwrap().len(), 8);
}

#[test]
fn oracle_methods_agree_on_the_synthetic_instance() {
    let dir = tempfile::tempdir().unwrap();
    let quad = rcbandit(&["oracle", s(&configs().join("paper_synthetic_m10.json")), "--out-dir", s(dir.path())]);
    assert_eq!(quad.status.code(), Some(0), "{}", stderr(&quad));
    assert!(stdout(&quad).contains("pairs: 100"));
    let q: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nu_table.json")).unwrap()).unwrap();

    let mc_cfg = derived_config(
        dir.path(),
        "paper_synthetic_m10.json",
        serde_json::json!({"oracle": {"method": "monte_carlo", "samples": 200000, "seed": 3}}),
    );
    let mc_dir = dir.path().join("mc");
    let mc = rcbandit(&["oracle", s(&mc_cfg), "--out-dir", s(&mc_dir)]);
    assert_eq!(mc.status.code(), Some(0), "{}", stderr(&mc));
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(mc_dir.join("nu_table.json")).unwrap()).unwrap();
    assert_eq!(m["method"], "monte_carlo");
    for (a, b) in m["pairs"].as_array().unwrap().iter().zip(q["pairs"].as_array().unwrap()) {
        let (mu_mc, se, mu_q) = (a["mu"].as_f64().unwrap(), a["se"].as_f64().unwrap(), b["mu"].as_f64().unwrap());
        assert!((mu_mc - mu_q).abs() <= 4.0 * se, "{a} vs {b}");
    }
}

#[test]
fn run_writes_reproducible_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = derived_config(dir.path(), "two_degenerate.json", serde_json::json!({"horizon": 400}));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = rcbandit(&["run", s(&cfg), "--out-dir", s(out), "--reps", "3", "--seed", "17", "--dump-state"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let mut names: Vec<String> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    for expected in ["aggregate.csv", "summary.json", "nu_table.json", "trace_RCUCB.csv", "state_RCUCB.json"] {
        assert!(names.iter().any(|n| n == expected), "{expected} missing from {names:?}");
    }
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{n} differs");
    }

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["repetitions"], 3);
    assert_eq!(summary["base_seed"], 17);
    let state: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("state_RCUCB.json")).unwrap()).unwrap();
    assert_eq!(state.as_array().unwrap().len(), 3);
    assert_eq!(state[0]["estimator"], "censored");
    assert!(state[0]["pairs"][0].get("n").is_some());
    let ts: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("state_TS.json")).unwrap()).unwrap();
    assert_eq!(ts[0]["estimator"], "beta");
}

#[test]
fn bundled_synthetic_config_gives_one_row_per_round() {
    let dir = tempfile::tempdir().unwrap();
    let o = rcbandit(&[
        "run",
        s(&configs().join("paper_synthetic_m10.json")),
        "--reps",
        "1",
        "--out-dir",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("aggregate.csv")).unwrap();
    for policy in ["RCUCB", "UCB", "TS"] {
        let rows = text.lines().skip(1).filter(|l| l.split(',').nth(1) == Some(policy)).count();
        assert_eq!(rows, 50_000, "{policy}");
    }
}

#[test]
fn short_horizon_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = derived_config(
        dir.path(),
        "paper_synthetic_m10.json",
        serde_json::json!({"horizon": 5, "policies": [{"kind": "rcucb", "alpha": 2.0}]}),
    );
    let o = rcbandit(&["run", s(&cfg), "--out-dir", s(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("horizon shorter than initialization"), "{}", stderr(&o));
}

#[test]
fn malformed_configs_are_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(rcbandit(&["run", s(&bad)]).status.code(), Some(2));
    assert_eq!(rcbandit(&["oracle", s(&dir.path().join("missing.json"))]).status.code(), Some(2));

    let cfg = derived_config(dir.path(), "two_degenerate.json", serde_json::json!({"repetitions": 0}));
    let o = rcbandit(&["run", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("repetitions"), "{}", stderr(&o));
}

#[test]
fn audit_passes_on_a_gaussian_arm() {
    let o = rcbandit(&[
        "audit",
        "--alpha",
        "2",
        "--t",
        "1000",
        "--runs",
        "10000",
        "--seed",
        "1",
        "--tau",
        "0.6",
        s(&configs().join("paper_synthetic_m10.json")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("bound 1.80366"), "{out}");
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn audit_of_a_degenerate_arm_has_no_violations() {
    let o = rcbandit(&[
        "audit",
        "--runs",
        "200",
        "--t",
        "100",
        s(&configs().join("two_degenerate.json")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("upper tail: 0/200"));
    assert!(out.contains("lower tail: 0/200"));
}

#[test]
fn audit_rejects_alpha_one() {
    let o = rcbandit(&["audit", "--alpha", "1.0", s(&configs().join("two_degenerate.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn polylines(svg: &str) -> Vec<&str> {
    svg.lines().filter(|l| l.starts_with("<polyline")).collect()
}

fn points(line: &str) -> Vec<(f64, f64)> {
    let start = line.find("points=\"").unwrap() + 8;
    let end = start + line[start..].find('"').unwrap();
    line[start..end]
        .split(' ')
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

#[test]
fn plot_draws_mean_and_band_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("agg.csv");
    let mut text = String::from("round,policy,mean_cum_regret,stderr\n");
    for p in ["RCUCB", "UCB", "TS"] {
        for t in 1..=5000 {
            text.push_str(&format!("{t},{p},{},{}\n", (t as f64).sqrt(), 0.1 * (t as f64).ln()));
        }
    }
    std::fs::write(&csv, text).unwrap();
    let svg_path = dir.path().join("plots/out.svg");
    let o = rcbandit(&["plot", s(&csv), s(&svg_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 9);
    assert_eq!(lines.iter().filter(|l| l.contains("stroke-dasharray")).count(), 6);
    for solid in lines.iter().filter(|l| !l.contains("stroke-dasharray")) {
        let pts = points(solid);
        assert!(pts.len() <= 2000);
        // Increasing data maps to non-increasing screen y.
        assert!(pts.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(pts.windows(2).all(|w| w[1].0 > w[0].0));
    }
    assert!(svg.contains(">RCUCB<") && svg.contains(">round<"));
}

#[test]
fn plot_handles_a_single_round() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("agg.csv");
    std::fs::write(&csv, "round,policy,mean_cum_regret,stderr\n1,RCUCB,0,0\n").unwrap();
    let svg_path = dir.path().join("one.svg");
    let o = rcbandit(&["plot", s(&csv), s(&svg_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 3);
    for l in lines {
        let pts = points(l);
        assert_eq!(pts.len(), 1);
        assert!(pts[0].0.is_finite() && pts[0].1.is_finite());
    }
}

#[test]
fn plot_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("agg.csv");
    std::fs::write(&csv, "round,policy,mean_cum_regret,stderr\n1,RCUCB,abc,0\n").unwrap();
    assert_eq!(rcbandit(&["plot", s(&csv), s(&dir.path().join("x.svg"))]).status.code(), Some(2));
    std::fs::write(&csv, "a,b\n1,2\n").unwrap();
    assert_eq!(rcbandit(&["plot", s(&csv), s(&dir.path().join("x.svg"))]).status.code(), Some(2));
    assert_eq!(
        rcbandit(&["plot", s(&dir.path().join("none.csv")), s(&dir.path().join("x.svg"))]).status.code(),
        Some(2)
    );
}
