//! Command-line surface tests: exit codes, artifact schemas, and the
//! stdout/file equivalence contract.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copolypin"))
        .args(args)
        .env_remove("COPOLYPIN_THREADS")
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn help_lists_subcommands() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["annealed", "quenched", "bounds", "variational", "scan"] {
        assert!(text.contains(name), "help is missing `{name}`:\n{text}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for argv in [
        vec!["frobnicate"],
        vec!["annealed", "solve", "--no-such-flag"],
        vec!["quenched", "estimate", "--n", "not-a-number"],
    ] {
        let out = run(&argv);
        assert_eq!(out.status.code(), Some(2), "{argv:?}: {}", stderr(&out));
    }
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    let unknown_key = dir.path().join("unknown.json");
    std::fs::write(&unknown_key, r#"{ "volume": 512 }"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["annealed", "solve", "--config", missing.to_str().unwrap()],
        vec!["annealed", "solve", "--config", bad_json.to_str().unwrap()],
        vec!["annealed", "solve", "--config", unknown_key.to_str().unwrap()],
        // Tail exponent at most one is not normalizable.
        vec!["annealed", "solve", "--rho", "power:0.5"],
        // Grammar errors in the inline excursion spec.
        vec!["annealed", "solve", "--rho", "power"],
        vec!["annealed", "solve", "--rho", "table:"],
        vec!["annealed", "solve", "--disorder", "cauchy"],
        // Curve-style commands need a positive copolymer coupling.
        vec!["annealed", "curve", "--beta-hat", "0", "--rho", "power:1.5"],
        // The estimator needs at least two replicas for an error bar.
        vec![
            "quenched", "estimate", "--beta-hat", "1", "--rho", "power:1.5", "--n", "64",
            "--replicas", "1",
        ],
    ];
    for argv in cases {
        let out = run(&argv);
        assert_eq!(out.status.code(), Some(2), "{argv:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{argv:?} should explain itself on stderr");
    }
}

#[test]
fn bad_threads_env_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_copolypin"))
        .args(["annealed", "solve", "--beta-hat", "1", "--rho", "power:1.5"])
        .env("COPOLYPIN_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("COPOLYPIN_THREADS"));
}

#[test]
fn degenerate_certificate_exits_three() {
    // A vanishing coupling leaves no entropy gap to certify.
    let out = run(&[
        "variational", "gap", "--beta-hat", "1e-8", "--h-bar", "0", "--rho", "power:1.5:2048",
        "--tr", "4",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn empty_grid_writes_header_only_csv() {
    let out = run(&[
        "annealed", "curve", "--beta-hat", "1", "--rho", "power:1.5:2048", "--grid-points", "0",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec![
            "# copolypin-csv-v1 table=annealed-curve",
            "h_bar,hc_ann,hc_que_upper,hc_que_lower,monthus,g_ann",
        ]
    );
}

#[test]
fn annealed_curve_schema_and_wetting_sentinel() {
    let out = run(&[
        "annealed", "curve", "--beta-hat", "1", "--beta-bar", "0.5", "--rho", "power:1.5:2048",
        "--grid-start", "-2", "--grid-stop", "1", "--grid-points", "4",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# copolypin-csv-v1 table=annealed-curve");
    assert_eq!(lines[1], "h_bar,hc_ann,hc_que_upper,hc_que_lower,monthus,g_ann");
    assert_eq!(lines.len(), 6);
    // Deep below the wetting threshold every bias localizes.
    let first: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(first[1], "inf");
    // Far above it the critical bias is finite.
    let last: Vec<&str> = lines[5].split(',').collect();
    let hc: f64 = last[1].parse().unwrap();
    assert!(hc.is_finite() && hc > 0.0);
}

#[test]
fn quenched_estimate_schema() {
    let out = run(&[
        "quenched", "estimate", "--beta-hat", "1", "--h-hat", "0.2", "--rho", "power:1.5",
        "--n", "512", "--replicas", "2", "--seed", "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# copolypin-csv-v1 table=quenched-estimate");
    assert_eq!(lines[1], "n,g_hat,stderr,replicas,seed");
    // The volume grid runs from 256 to n by doubling.
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("256,"));
    assert!(lines[3].starts_with("512,"));
    for line in &lines[2..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 5);
        assert!(cells[1].parse::<f64>().unwrap().is_finite());
        assert!(cells[2].parse::<f64>().unwrap() >= 0.0);
        assert_eq!(cells[3], "2");
        assert_eq!(cells[4], "7");
    }
}

#[test]
fn solve_report_shape() {
    let out = run(&[
        "annealed", "solve", "--beta-hat", "1", "--h-hat", "0.3", "--beta-bar", "0.5",
        "--h-bar", "-0.8", "--rho", "power:1.5:2048",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "model",
        "g_ann",
        "g_hat_ann",
        "h_bar_star",
        "label",
        "annealed_tilt",
        "hc_ann_copolymer",
        "hc_ann_pinning",
    ] {
        assert!(report.get(key).is_some(), "missing `{key}` in {report}");
    }
    assert_eq!(report["label"], "L1_ann");
    let g_ann = report["g_ann"].as_f64().unwrap();
    let g_hat = report["g_hat_ann"].as_f64().unwrap();
    assert!(g_ann >= g_hat && g_hat > 0.0);
}

#[test]
fn disorder_flag_covers_both_laws() {
    // The pinning threshold is the log-mgf of the pinning law at the
    // negated coupling, so it separates the two alphabets cleanly.
    let base = [
        "annealed", "solve", "--beta-hat", "1", "--beta-bar", "0.5", "--rho", "power:1.5:2048",
    ];
    let pm = {
        let mut argv = base.to_vec();
        argv.extend(["--disorder", "pm1"]);
        let out = run(&argv);
        assert!(out.status.success());
        serde_json::from_str::<serde_json::Value>(&stdout(&out)).unwrap()
    };
    let mixed = {
        let mut argv = base.to_vec();
        argv.extend(["--disorder", "pm1", "--disorder-bar", "gaussian"]);
        let out = run(&argv);
        assert!(out.status.success());
        serde_json::from_str::<serde_json::Value>(&stdout(&out)).unwrap()
    };
    let cosh_half = 0.5f64.cosh().ln();
    assert!((pm["hc_ann_pinning"].as_f64().unwrap() - cosh_half).abs() < 1e-12);
    assert!((mixed["hc_ann_pinning"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    // The solvent side is untouched by the override.
    assert_eq!(pm["hc_ann_copolymer"], mixed["hc_ann_copolymer"]);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let argv = [
        "annealed", "curve", "--beta-hat", "1", "--rho", "power:1.5:2048", "--grid-start", "0",
        "--grid-stop", "1", "--grid-points", "3",
    ];
    let on_stdout = {
        let out = run(&argv);
        assert!(out.status.success());
        stdout(&out)
    };
    let mut with_output = argv.to_vec();
    with_output.extend(["--output", path.to_str().unwrap()]);
    let out = run(&with_output);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "file mode should not also print the artifact");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), on_stdout);
}

#[test]
fn no_bracket_rows_are_nan_sentinels() {
    // A strong return penalty at a small volume leaves every probed bias
    // delocalized, which the curve reports as data rather than a failure.
    let out = run(&[
        "quenched", "curve", "--beta-hat", "1", "--rho", "power:1.5", "--n", "64",
        "--replicas", "2", "--grid-start", "30", "--grid-stop", "30", "--grid-points", "1",
        "--seed", "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[1], "nan");
    assert_eq!(row[2], "nan");
    assert_eq!(row[3], "nan");
}
