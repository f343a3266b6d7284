use std::process::{Command, Output};

use clap::Parser;
use superdeform_cli::{run, CommandConfig};

fn superdeform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superdeform"))
        .args(args)
        .env_remove("SUPERDEFORM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn poisson_bracket_of_coordinates() {
    let o = superdeform(&["bracket", "--type", "poisson", "x1", "x2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1");
}

#[test]
fn eval_canonicalizes_and_rejects_unknown_variables() {
    let o = superdeform(&["eval", "xi2*xi1"]);
    assert_eq!(stdout(&o), "-xi1*xi2");
    let o = superdeform(&["eval", "xi3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown variable"));
}

#[test]
fn antiodd_jacobi_passes_and_reports_json() {
    let o = superdeform(&["jacobi", "--deformation", "antiodd()", "--n", "2", "--samples", "25", "--seed", "7"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["sample_count"], 25);
    assert_eq!(report["context"]["n_plus"], 2);
    assert!(report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn multi_parameter_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = superdeform(&[
        "theorem", "--case", "multi", "--nplus", "4", "--nminus", "5", "--zeta", "xi1", "--h2", "1", "--samples", "20",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("PASS constraints"), "{text}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);

    let o = superdeform(&["theorem", "--case", "multi", "--nplus", "4", "--nminus", "3", "--zeta", "xi1", "--h2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("-2*th1*xi1"));
    let o = superdeform(&[
        "theorem", "--case", "multi", "--nplus", "4", "--nminus", "3", "--zeta", "xi1", "--h2", "1", "--eta", "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("relation (i)"));
}

#[test]
fn failing_check_exits_one() {
    // the wrong sign in the equivalence family
    let o = superdeform(&[
        "equiv", "--c1", "c3(zeta=h^2*gauss(1), c3=h^2)", "--c2", "c3(c3=h^2)", "--t1", "bar(gauss(1))", "--samples", "20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = superdeform(&[
        "equiv", "--c1", "c3(zeta=h^2*gauss(1), c3=h^2)", "--c2", "c3(c3=h^2)", "--t1", "bar(-gauss(1))", "--samples", "20",
    ]);
    assert!(o.status.success());
}

#[test]
fn hypothesis_violations_are_errors() {
    let o = superdeform(&["theorem", "--case", "c3", "--zeta", "x1*x2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = superdeform(&["jacobi", "--deformation", "antieven(c=h^2)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let base = ["jacobi", "--cochain", "m3", "--samples", "5"];
    let with_env = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_superdeform"))
            .args(base)
            .env("SUPERDEFORM_SEED", seed)
            .output()
            .unwrap();
        String::from_utf8_lossy(&o.stdout).replace(|c: char| c.is_ascii_digit(), "")
    };
    let cfg = CommandConfig::try_parse_from(["superdeform", "--seed", "11", "eval", "1"]).unwrap();
    assert_eq!(cfg.seed().unwrap(), 11);
    // same env seed, same report
    assert_eq!(with_env("3"), with_env("3"));
}

#[test]
fn config_round_trips_through_arguments() {
    let cases: &[&[&str]] = &[
        &["superdeform", "eval", "-x1 + 2"],
        &["superdeform", "--n", "2", "--k", "2", "--lambda", "1,-1", "bracket", "--type", "anti", "xi1", "x1"],
        &["superdeform", "cochain", "m3", "gauss(1)", "-xi1*xi2"],
        &["superdeform", "--samples", "7", "--seed", "3", "--theta", "jacobi", "--deformation", "antiodd()"],
        &["superdeform", "--parity", "odd", "--class", "e", "cocycle", "--check", "cross", "mu"],
        &["superdeform", "--output", "r.json", "equiv", "--c1", "c3()", "--c2", "c3()", "--t1", "zero"],
        &["superdeform", "theorem", "--case", "multi", "--zeta", "xi1", "--h2", "1"],
    ];
    for argv in cases {
        let cfg = CommandConfig::try_parse_from(*argv).unwrap();
        let again = CommandConfig::try_parse_from(cfg.to_args()).unwrap();
        assert_eq!(cfg, again, "{argv:?}");
    }
}

#[test]
fn run_reports_values_and_checks() {
    let cfg = CommandConfig::try_parse_from(["superdeform", "--n", "2", "bracket", "--type", "antiodd", "1", "1"]);
    // antiodd is a deformation, not a cochain
    assert!(run(&cfg.unwrap()).is_err());
    let cfg = CommandConfig::try_parse_from(["superdeform", "--n", "2", "bracket", "--type", "anti", "xi1", "x1"]).unwrap();
    assert_eq!(run(&cfg).unwrap().text, "-1");
    let cfg = CommandConfig::try_parse_from(["superdeform", "cochain", "m3", "1", "1"]).unwrap();
    let out = run(&cfg).unwrap();
    assert!(out.pass);
    assert_eq!(out.json["result"], out.text.as_str());
}
