use std::process::Command;

use discrete_spacings::cli::{run, Payload, ResultEnvelope};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spacings"));
    cmd.env_remove("SPACINGS_OUT_DIR");
    cmd
}

fn stdout_of(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn asympt_k2_reports_closed_form_constants() {
    let (code, text) = stdout_of(&["asympt", "--k", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    let q = &v["payload"]["asympt"]["quadrature"];
    let theta = q["theta"][0].as_f64().unwrap();
    let sigma = q["sigma"][0][0].as_f64().unwrap();
    assert!((theta - 0.1353353).abs() < 1e-7, "{theta}");
    assert!((sigma - 0.0732626).abs() < 1e-7, "{sigma}");
    assert_eq!(
        v["payload"]["asympt"]["comparison"]["agree"],
        Value::Bool(true)
    );
}

#[test]
fn exact_compare_has_zero_total_variation() {
    let (code, text) = stdout_of(&["exact", "--n", "4", "--k", "2", "--compare"]);
    assert_eq!(code, 0);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    let Payload::Exact(p) = env.payload else {
        panic!("wrong payload")
    };
    let c = p.comparison.unwrap();
    assert!(c.identical);
    assert_eq!(c.tv_distance, 0.0);
    assert_eq!(p.total_mass, "1");
}

#[test]
fn identical_argv_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [
        vec![
            "simulate",
            "--n",
            "40",
            "--k",
            "3",
            "--replications",
            "5000",
            "--seed",
            "9",
        ],
        vec!["moments", "--k", "3", "-N", "40", "-M", "6"],
        vec!["exact", "--n", "9", "--k", "3"],
    ] {
        for format in ["json", "csv"] {
            let path = dir.path().join(format!("{}.{format}", sub[0]));
            let mut outputs = Vec::new();
            for threads in ["1", "3"] {
                let mut args = sub.clone();
                args.extend([
                    "--format",
                    format,
                    "--threads",
                    threads,
                    "--output",
                    path.to_str().unwrap(),
                ]);
                assert_eq!(run(std::iter::once("spacings").chain(args)), 0);
                outputs.push(std::fs::read(&path).unwrap());
            }
            assert!(outputs[0] == outputs[1], "{sub:?} {format}");
        }
    }
}

#[test]
fn csv_headers_match_documented_schemas() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["simulate", "--n", "20", "--k", "2", "--replications", "100"],
            "quantity,i,j,value",
        ),
        (
            &["exact", "--n", "6", "--k", "2"],
            "method,counts,hats,numerator,denominator,probability",
        ),
        (&["moments", "--k", "2", "-N", "10"], "table,n,i,j,value"),
        (&["asympt", "--k", "3"], "route,quantity,i,j,value"),
        (
            &["verify", "--only", "1,5"],
            "id,name,check,measured,target,tolerance,comparison,passed",
        ),
        (&["report", "--k-max", "3"], "k,quantity,i,j,value"),
    ];
    for (args, header) in cases {
        let (code, text) = stdout_of(&[args, &["--format", "csv"]].concat());
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(text.lines().next().unwrap(), header);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let width = header.split(',').count();
        assert!(reader.records().all(|r| r.unwrap().len() == width));
    }
}

#[test]
fn json_envelopes_parse_back() {
    for args in [
        vec![
            "simulate",
            "--n",
            "25",
            "--k",
            "3",
            "--replications",
            "2000",
        ],
        vec![
            "exact",
            "--n",
            "8",
            "--k",
            "3",
            "--method",
            "direct",
            "--compare",
        ],
        vec!["moments", "--k", "3", "-N", "15", "--exact"],
        vec!["moments", "--k", "2", "-N", "30", "-c", "2"],
        vec!["asympt", "--k", "4"],
        vec!["report", "--k-max", "4"],
        vec!["verify", "--only", "9,10"],
    ] {
        let (code, text) = stdout_of(&args);
        assert_eq!(code, 0, "{args:?}");
        let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(env.config.subcommand, args[0]);
        assert_eq!(env.timestamp, None);
        let again =
            discrete_spacings::cli::render(&env, discrete_spacings::cli::Format::Json).unwrap();
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(stdout_of(&["--help"]).0, 0);
    assert_eq!(stdout_of(&["--version"]).0, 0);
    assert_eq!(stdout_of(&[]).0, 2);
    assert_eq!(stdout_of(&["nope"]).0, 2);
    assert_eq!(stdout_of(&["simulate", "--k", "2"]).0, 2);
    assert_eq!(stdout_of(&["simulate", "--n", "5", "--k", "1"]).0, 2);
    assert_eq!(stdout_of(&["exact", "--n", "50", "--k", "2"]).0, 2);
    assert_eq!(
        stdout_of(&["moments", "--k", "2", "-N", "31", "--exact"]).0,
        2
    );
    assert_eq!(stdout_of(&["asympt", "--k", "9"]).0, 2);
    assert_eq!(stdout_of(&["verify", "--only", "13"]).0, 2);
    assert_eq!(stdout_of(&["verify", "--only", "7"]).0, 1);
    assert_eq!(stdout_of(&["asympt", "--k", "3", "-N", "20"]).0, 1);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 30\nk = 3\nreplications = 300\nseed = 4\n").unwrap();
    let (code, text) = stdout_of(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(code, 0);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    assert_eq!(
        (env.config.n, env.config.k, env.config.seed),
        (Some(30), Some(3), Some(5))
    );
    assert_eq!(env.config.replications, Some(300));

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        stdout_of(&["simulate", "--config", cfg.to_str().unwrap()]).0,
        2
    );
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .env("SPACINGS_OUT_DIR", dir.path())
        .args(["exact", "--n", "5", "--k", "2", "--format", "csv"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("exact.csv")).unwrap();
    assert!(text.starts_with("method,counts"));
}

#[test]
fn unwritable_output_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("file");
    std::fs::write(&target, "x").unwrap();
    let bad = target.join("sub/out.json");
    let out = bin()
        .args([
            "exact",
            "--n",
            "4",
            "--k",
            "2",
            "--output",
            bad.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(target.to_str().unwrap()));
}

#[test]
fn timestamp_is_opt_in() {
    let (_, text) = stdout_of(&["exact", "--n", "4", "--k", "2", "--timestamp"]);
    let env: ResultEnvelope = serde_json::from_str(&text).unwrap();
    assert!(env.timestamp.unwrap() > 1_600_000_000);
}
