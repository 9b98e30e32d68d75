use std::process::Command;

use loqc_cli::Report;

fn loqc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_loqc")).args(args).output().unwrap()
}

fn json(out: &std::process::Output) -> Report {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn subcommands_succeed() {
    let r = json(&loqc(&["hom"]));
    assert!(r.table("summary").unwrap().number("herald_probability", "value").unwrap().abs() < 1e-12);
    let r = json(&loqc(&["hom", "--overlap", "0"]));
    assert!((r.table("summary").unwrap().number("herald_probability", "value").unwrap() - 0.5).abs() < 1e-12);
    let r = json(&loqc(&["cnot-herald", "--input", "11"]));
    assert!((r.table("logical_output").unwrap().number("10", "probability").unwrap() - 1.0).abs() < 1e-10);
    let r = json(&loqc(&["teleport-cnot", "--trials", "50", "--seed", "3"]));
    assert_eq!(r.seed, 3);
    assert_eq!(r.table("trials").unwrap().rows.len(), 50);
    let r = json(&loqc(&["cluster-demo", "--angles", "10,-20,30"]));
    assert_eq!(r.experiment, "cluster");
}

#[test]
fn run_with_overrides_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("hom.loqc");
    std::fs::write(&spec, "modes 2\ninput 1 1\nbs 0 1 0.5\nherald 0=1 1=1\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = loqc(&[
        "run",
        spec.to_str().unwrap(),
        "--trials",
        "20",
        "--seed",
        "5",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("seed,version,table,row,column,value\n5,"));
    assert!(csv.contains("aggregate,herald_frequency,value,0.0000000000000000e0"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.loqc");
    std::fs::write(&bad, "modes 2\nbs 0 5 0.5\n").unwrap();
    let o = loqc(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 6"));

    let runtime = dir.path().join("runtime.loqc");
    std::fs::write(&runtime, "cluster { nodes 3; edges 0-1 0-2 1-2\nmeasure 0 angle 10\nmeasure 1 angle 10 }\n")
        .unwrap();
    assert_eq!(loqc(&["run", runtime.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(loqc(&["run", dir.path().join("missing.loqc").to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(loqc(&["cnot-herald", "--input", "1x"]).status.code(), Some(2));
    assert_eq!(loqc(&["bogus"]).status.code(), Some(2));
}
