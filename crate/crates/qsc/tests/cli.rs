use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsc")).args(args).output().expect("run qsc")
}

fn code(args: &[&str]) -> i32 {
    qsc(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = qsc(args);
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lines(path: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "--id", "THM_A", "--n", "3..7", "--m-choice", "both"]), 0);
    assert_eq!(code(&["verify", "--id", "THM_B", "--n", "5..5"]), 3);
    assert_eq!(code(&["verify", "--id", "NO_SUCH"]), 2);
    assert_eq!(code(&["verify", "--id", "THM_A", "--n", "7..3"]), 2);
    assert_eq!(code(&["verify", "--id", "THM_B", "--n", "4", "--negative-control"]), 1);
    assert_eq!(code(&["identity", "--id", "QCHU", "--random", "10", "--seed", "7"]), 0);
    assert_eq!(code(&["identity", "--id", "JACKSON_SPEC", "--n", "4", "--seed", "1"]), 0);
    assert_eq!(code(&["identity", "--id", "WATSON_SPEC", "--n", "0"]), 2);
    assert_eq!(code(&["padic", "--id", "COR_1_6", "--p", "5,11"]), 0);
    assert_eq!(code(&["padic", "--id", "THM_A"]), 2);
    assert_eq!(code(&["padic", "--id", "LR", "--p", "4,9"]), 3);
    assert_eq!(code(&["padic", "--p", "5..13"]), 0);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let args = ["verify", "--id", "THM_A", "--n", "3..15", "--m-choice", "both", "--seed", "42"];
    let mut full = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(code(&full), 0);
    let recs = lines(&out);
    assert_eq!(recs.len(), 26);
    let keys: Vec<&str> = recs[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["id", "params", "modulus", "m_choice", "status", "witness", "elapsed_ms", "seed"]);
    assert_eq!(recs[0]["modulus"], "[n]*Phi(n)^4");
    assert_eq!(recs[0]["elapsed_ms"], serde_json::Value::Null);
    assert_eq!(recs[0]["seed"], 42);
    let verified = recs.iter().filter(|r| r["status"] == "verified").count();
    assert_eq!(verified, 14);
}

#[test]
fn parallel_runs_match_serial_ones() {
    let base = ["verify", "--id", "PROP_2_1,THM_5_4,NW_A", "--n", "2..6", "--d", "3,4", "--seed", "3"];
    let run = |jobs: &str| {
        let mut args = base.to_vec();
        args.extend(["--jobs", jobs]);
        stdout(&args)
    };
    let serial = run("1");
    assert!(!serial.is_empty());
    assert_eq!(serial, run("4"));
    assert_eq!(serial, run("3"));
}

#[test]
fn timestamps_are_opt_in() {
    let out = stdout(&["verify", "--id", "GS_16", "--n", "4", "--timestamps"]);
    let rec: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(rec["elapsed_ms"].is_u64());
}

#[test]
fn csv_output() {
    let out = stdout(&["verify", "--id", "GS_16", "--n", "3..5", "--format", "csv"]);
    let mut rows = out.lines();
    assert_eq!(rows.next(), Some("id,params,modulus,m_choice,status,witness,elapsed_ms,seed"));
    let statuses: Vec<&str> = rows.map(|r| if r.contains(",skipped,") { "skipped" } else { "verified" }).collect();
    assert_eq!(statuses, ["skipped", "verified", "verified"]);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# THM_B sweep\nid = THM_B\nn = 5..5\nseed = 8\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&["verify", "--config", cfg]), 3);
    let out = stdout(&["verify", "--config", cfg, "--n", "4"]);
    let rec: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(rec["params"]["n"], 4);
    assert_eq!(rec["seed"], 8);
    std::fs::write(dir.path().join("bad.cfg"), "id THM_B\n").unwrap();
    assert_eq!(code(&["verify", "--config", dir.path().join("bad.cfg").to_str().unwrap()]), 2);
}

#[test]
fn spec_files() {
    assert_eq!(code(&["check", "--spec", &data("sextic.qcs")]), 0);
    let out = stdout(&["check", "--spec", &data("sextic.qcs")]);
    let verified = out.lines().filter(|l| l.contains("\"status\":\"verified\"")).count();
    assert_eq!(verified, 5);
    assert_eq!(code(&["check", "--spec", &data("pair.qcs"), "--seed", "2"]), 0);
    assert_eq!(code(&["check", "--spec", &data("wrong.qcs")]), 1);
    assert_eq!(code(&["check", "--spec", &data("missing.qcs")]), 2);
}

#[test]
fn listing() {
    let text = stdout(&["list"]);
    for id in ["THM_A", "NW_23", "COR_5_H", "WATSON_SPEC"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id}");
    }
    let json = stdout(&["list", "--format", "jsonl"]);
    assert_eq!(json.lines().count(), 43);
}
