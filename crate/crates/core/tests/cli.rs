use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn stablehom(args: &[&str], cache: Option<&Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stablehom"));
    cmd.args(args).env_remove("STABLEHOM_CONFIG");
    match cache {
        Some(dir) => cmd.env("STABLEHOM_CACHE_DIR", dir),
        None => cmd.env_remove("STABLEHOM_CACHE_DIR"),
    };
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("stdout is one JSON document")
}

const TOR: &[&str] = &["tor", "--field", "2", "--dmax", "3", "--contra", "K[q2]^v", "--co", "Id", "--maxdeg", "2"];

#[test]
fn tor_record_is_deterministic_and_cached() {
    let (code, first, _) = stablehom(TOR, None);
    assert_eq!(code, 0);
    let v = json(&first);
    assert_eq!(v["schema"], "stablehom/v1");
    assert_eq!(v["result"]["dims"], serde_json::json!([0, 0, 1]));
    let (_, again, _) = stablehom(TOR, None);
    assert_eq!(first, again);

    let dir = tempfile::tempdir().unwrap();
    let (_, miss, err) = stablehom(TOR, Some(dir.path()));
    assert!(!err.contains("cache hit"));
    let (_, hit, err) = stablehom(TOR, Some(dir.path()));
    assert!(err.contains("cache hit"));
    assert_eq!(miss, first);
    assert_eq!(hit, first);
    assert!(std::fs::read_dir(dir.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".lock")));
}

#[test]
fn exit_codes() {
    // one rank is not a plateau
    let (code, out, _) = stablehom(&["stable-scan", "--group", "GL", "--field", "2", "--expr", "Id", "--n-max", "1"], None);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["status"], "inconclusive");

    let (code, out, _) = stablehom(&["tor", "--field", "2", "--contra", "K[q2]^v o", "--co", "Id"], None);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["position"], 9);

    let (code, out, _) = stablehom(&["tor", "--field", "2", "--contra", "Id", "--co", "Id"], None);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "comparison");

    let (code, out, _) = stablehom(&["predict", "--series", "O/S", "--q", "2"], None);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "predict");

    let (code, out, _) = stablehom(&["frobnicate"], None);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "job");
}

#[test]
fn job_files_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let (code, toml, _) = stablehom(&["verify", "morita", "--cat", "inj", "--field", "2", "--dmax", "2", "--print-job"], None);
    assert_eq!(code, 0);
    let job = dir.path().join("job.toml");
    std::fs::write(&job, &toml).unwrap();
    let (_, printed, _) = stablehom(&["run", job.to_str().unwrap(), "--print-job"], None);
    assert_eq!(printed, toml);

    let (code, from_file, _) = stablehom(&["run", job.to_str().unwrap()], None);
    let (_, direct, _) = stablehom(&["verify", "morita", "--cat", "inj", "--field", "2", "--dmax", "2"], None);
    assert_eq!(code, 0);
    assert_eq!(from_file, direct);
    assert_eq!(json(&direct)["result"]["passed"], true);

    let config = dir.path().join("caps.toml");
    std::fs::write(&config, "dmax = 1\nmax_degree = 1\n").unwrap();
    let (_, out, _) = stablehom(&["tor", "--field", "3", "--contra", "Pbar", "--co", "Id", "--oracle", "--config", config.to_str().unwrap()], None);
    let v = json(&out);
    assert_eq!(v["job"]["caps"]["dmax"], 1);
    assert_eq!(v["result"]["dims"], v["result"]["oracle_dims"]);
    // flags win over the config file
    let (_, out, _) = stablehom(&["tor", "--field", "3", "--contra", "Pbar", "--co", "Id", "--maxdeg", "0", "--config", config.to_str().unwrap()], None);
    assert_eq!(json(&out)["result"]["dims"].as_array().unwrap().len(), 1);
}

#[test]
fn predict_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out_path = dir.path().join("t.json");
    let (code, stdout, _) = stablehom(
        &["predict", "--series", "O/S", "--q", "3", "--rect", "0..10x0..4", "--csv", csv.to_str().unwrap(), "--out", out_path.to_str().unwrap()],
        None,
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 1 + 11 * 5);
    assert!(table.contains("O/S,3,0,2,1\n") && table.contains("O/S,3,1,2,0\n"));
    let v = json(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 55);
}
