use std::fs;
use std::process::Command;

use serde_json::Value;

const MTX: &str = "%%MatrixMarket matrix coordinate integer general
4 4 6
1 1 2
1 4 -1
2 2 5
3 1 7
3 3 1
4 4 3
";

fn spmv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spmv"))
}

#[test]
fn run_audit_convert() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.mtx");
    let v = dir.path().join("v.txt");
    let report = dir.path().join("out.json");
    fs::write(&m, MTX).unwrap();
    fs::write(&v, "1\n2\n3\n4\n").unwrap();

    let out = spmv()
        .args(["run", "--matrix"])
        .arg(&m)
        .arg("--vector")
        .arg(&v)
        .args(["--slots", "16", "--t", "65537", "--chunk-size", "16", "--key-holder", "B", "--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["values"], serde_json::json!([-2, 10, 10, 12]));
    assert_eq!(json["verified"], true);
    assert_eq!(json["audit"]["passed"], true);
    assert_eq!(json["record"]["noise_remaining_bits"], 87);
    assert!(json["record"]["comm"]["a_to_b_bytes"].as_u64().unwrap() > 0);

    let out = spmv().args(["audit", "--report"]).arg(&report).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));

    // tampered transcript: the result goes to the cloud
    let mut bad = json.clone();
    bad["transcript"]["messages"]
        .as_array_mut()
        .unwrap()
        .last_mut()
        .unwrap()["to"] = "Cloud".into();
    fs::write(&report, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = spmv().args(["audit", "--report"]).arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let cssc = dir.path().join("m.cssc");
    let out = spmv().args(["convert", "--in"]).arg(&m).arg("--out").arg(&cssc).output().unwrap();
    assert!(out.status.success());
    let json: Value = serde_json::from_str(&fs::read_to_string(&cssc).unwrap()).unwrap();
    assert_eq!(json["col_ptrs"], serde_json::json!([0, 4, 6]));
}

#[test]
fn run_with_random_vector() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.mtx");
    fs::write(&m, MTX).unwrap();
    let out = spmv()
        .args(["run", "--matrix"])
        .arg(&m)
        .args(["--random-seed", "3", "--slots", "16"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verified=true"));
}

#[test]
fn bench_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.mtx"), MTX).unwrap();
    let cfg = dir.path().join("bench.toml");
    fs::write(
        &cfg,
        r#"
[params]
slots = 64

[[matrix]]
path = "m.mtx"

[[matrix]]
name = "r"
synthetic = { rows = 30, cols = 30, nnz = 90, seed = 1 }

[[matrix]]
suitesparse = "HB/not-fetched"

[scaling_suite]
points = 4
max_nnz = 10000
"#,
    )
    .unwrap();
    let out_json = dir.path().join("report.json");
    let csv = dir.path().join("scaling.csv");
    let out = spmv()
        .env("SPMV_CACHE_DIR", dir.path().join("cache"))
        .args(["bench", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_json)
        .arg("--scaling-csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&fs::read_to_string(&out_json).unwrap()).unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), 6);
    let nnz: Vec<u64> = records.iter().map(|r| r["nnz"].as_u64().unwrap()).collect();
    assert!(nnz.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(json["failures"][0]["name"], "not-fetched");
    for key in ["name", "rows", "cols", "nnz", "n_ct", "op_counts", "estimated_time_ms", "est_memory_mb", "comm", "noise_remaining_bits", "baseline_counts"] {
        assert!(records[0].get(key).is_some(), "missing {key}");
    }
    let csv = fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("nnz,simulated_cloud_ms\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn bad_input_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.mtx");
    fs::write(&m, "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n").unwrap();
    let out = spmv().args(["convert", "--in"]).arg(&m).arg("--out").arg(dir.path().join("x")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}
