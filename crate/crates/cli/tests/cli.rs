use std::io::Write;
use std::process::{Command, Output};

fn fga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fga"))
        .args(args)
        .env_remove("FGA_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_writes_a_score_table() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a,b,1\nc,b,-1").unwrap();
    f.flush().unwrap();
    let o = fga(&["compute", "--input", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node_label,fairness,goodness"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let b = rows.iter().find(|r| r[0] == "b").unwrap();
    assert!(b[2].parse::<f64>().unwrap().abs() < 1e-9);
}

#[test]
fn raw_ratings_need_their_scale() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a,b,8").unwrap();
    f.flush().unwrap();
    let path = f.path().to_str().unwrap();
    assert_eq!(fga(&["compute", "--input", path]).status.code(), Some(3));
    assert!(fga(&["compute", "--input", path, "--r-max", "10"])
        .status
        .success());
}

#[test]
fn exit_codes() {
    assert_eq!(fga(&["compute"]).status.code(), Some(2));
    assert_eq!(fga(&["compute", "--dataset", "otc"]).status.code(), Some(3));
    assert_eq!(
        fga(&["compute", "--input", "/nonexistent.csv"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        fga(&["compute", "--generate", "nope:n=3"]).status.code(),
        Some(2)
    );
}

#[test]
fn predict_multiplies_fairness_and_goodness() {
    let o = fga(&[
        "predict",
        "--generate",
        "complete:n=4",
        "--from",
        "0",
        "--to",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["prediction"], 1.0);
}

#[test]
fn axioms_report_as_json() {
    let o = fga(&["axioms", "--draws", "5", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["axioms"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn stabiliser_bounds_as_csv() {
    let o = fga(&[
        "bounds",
        "--scenario",
        "stabiliser",
        "--k",
        "2",
        "--l",
        "5",
        "--delta",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().contains("satisfied"));
    assert!(text.lines().nth(1).unwrap().contains("true"));
}

#[test]
fn campaign_output_is_reproducible() {
    let args = [
        "--seed",
        "3",
        "campaign",
        "--generate",
        "erdos:n=60,m=400,pos=0.9",
        "--mode",
        "direct",
        "--k",
        "1,2",
        "--samples",
        "3",
    ];
    let a = fga(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = fga(&[&args[..], &["--serial"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn out_dir_receives_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = fga(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "compute",
        "--generate",
        "min-k:n=12,k=2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
}
