use std::process::{Command, Output};

fn qgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgr")).args(args).env_remove("QGR_CACHE_DIR").output().expect("qgr runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_n2_lists_six_spaces() {
    let out = qgr(&["classify", "--N", "2", "--r", "1", "--max-dim", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["N"], 2);
    assert_eq!(v["truncation"], 3);
    let names: Vec<&str> = v["spaces"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["T0", "T+", "T-", "T", "T1,+", "T1,-"]);
    for s in v["spaces"].as_array().unwrap() {
        assert_eq!(s["certificates"]["round_trip"], true);
        assert_eq!(s["dim"].as_u64().unwrap(), s["gamma_dim"].as_u64().unwrap() + 1);
    }
}

#[test]
fn classify_counts_at_larger_n() {
    for (n, r, count) in [("3", "1", 4), ("4", "2", 6)] {
        let out = qgr(&["classify", "--N", n, "--r", r, "--format", "csv"]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert_eq!(text.lines().count(), count + 1, "{text}");
        assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    }
}

#[test]
fn csv_quotes_names_with_commas() {
    let out = qgr(&["classify", "--N", "4", "--r", "2", "--format", "csv"]);
    assert!(stdout(&out).contains("\"T2,+\",6,5,true"));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["classify", "--N", "4", "--r", "2", "--jobs", "1"];
    let a = qgr(&args);
    let b = qgr(&["classify", "--N", "4", "--r", "2", "--jobs", "8"]);
    let c = qgr(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn dims_table() {
    let out = qgr(&["dims", "--N", "2", "--r", "1", "--k", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), "k,computed,predicted,match\n0,1,1,true\n1,3,3,true\n2,6,6,true\n");
    let out = qgr(&["dims", "--N", "3", "--r", "1", "--k", "1", "--format", "csv"]);
    assert!(stdout(&out).ends_with("1,5,5,true\n"));
    let out = qgr(&["dims", "--N", "4", "--r", "2", "--k", "0", "--format", "csv"]);
    assert_eq!(stdout(&out), "k,computed,predicted,match\n0,1,1,true\n");
}

#[test]
fn verify_suites_pass() {
    for (suite, n, r) in [("actions", "4", "2"), ("relations", "3", "1"), ("pairing", "3", "1"), ("nilpotency", "2", "1")] {
        let out = qgr(&["verify", suite, "--N", n, "--r", r]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn verify_primitives_reports_dimension() {
    let out = qgr(&["verify", "primitives", "--N", "2", "--r", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["checks"]["dimension"], 2);
}

#[test]
fn invalid_configurations_exit_2() {
    assert_eq!(qgr(&["classify", "--N", "3", "--r", "3"]).status.code(), Some(2));
    assert_eq!(qgr(&["classify", "--N", "5", "--r", "2"]).status.code(), Some(2));
    assert_eq!(qgr(&["classify", "--N", "3", "--r", "1", "--max-dim", "many"]).status.code(), Some(2));
    assert_eq!(qgr(&["dims", "--N", "3", "--r", "1", "--truncation", "0"]).status.code(), Some(2));
}

#[test]
fn uncertified_truncation_is_refused() {
    let out = qgr(&["classify", "--N", "4", "--r", "2", "--truncation", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("audit refused"));
}

#[test]
fn beyond_certified_bound_is_flagged() {
    let out = qgr(&["classify", "--N", "2", "--r", "1", "--max-dim", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["beyond_certified_bound"], true);
}

#[test]
fn cache_directory_from_environment() {
    let dir = std::env::temp_dir().join(format!("qgr-cli-cache-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_qgr"))
        .args(["dims", "--N", "2", "--r", "1", "--k", "1"])
        .env("QGR_CACHE_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("dual_2_1_1_standard.json").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}
