use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_defcolor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn verifies(out: &Output) -> bool {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    std::fs::write(&path, &out.stdout).unwrap();
    run(&["--verify-certificate", path.to_str().unwrap()], "").status.code() == Some(0)
}

#[test]
fn solve_exit_codes() {
    let sat = run(&["solve", "--caps", "uniform:1,3"], "E~~w\n");
    assert_eq!(sat.status.code(), Some(0));
    assert_eq!(json(&sat)["kind"], "coloring");
    assert!(verifies(&sat));

    let unsat = run(&["solve", "--caps", "uniform:1,3"], "F~~~w\n");
    assert_eq!(unsat.status.code(), Some(10));
    assert_eq!(json(&unsat)["kind"], "unsat");
    assert!(verifies(&unsat));

    let proof = run(&["solve", "--engine", "proof"], "F~~~w\n");
    assert_eq!(proof.status.code(), Some(10));
    assert!(json(&proof)["payload"]["trace"]["stage"].is_string());
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["solve"], "Dx!\n").status.code(), Some(2));
    assert_eq!(run(&["solve", "--caps", "uniform:2,3"], "Bw\n").status.code(), Some(2));
    assert_eq!(run(&["solve", "--caps", "{\"per_vertex\":[[1,3]]}"], "Bw\n").status.code(), Some(2));
    assert_eq!(run(&["solve", "--graph", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(run(&["survey", "--max-n", "9", "--check", "th0"], "").status.code(), Some(2));
    assert_eq!(run(&["survey", "--max-n", "3", "--check", "th9"], "").status.code(), Some(2));
    assert_eq!(run(&["reduce", "--set", "0,1,2"], "Bw\n").status.code(), Some(2));
    assert_eq!(run(&[], "").status.code(), Some(2));
}

#[test]
fn graph_from_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k6.g6");
    let out = dir.path().join("cert.json");
    std::fs::write(&graph, "E~~w\n").unwrap();
    let r = run(&["solve", "--graph", graph.to_str().unwrap(), "--out", out.to_str().unwrap()], "");
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["payload"]["coloring"].as_array().unwrap().len(), 6);
}

#[test]
fn mad_potential_audit() {
    let mad = run(&["mad"], "Dhc\n");
    assert_eq!(mad.status.code(), Some(0));
    assert_eq!(json(&mad)["payload"]["mad"], serde_json::json!({"num": 2, "den": 1}));
    assert!(verifies(&mad));

    let pot = run(&["potential", "--filter", "all"], "F~~~w\n");
    let v = json(&pot);
    assert_eq!(v["kind"], "low-potential-set");
    assert_eq!(v["payload"]["value"], -91);
    assert_eq!(v["payload"]["witness"], serde_json::json!([0, 1, 2, 3, 4, 5, 6]));
    assert!(verifies(&pot));

    let audit = run(&["audit"], "F~~~w\n");
    let v = json(&audit);
    assert_eq!(v["payload"]["conserved"], true);
    assert!(v["payload"]["charges"].as_array().unwrap().iter().all(|x| x.as_f64() == Some(-13.0)));
    assert!(verifies(&audit));
}

#[test]
fn reduce_and_critical() {
    let red = run(&["reduce", "--set", "0,1", "--phi", "1,2"], "Ch\n");
    assert_eq!(red.status.code(), Some(0), "{}", String::from_utf8_lossy(&red.stderr));
    assert_eq!(json(&red)["kind"], "reduction");
    assert!(verifies(&red));

    let crit = run(&["critical", "--caps", "uniform:-1,-1"], "@\n");
    assert_eq!(crit.status.code(), Some(0));
    assert_eq!(json(&crit)["payload"]["critical"], true);
    assert!(verifies(&crit));
    assert_eq!(run(&["critical"], "E~~w\n").status.code(), Some(10));
}

#[test]
fn survey_runs() {
    for check in ["th0", "th0critical"] {
        let r = run(&["survey", "--max-n", "5", "--check", check, "--threads", "2"], "");
        assert_eq!(r.status.code(), Some(0));
        let v = json(&r);
        assert_eq!(v["kind"], "survey-summary");
        assert_eq!(v["payload"]["violations"], serde_json::json!([]));
        assert!(verifies(&r));
    }
    let r = run(&["survey", "--max-n", "3", "--check", "potential-th1"], "");
    assert_eq!(r.status.code(), Some(0));
}

#[test]
fn tampered_certificate_rejected() {
    let sat = run(&["solve"], "E~~w\n");
    let mut v = json(&sat);
    v["payload"]["coloring"] = serde_json::json!([1, 1, 1, 1, 1, 1]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(run(&["--verify-certificate", path.to_str().unwrap()], "").status.code(), Some(10));
}

#[test]
fn random_is_seeded() {
    let a = run(&["random", "--n", "9", "--seed", "5"], "");
    let b = run(&["random", "--n", "9", "--seed", "5"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let solved = run(&["solve"], std::str::from_utf8(&a.stdout).unwrap());
    assert!(matches!(solved.status.code(), Some(0 | 10)));
}
