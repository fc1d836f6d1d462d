use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiregular"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_graph_text() {
    let o = run(&["gen", "--family", "full", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("p 10 9\n"), "{text}");

    let o = run(&["gen", "--family", "ary", "--n", "3", "--k", "0"]);
    assert!(stdout(&o).starts_with("p 1 0\n"));

    let o = run(&["gen", "--family", "full", "--n", "1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_to_file_round_trips_through_betti() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.graph");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["gen", "--family", "full", "--n", "3", "--k", "1", "--out", p])
            .status
            .code(),
        Some(0)
    );
    let o = run(&["betti", "--graph", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "i,j,beta\n0,0,1\n1,2,3\n2,3,3\n3,4,1\n");
}

#[test]
fn betti_on_small_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = dir.path().join("k2.graph");
    std::fs::write(&k2, "p 2 1\ne 0 1\n").unwrap();
    let o = run(&["betti", "--graph", k2.to_str().unwrap()]);
    assert_eq!(stdout(&o), "i,j,beta\n0,0,1\n1,2,1\n");

    let p3 = dir.path().join("p3.graph");
    std::fs::write(&p3, "p 3 2\ne 0 1\ne 1 2\n").unwrap();
    let o = run(&["betti", "--graph", p3.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["betti"].as_array().unwrap().len(), 3);
    assert_eq!(
        (v["pdim"].as_u64(), v["reg"].as_u64(), v["depth"].as_u64()),
        (Some(2), Some(1), Some(1))
    );

    let o = run(&["betti", "--family", "full", "--n", "3", "--k", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_prints_exact_json() {
    let o = run(&["eval", "--family", "full", "--n", "3", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["depth"], 7);
    assert_eq!(v["pdim"], 15);
    assert_eq!(v["reg"], 6);
    assert_eq!(v["dim"], 15);
    assert_eq!(v["vertices"], 22);

    let v: serde_json::Value =
        serde_json::from_slice(&run(&["eval", "--family", "ary", "--n", "3", "--k", "2"]).stdout).unwrap();
    assert_eq!(
        (v["depth"].as_u64(), v["pdim"].as_u64(), v["reg"].as_u64()),
        (Some(2), Some(5), Some(2))
    );

    let v: serde_json::Value =
        serde_json::from_slice(&run(&["eval", "--family", "full", "--n", "3", "--k", "0"]).stdout).unwrap();
    assert_eq!(
        (v["depth"].as_u64(), v["reg"].as_u64(), v["dim"].as_u64()),
        (Some(1), Some(0), Some(1))
    );
    assert_eq!(v["case"], "trivial k=0");
}

#[test]
fn eval_handles_huge_values() {
    let o = run(&["eval", "--family", "full", "--n", "12", "--k", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["vertices"].is_string());
}

#[test]
fn verify_sweeps() {
    let o = run(&[
        "verify",
        "--family",
        "full",
        "--n-range",
        "3..4",
        "--k-range",
        "1..2",
        "--oracles",
        "all",
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("family,n,k,invariant,oracle,formula,oracle_value,status\n"));
    assert!(!csv.contains(",fail"));

    let again = run(&[
        "verify",
        "--family",
        "full",
        "--n-range",
        "3..4",
        "--k-range",
        "1..2",
        "--oracles",
        "all",
        "--no-timing",
    ]);
    assert_eq!(stdout(&again), csv);

    let o = run(&[
        "verify",
        "--family",
        "ary",
        "--n",
        "3",
        "--k-range",
        "1..3",
        "--oracles",
        "hochster",
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(",pass")).count(), 9);

    let o = run(&[
        "verify",
        "--family",
        "full",
        "--n",
        "3",
        "--k",
        "4",
        "--oracles",
        "hochster",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource cap"));
}

#[test]
fn verify_json_without_timing() {
    let o = run(&[
        "verify",
        "--family",
        "ary",
        "--n",
        "3",
        "--k",
        "1",
        "--oracles",
        "formulas",
        "--format",
        "json",
        "--no-timing",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports
        .iter()
        .all(|r| r.get("millis").is_none() && r["status"] == "pass"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(run(&["verify", "--family", "full", "--k", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--n", "3", "--k", "1", "--oracles", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--n-range", "5..3", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn table_formats() {
    let o = run(&[
        "table",
        "--invariant",
        "reg",
        "--family",
        "full",
        "--n-range",
        "3..5",
        "--k-range",
        "1..6",
    ]);
    let md = stdout(&o);
    let rows: Vec<&str> = md
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| n"))
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.matches('|').count() == 8));
    assert_eq!(rows[0], "| 3 | 1 | 3 | 6 | 13 | 27 | 54 |");

    let o = run(&[
        "table",
        "--invariant",
        "dim",
        "--family",
        "full",
        "--n",
        "3",
        "--k-range",
        "0..3",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "family,invariant,n,k,value\nfull,dim,3,0,1\nfull,dim,3,1,3\nfull,dim,3,2,7\nfull,dim,3,3,15\n"
    );

    let o = run(&[
        "table",
        "--invariant",
        "bogus",
        "--family",
        "full",
        "--n",
        "3",
        "--k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
