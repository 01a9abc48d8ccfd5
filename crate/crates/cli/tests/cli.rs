use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_distsep"));
    c.env_remove("SOURCE_DATE_EPOCH");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("distsep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

const DIAMOND: &str = r#"{"inner":[["1","0"],["0","1"],["-1","0"],["0","-1"]],
"outer":[["-1","-1"],["1","-1"],["1","1"],["-1","1"]]}"#;

#[test]
fn claims_pass_for_four_points() {
    let out = run(&["claims", "verify", "--n", "4", "--alpha", "0,1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["command"], "claims verify");
    assert!(r["result"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn claims_size_mismatch_is_usage_error() {
    let out = run(&["claims", "verify", "--n", "5", "--alpha", "0,1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bracket_on_three_points_is_tight() {
    let out = run(&["bounds", "bracket", "--alpha", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["lower"]["value"], 3);
    assert_eq!(r["result"]["upper"]["value"], 3);
}

#[test]
fn bracket_reads_edm_reports() {
    let gen = run(&["edm", "gen", "--alpha", "0,1,2,5"]);
    assert_eq!(gen.status.code(), Some(0));
    let g = report(&gen);
    assert_eq!(g["result"]["rank"], 3);
    let p = scratch("edm.json", std::str::from_utf8(&gen.stdout).unwrap());
    let out = run(&["bounds", "bracket", "--input", p.to_str().unwrap(), "--seeds", "2", "--iters", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["n"], 4);
    let p = scratch("alpha.json", r#"{"alpha": [0, "1/2", 3]}"#);
    let out = run(&["bounds", "bracket", "--input", p.to_str().unwrap()]);
    assert_eq!(report(&out)["result"]["upper"]["value"], 3);
}

#[test]
fn empty_alpha_is_usage_error() {
    for args in [
        &["edm", "gen", "--alpha", ""][..],
        &["claims", "verify", "--alpha", ""],
        &["edm", "gen"],
        &["edm", "gen", "--alpha", "0,1,x"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn reports_are_reproducible() {
    let strip = |o: &Output| {
        let mut v = report(o);
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    let nested = scratch("repro-diamond.json", DIAMOND);
    let runs: Vec<Vec<&str>> = vec![
        vec!["--seed", "11", "edm", "gen", "--random", "7"],
        vec!["--seed", "11", "claims", "verify", "--random", "5"],
        vec!["--seed", "3", "bounds", "bracket", "--random", "5", "--seeds", "2", "--iters", "300"],
        vec!["nested", "solve", "--input", nested.to_str().unwrap()],
        vec!["--seed", "4", "sweep", "--n-list", "4,6"],
    ];
    for args in runs {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(strip(&a), strip(&b), "{args:?}");
    }
    let with_epoch = |args: &[&str]| {
        bin().env("SOURCE_DATE_EPOCH", "1700000000").args(args).output().unwrap().stdout
    };
    let args = ["--seed", "9", "edm", "gen", "--random", "6"];
    assert_eq!(with_epoch(&args), with_epoch(&args));
    let other = run(&["--seed", "10", "edm", "gen", "--random", "6"]);
    assert_ne!(report(&other)["config_hash"], report(&run(&args))["config_hash"]);
}

#[test]
fn nested_diamond_with_oracle() {
    let p = scratch("diamond.json", DIAMOND);
    let out = run(&["nested", "solve", "--input", p.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["result"].clone();
    assert_eq!(r["k"], 4);
    assert_eq!(r["oracle"]["k"], 4);
    assert_eq!(r["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(r["witnesses"]["inner"].as_array().unwrap().len(), 4);
}

#[test]
fn error_exit_codes() {
    let infeasible = scratch(
        "far.json",
        r#"{"inner":[["5","5"]],"outer":[["0","0"],["1","0"],["0","1"]]}"#,
    );
    let out = run(&["nested", "solve", "--input", infeasible.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    let broken = scratch("broken.json", "{\"inner\": [");
    let out = run(&["nested", "solve", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["nested", "solve", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["claims", "verify", "--alpha", "0,1,2,3,4,5,6,7,8"]);
    assert_eq!(out.status.code(), Some(5));
    let out = run(&["--symbolic-limit", "10", "claims", "verify", "--alpha", "0,1,2,3,4,5,6,7,8"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["--format", "csv", "edm", "gen", "--alpha", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn protocol_simulation_hits_exact_value() {
    let f = scratch(
        "f.json",
        r#"{"mode":"exact","B":[["0","1","4"],["1","0","1"],["4","1","0"]],
        "C":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#,
    );
    let out = run(&[
        "--seed", "7", "protocol", "simulate", "--factorization", f.to_str().unwrap(),
        "--cell", "1,3", "--trials", "100000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["result"].clone();
    assert_eq!(r["exact"], "4");
    assert_eq!(r["bits"], 2);
    assert_eq!(r["within_3se"], true);

    let out = run(&["protocol", "simulate", "--factorization", f.to_str().unwrap(), "--cell", "4,1"]);
    assert_eq!(out.status.code(), Some(2));
    let neg = scratch("neg.json", r#"{"mode":"exact","B":[["-1"]],"C":[["1"]]}"#);
    let out = run(&["protocol", "simulate", "--factorization", neg.to_str().unwrap(), "--cell", "1,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nmf_search_on_alpha_target() {
    let t = scratch("target.json", r#"{"alpha": [0, 1, 2]}"#);
    let out = run(&["nmf", "search", "--target", t.to_str().unwrap(), "--r", "3", "--seeds", "4", "--iters", "3000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["result"].clone();
    assert_eq!(r["best"]["factorization"]["mode"], "approximate");
    assert!(r["best"]["factorization"]["residual"].as_f64().unwrap() <= 1e-9);

    let m = scratch("id.json", r#"[[1, 0], [0, 1]]"#);
    let out = run(&["nmf", "search", "--target", m.to_str().unwrap(), "--r", "1", "--iters", "200"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_rows() {
    let out = run(&["--format", "csv", "sweep", "--n-list", "4,8,16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n,instance,alpha,rank,restricted_rank,lower"));
    assert!(lines[3].starts_with("16,0,"));
    let out = run(&["sweep", "--n-list", "4,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn writes_to_out_file() {
    let dir = std::env::temp_dir().join(format!("distsep-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("r.json");
    let out = run(&["--out", p.to_str().unwrap(), "edm", "gen", "--alpha", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["result"]["D"][0][2], "4");
}
