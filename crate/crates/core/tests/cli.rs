use std::process::{Command, Output};

use pointscheme::cli::CommandError;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointscheme"))
        .args(args)
        .env_remove("POINTSCHEME_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_text_and_json() {
    let out = run(&["count", "--shape", "r=2 d=3,4 n=5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "17");

    let out = run(&["count", "--shape", "r=4 d=2,2,2,2,2,2 n=2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["header"]["tool"], "pointscheme");
    assert_eq!(v["header"]["command"], "count");
    assert_eq!(v["result"]["count"], 20);
}

#[test]
fn multidegree_of_curve() {
    let out = run(&["multidegree", "--shape", "r=2 d=3,4 n=4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(4,3,3,4)"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--shape", "r=1 d=2 n=2"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--shape", "r=2 d=3,4 n=5", "--field", "Fp:4"]).status.code(),
        Some(2)
    );
    // positive expected dimension
    assert_eq!(run(&["count", "--shape", "r=2 d=3,4 n=4"]).status.code(), Some(3));
    // relation longer than the truncation
    assert_eq!(run(&["count", "--shape", "r=2 d=3,6 n=5"]).status.code(), Some(3));
    assert_eq!(CommandError::Verification("x".into()).exit_code(), 4);
}

#[test]
fn ff_enum_skips_impossible_configurations() {
    let out = run(&["ff-enum", "--shape", "r=3 d=2,2,3,3 n=3", "--field", "Fp:5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["status"], "SKIPPED");

    let out = run(&["ff-enum", "--shape", "r=2 d=3,4 n=5", "--field", "Fp:7", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("MATCH 17 tuples over F_7"));
}

#[test]
fn ff_enum_reads_relation_files() {
    let dir = std::env::temp_dir().join(format!("pointscheme-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rels.json");
    // x*y = 0 on consecutive slots
    std::fs::write(
        &path,
        r#"{"r":2,"field":"Fp:3","relations":[{"factors":[["1","0"],["0","1"]]}]}"#,
    )
    .unwrap();
    let out = run(&[
        "ff-enum", "--shape", "r=2 d=2 n=2", "--field", "Fp:3", "--relations",
        path.to_str().unwrap(), "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // (0:1) then anything, or anything then (1:0): 4 + 4 - 1
    assert_eq!(v["result"]["count"], 7);

    let out = run(&[
        "ff-enum", "--shape", "r=2 d=2 n=2", "--field", "Fp:5", "--relations",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_headline_lines() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["12221:17 OK", "13431:19 OK", "14641:20 OK", "12221-n4:(4,3,3,4) OK", "ff7-12221:17 OK"] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    assert!(!text.contains("FAIL"));
}
