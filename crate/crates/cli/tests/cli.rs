use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclolog"))
        .args(args)
        .env_remove("CYCLO_JOBS")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

#[test]
fn check_ce_337_fails() {
    let out = run(&["check", "ce", "--p", "7", "--n", "337"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["check"], "ce");
    assert_eq!(v["verdict"], "fails");
    assert_eq!(v["N"], 337);
    assert!(v.get("ms").is_none());
}

#[test]
fn check_ab_holds() {
    let out = run(&["check", "ab", "--p", "5", "--a", "2", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["aux"]["N"], "11");
}

#[test]
fn congruence_failure_exits_1() {
    let out = run(&["check", "ce", "--p", "5", "--n", "13"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not congruent"));
    assert_eq!(json_lines(&out)[0]["verdict"], "error");
}

#[test]
fn skipped_exits_2() {
    let out = run(&["check", "ab", "--p", "5", "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", "p5", "--p", "7", "--n", "29"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["check", "nope", "--p", "5", "--n", "11"][..],
        &["check", "ce", "--p", "5"],
        &["scan", "--p", "5", "--range", "9..3"],
        &["scan", "--p", "5", "--range", "2..9", "--checks", "ce,zz"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn explicit_character_and_index() {
    let out = run(&["check", "thmP", "--p", "5", "--n", "101", "--chi", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["verdict"], "holds");
    let out = run(&["check", "gamma", "--p", "5", "--n", "11", "--chi", "2"]);
    assert_eq!(json_lines(&out)[0]["verdict"], "holds");
    let out = run(&["check", "thmP", "--p", "5", "--n", "11", "--chi", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["check", "si", "--p", "7", "--n", "631", "--i", "3"]);
    assert_eq!(json_lines(&out)[0]["verdict"], "holds");
}

#[test]
fn survey_scan_finds_s3_zeros() {
    let out = run(&["scan", "--p", "7", "--range", "2..1800", "--checks", "ce,si", "--i", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let zeros: Vec<u64> = json_lines(&out)
        .iter()
        .filter(|v| v["check"] == "si" && v["verdict"] == "holds")
        .map(|v| v["N"].as_u64().unwrap())
        .collect();
    assert_eq!(zeros, vec![337, 631, 659, 1303, 1723]);
}

#[test]
fn scan_ce_flags_211() {
    let out = run(&["scan", "--p", "5", "--range", "2..300", "--checks", "ce"]);
    let lines = json_lines(&out);
    let line = lines.iter().find(|v| v["N"] == 211).unwrap();
    assert_eq!(line["verdict"], "holds");
    let ns: Vec<u64> = lines.iter().map(|v| v["N"].as_u64().unwrap()).collect();
    assert!(ns.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn scan_is_byte_identical_across_jobs() {
    let one = run(&["scan", "--p", "5", "--range", "2..50", "--checks", "all", "--jobs", "1"]);
    let four = run(&["scan", "--p", "5", "--range", "2..50", "--checks", "all", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_cyclolog"))
        .args(["scan", "--p", "5", "--range", "2..50", "--checks", "all"])
        .env("CYCLO_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn csv_carries_the_same_reports() {
    let json = run(&["scan", "--p", "7", "--range", "2..120", "--checks", "ce,kummer"]);
    let csv = run(&["scan", "--p", "7", "--range", "2..120", "--checks", "ce,kummer", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("check,p,N,nu,g,verdict,lhs,rhs,aux,ms"));
    let json = json_lines(&json);
    let rows: Vec<&str> = rows.collect();
    assert_eq!(rows.len(), json.len());
    for (row, v) in rows.iter().zip(&json) {
        let prefix = format!("{},{},{},", v["check"].as_str().unwrap(), v["p"], v["N"]);
        assert!(row.starts_with(&prefix), "{row} vs {v}");
        assert!(row.contains(v["verdict"].as_str().unwrap()));
    }
}

#[test]
fn timing_is_opt_in() {
    let out = run(&["check", "ce", "--p", "5", "--n", "11", "--timing"]);
    assert!(json_lines(&out)[0]["ms"].is_u64());
}
