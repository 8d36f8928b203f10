use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use triarr::analysis::twin_pair;
use triarr::arrangement::{full_monomial, make_rua, Rua, RuaFile, Sides};
use triarr::combinatorics::extract_combinatorics;

fn triarr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triarr"))
        .args(args)
        .env_remove("TRIARR_SEED")
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_rua(dir: &TempDir, name: &str, a: &Rua) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(&RuaFile::from(a.clone())).unwrap()).unwrap();
    p
}

fn write_combinatorics(dir: &TempDir, name: &str, a: &Rua) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(&extract_combinatorics(a)).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_classes() {
    let dir = TempDir::new().unwrap();
    let (free, nearly) = twin_pair();
    let o = triarr(&["analyze", s(&write_rua(&dir, "free.json", &free))]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["freeness"]["class"], "free");
    assert_eq!(r["freeness"]["exponents"], serde_json::json!([7, 7]));
    assert_eq!(r["c2"], 49);
    assert_eq!(r["t_vector"]["t"]["6"], 3);
    assert_eq!(r["ziegler"].as_array().unwrap().len(), 3);

    let o = triarr(&["analyze", s(&write_rua(&dir, "nearly.json", &nearly))]);
    let r = stdout_json(&o);
    assert_eq!(r["freeness"]["class"], "nearly_free");
    assert_eq!(r["freeness"]["jumping_point"], serde_json::json!([1, 1, 1]));
    assert_eq!(r["prediction"]["verdict"], "predict_not_free");

    let tri = make_rua(1, vec![], vec![], vec![], Sides::ALL).unwrap();
    let r = stdout_json(&triarr(&["analyze", s(&write_rua(&dir, "tri.json", &tri)), "--primes", "1"]));
    assert_eq!(r["freeness"]["exponents"], serde_json::json!([1, 1]));
}

#[test]
fn analyze_writes_out_file_and_pretty_table() {
    let dir = TempDir::new().unwrap();
    let input = write_rua(&dir, "fm2.json", &full_monomial(2));
    let out = dir.path().join("report.json");
    let o = triarr(&["analyze", s(&input), "--out", s(&out)]);
    assert!(o.status.success() && o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["freeness"]["exponents"], serde_json::json!([3, 5]));
    let o = triarr(&["--pretty", "analyze", s(&input)]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("free (3,5)"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"modulus": 3, "ea": [0, 0], "eb": [], "ec": [], "sides": []}"#).unwrap();
    assert_eq!(triarr(&["analyze", s(&bad)]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(triarr(&["analyze", s(&bad)]).status.code(), Some(2));
    assert_eq!(triarr(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(triarr(&["enumerate", "--N", "7"]).status.code(), Some(2));
    let comb = dir.path().join("comb.json");
    std::fs::write(&comb, r#"{"a": 2, "b": 2, "c": 2, "sides": ["X"], "triples": [[0, 1, 1]]}"#).unwrap();
    assert_eq!(triarr(&["realize", s(&comb)]).status.code(), Some(2));
}

#[test]
fn realize_then_analyze() {
    let dir = TempDir::new().unwrap();
    let (free, _) = twin_pair();
    let comb = write_combinatorics(&dir, "free.comb.json", &free);
    let out = dir.path().join("realized.json");
    let o = triarr(&["realize", s(&comb), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&triarr(&["analyze", s(&out)]));
    assert_eq!(r["freeness"]["class"], "free");
    assert_eq!(r["freeness"]["exponents"], serde_json::json!([7, 7]));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"a": 2, "b": 2, "c": 2, "sides": ["X", "Y", "Z"], "triples": []}"#).unwrap();
    let o = triarr(&["realize", s(&empty)]);
    assert!(o.status.success());
    assert!(stdout_json(&o)["modulus"].as_u64().is_some());
}

#[test]
fn realize_seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let comb = write_combinatorics(&dir, "fm3.comb.json", &full_monomial(3));
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_triarr"));
        c.args(["realize", s(&comb)]).env_remove("TRIARR_SEED");
        if let Some(v) = seed {
            c.env("TRIARR_SEED", v);
        }
        c.output().unwrap()
    };
    assert_eq!(run(None).stdout, run(Some("0")).stdout);
    assert!(run(Some("12")).status.success());
    assert_eq!(run(Some("twelve")).status.code(), Some(2));
}

#[test]
fn forced_combinatorics_exit_4() {
    let dir = TempDir::new().unwrap();
    let comb = dir.path().join("forced.json");
    std::fs::write(
        &comb,
        r#"{"a": 3, "b": 3, "c": 3, "sides": ["X", "Y", "Z"], "triples": [[1, 1, 1], [1, 1, 2], [1, 2, 1], [1, 2, 2]]}"#,
    )
    .unwrap();
    let o = triarr(&["realize", s(&comb)]);
    assert_eq!(o.status.code(), Some(4));
    let r = stdout_json(&o);
    assert_eq!(r["outcome"], "forced");
    assert_eq!(r["detail"].as_array().unwrap().len(), 2);
}

#[test]
fn realize_round_trip_keeps_weak_combinatorics_and_class() {
    let dir = TempDir::new().unwrap();
    let corpus = [
        full_monomial(2),
        make_rua(4, vec![0, 3], vec![0, 1], vec![0, 1], Sides::ALL).unwrap(),
        make_rua(5, vec![0, 2], vec![1, 3, 4], vec![0, 4], Sides::ALL.without(triarr::arrangement::Side::Y)).unwrap(),
        twin_pair().1,
    ];
    for (i, a) in corpus.iter().enumerate() {
        let comb = write_combinatorics(&dir, &format!("c{i}.json"), a);
        let realized = dir.path().join(format!("r{i}.json"));
        assert!(triarr(&["realize", s(&comb), "--out", s(&realized)]).status.success());
        let before = stdout_json(&triarr(&["analyze", s(&write_rua(&dir, &format!("a{i}.json"), a))]));
        let after = stdout_json(&triarr(&["analyze", s(&realized)]));
        assert_eq!(before["t_vector"], after["t_vector"], "{a}");
        assert_eq!(before["freeness"]["class"], after["freeness"]["class"], "{a}");
        assert_eq!(before["freeness"]["exponents"], after["freeness"]["exponents"], "{a}");
    }
}

#[test]
fn complement_command() {
    let dir = TempDir::new().unwrap();
    let (_, nearly) = twin_pair();
    let r = stdout_json(&triarr(&["complement", s(&write_rua(&dir, "n.json", &nearly))]));
    assert_eq!(r["N"], 5);
    assert_eq!(r["complement"], serde_json::json!([[0], [0], [0]]));
    assert_eq!(r["t_rem"], 1);
    assert_eq!(r["identity_holds"], true);
    let r = stdout_json(&triarr(&["complement", s(&write_rua(&dir, "f.json", &full_monomial(2))), "--N", "4"]));
    assert_eq!(r["complement"], serde_json::json!([[1, 3], [1, 3], [1, 3]]));
}

#[test]
fn enumerate_small_corpora() {
    let o = triarr(&["enumerate", "--N", "3", "--primes", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 513);
    let summary: Value = serde_json::from_str(lines[512]).unwrap();
    assert_eq!(summary["summary"]["records"], 512);
    assert_eq!(summary["summary"]["agree"], 512);
    let first: Value = serde_json::from_str(lines[0]).unwrap();
    assert!(first["agree"].as_bool().unwrap());

    let o = triarr(&["enumerate", "--N", "2", "--sides", "subsets", "--primes", "1"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let summary: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["disagree"], 0);
    // three inner lines and no side, no triple point: free (1,1)
    assert!(text.lines().any(|l| l.contains(r#""sides":[]"#)
        && l.contains(r#""verdict":"predict_free","exponents":[1,1]"#)
        && l.contains(r#""class":"free","exponents":[1,1]"#)));
}

#[test]
fn repro_pair_commands() {
    let o = triarr(&["repro-section6"]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let o = triarr(&["repro-pair", "--family", "3", "--primes", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["free_report"]["exponents"], serde_json::json!([10, 10]));
    let o = triarr(&["repro-pair", "--primes", "3", "--pretty"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("[ok] all primes agree"));
}

#[test]
fn certify_command() {
    let dir = TempDir::new().unwrap();
    let (free, nearly) = twin_pair();
    let o = triarr(&["certify", s(&write_rua(&dir, "f.json", &free)), "--exponents", "7", "7"]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["degrees"], serde_json::json!([7, 7]));
    assert_ne!(r["scalar"], 0);
    let o = triarr(&["certify", s(&write_rua(&dir, "n.json", &nearly)), "--exponents", "7", "7"]);
    assert_eq!(o.status.code(), Some(6));
    let fm2 = write_rua(&dir, "fm2.json", &full_monomial(2));
    let o = triarr(&["certify", s(&fm2), "--exponents", "3", "5", "--prime", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["p"], 7);
    assert_eq!(triarr(&["certify", s(&fm2), "--exponents", "3", "5", "--prime", "9"]).status.code(), Some(2));
}
