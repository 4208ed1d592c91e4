use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kecss_core::instance::{emit_instance, parse_instance, random_feasible};
use kecss_core::rounding::rho;
use kecss_core::Rational;
use serde_json::Value;

fn kecss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kecss")).args(args).output().expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = kecss(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn k5(dir: &Path) -> String {
    let p = path(dir, "k5.kecss");
    ok_stdout(&["gen", "--kind", "complete", "--n", "5", "--k", "4", "--output", &p]);
    p
}

fn q(s: &Value) -> Rational {
    s.as_str().expect("rational string").parse().unwrap()
}

#[test]
fn k5_ecss_costs_ten() {
    let dir = tempfile::tempdir().unwrap();
    let input = k5(dir.path());
    let sol: Value = serde_json::from_str(&ok_stdout(&["run", "--mode", "ecss", "--input", &input, "--certify"])).unwrap();
    assert_eq!(sol["cost"], "10/1");
    assert_eq!(sol["connectivity"], 4);
    assert_eq!(sol["mode"], "ecss");
    assert_eq!(sol["edges"].as_array().unwrap().len(), 10);
}

#[test]
fn oracle_on_k3_gap_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "k3.kecss");
    ok_stdout(&["gen", "--kind", "appendixB-k3", "--output", &input]);
    let out: Value = serde_json::from_str(&ok_stdout(&["run", "--mode", "oracle", "--input", &input])).unwrap();
    assert_eq!(out["lp"], "21/2");
    // The integral optimum sits strictly above the LP here.
    assert!(q(&out["brute"]) > Rational::new(21, 2));
}

#[test]
fn certify_accepts_then_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let input = k5(dir.path());
    let sol = path(dir.path(), "sol.json");
    ok_stdout(&["run", "--mode", "ecsm", "--input", &input, "--solution", &sol]);
    ok_stdout(&["run", "--mode", "certify", "--input", &input, "--solution", &sol]);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    v["edges"].as_array_mut().unwrap().remove(0);
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = kecss(&["run", "--mode", "certify", "--input", &input, "--solution", &bad]);
    assert_eq!(out.status.code(), Some(3));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    v["cost"] = Value::from("1/1");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(kecss(&["run", "--mode", "certify", "--input", &input, "--solution", &bad]).status.code(), Some(3));
}

#[test]
fn exit_codes_for_parse_errors_and_infeasibility() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "loop.kecss");
    std::fs::write(&bad, "p kecss 2 1 4\ne 1 1 5\n").unwrap();
    let out = kecss(&["run", "--mode", "ecss", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let cycle = path(dir.path(), "c5.kecss");
    ok_stdout(&["gen", "--kind", "cycle", "--n", "5", "--k", "4", "--output", &cycle]);
    assert_eq!(kecss(&["run", "--mode", "ecss", "--input", &cycle]).status.code(), Some(1));
    assert_eq!(kecss(&["run", "--mode", "ecss", "--input", &cycle, "--k", "2"]).status.code(), Some(0));
}

#[test]
fn generation_is_deterministic_and_canonical() {
    let args = ["gen", "--kind", "random", "--n", "8", "--p", "0.6", "--seed", "7"];
    let a = ok_stdout(&args);
    assert_eq!(a, ok_stdout(&args));
    assert_eq!(emit_instance(&parse_instance(&a).unwrap()).unwrap(), a);
    for kind in ["appendixB-k3", "appendixB-k6"] {
        let text = ok_stdout(&["gen", "--kind", kind]);
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()).unwrap(), text);
    }
}

#[test]
fn identical_flags_give_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "r.kecss");
    std::fs::write(&input, emit_instance(&random_feasible(9, 0.7, (1, 10), 4, 1, 3).unwrap()).unwrap()).unwrap();
    for mode in ["ecss", "ecss15", "ecsm", "md-ecss", "md-ecsm"] {
        let mut files = Vec::new();
        for run in 0..2 {
            let sol = path(dir.path(), &format!("{mode}-{run}.json"));
            let trace = path(dir.path(), &format!("{mode}-{run}.jsonl"));
            ok_stdout(&["run", "--mode", mode, "--input", &input, "--solution", &sol, "--trace", &trace, "--seed", "5"]);
            files.push((std::fs::read(&sol).unwrap(), std::fs::read(&trace).unwrap()));
        }
        assert_eq!(files[0], files[1], "{mode} artifacts differ between runs");
    }
}

#[test]
fn trace_lines_carry_the_documented_keys() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "k6.kecss");
    ok_stdout(&["gen", "--kind", "appendixB-k6", "--output", &input]);
    let trace = path(dir.path(), "t.jsonl");
    let sol = path(dir.path(), "s.json");
    ok_stdout(&["run", "--mode", "ecss", "--input", &input, "--trace", &trace, "--solution", &sol, "--certify"]);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(!text.is_empty());
    for (i, line) in text.lines().enumerate() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["iter"], i);
        for key in ["lp", "picked", "frac_support", "dropped_witnesses"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        q(&v["lp"]);
    }
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert!(s["connectivity"].as_u64().unwrap() >= 4);
}

#[test]
fn exact_separation_and_iteration_cap_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = k5(dir.path());
    let sol: Value = serde_json::from_str(&ok_stdout(&["run", "--mode", "ecss15", "--input", &input, "--exact-sep"])).unwrap();
    assert!(sol["connectivity"].as_u64().unwrap() >= 3);
    let k6 = path(dir.path(), "k6.kecss");
    ok_stdout(&["gen", "--kind", "appendixB-k6", "--output", &k6]);
    let out = kecss(&["run", "--mode", "ecss", "--input", &k6, "--max-iters", "1"]);
    assert!(!out.status.success());
}

/// 50 random instances with `n <= 10`; odd draws with `n >= 8` ask for k = 6.
fn write_corpus(dir: &Path) -> PathBuf {
    let corpus = dir.join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for i in 0..50 {
        let n = 5 + i % 6;
        let (k, p) = if i % 2 == 1 && n >= 8 { (6, 0.9) } else { (4, 0.75) };
        let inst = random_feasible(n, p, (1, 10), k, 1, 500 + i as u64).unwrap();
        std::fs::write(corpus.join(format!("r{i:02}.kecss")), emit_instance(&inst).unwrap()).unwrap();
    }
    corpus
}

fn bench_rows(csv_path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(csv_path).unwrap();
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers[0], "instance");
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn bench_ratios_respect_mode_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let out = dir.path().join("bench.csv");
    let status = kecss(&[
        "bench",
        "--dir",
        &corpus.to_string_lossy(),
        "--out",
        &out.to_string_lossy(),
        "--modes",
        "ecss,ecss15,ecsm",
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let rows = bench_rows(&out);
    assert_eq!(rows.len(), 150);
    let mut previous = String::new();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(&row[1], ["ecss", "ecss15", "ecsm"][i % 3]);
        if i % 3 == 0 {
            assert!(&row[0] > previous.as_str(), "rows out of order");
            previous = row[0].to_string();
        }
        assert_eq!(&row[15], "", "run error: {}", &row[15]);
        let k: i64 = row[4].parse().unwrap();
        let reference: Rational = row[6].parse().unwrap();
        let cost: Rational = row[7].parse().unwrap();
        // Independent of the bound column: recompute the limit per mode.
        let limit = match &row[1] {
            "ecss" => Rational::one(),
            "ecss15" => Rational::new(3, 2),
            _ => {
                assert_eq!(k % 2, 0);
                rho(k)
            }
        };
        assert!(cost <= &limit * &reference, "{} {}: cost {cost} vs {limit} * {reference}", &row[0], &row[1]);
        assert_eq!(&row[11], "true");
    }
}

#[test]
fn bench_records_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("mixed");
    std::fs::create_dir(&corpus).unwrap();
    std::fs::write(corpus.join("a.kecss"), "p kecss 2 1 4\ne 1 1 5\n").unwrap();
    ok_stdout(&["gen", "--kind", "complete", "--n", "5", "--k", "4", "--output", &path(&corpus, "b.kecss")]);
    std::fs::write(corpus.join("notes.txt"), "ignored").unwrap();
    let out = dir.path().join("bench.csv");
    let status = kecss(&["bench", "--dir", &corpus.to_string_lossy(), "--out", &out.to_string_lossy(), "--modes", "ecss"]);
    assert!(status.status.success());
    let rows = bench_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows[0][15].contains("line 2"));
    assert_eq!(&rows[1][7], "10/1");
}
