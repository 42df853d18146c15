use std::process::{Command, Output};

use serde_json::Value;

fn hyperposet(cache: &tempfile::TempDir, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperposet"))
        .arg("--cache-dir")
        .arg(cache.path())
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn la_reports_sperner_values() {
    let cache = tempfile::tempdir().unwrap();
    for (n, spec, want) in [("4", "chain:2", 6), ("4", "chain:3", 10), ("5", "chain:2", 10)] {
        for mode in ["weak", "induced"] {
            let out = hyperposet(&cache, &["la", "--n", n, "--poset", spec, "--mode", mode]);
            assert_eq!(out.status.code(), Some(0));
            let v = json(&out);
            assert_eq!(v["value"], want, "{n} {spec} {mode}");
            assert_eq!(v["schema"], 1);
        }
    }
}

#[test]
fn output_is_byte_stable_across_runs_and_cache_hits() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["ex", "--dims", "3,3", "--pattern", "identity:2"];
    let first = hyperposet(&cache, &args);
    let second = hyperposet(&cache, &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["value"], 5);
    assert_eq!(first.stdout, second.stdout);
    assert!(std::fs::read_dir(cache.path()).unwrap().next().is_some());

    let uncached = hyperposet(&cache, &["--no-cache", "ex", "--dims", "3,3", "--pattern", "identity:2"]);
    assert_eq!(first.stdout, uncached.stdout);

    let a = hyperposet(&cache, &["bounds", "--poset", "diamond"]);
    let b = hyperposet(&cache, &["bounds", "--poset", "diamond"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn patterns_and_tsv() {
    let cache = tempfile::tempdir().unwrap();
    let out = hyperposet(&cache, &["patterns", "--poset", "diamond"]);
    assert_eq!(json(&out)["count"], 16);
    let tsv = hyperposet(&cache, &["--format", "tsv", "la", "--n", "4", "--poset", "chain:2", "--mode", "weak"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.starts_with("6\t"), "{text}");
}

#[test]
fn verify_suite_exit_codes() {
    let cache = tempfile::tempdir().unwrap();
    let out = hyperposet(&cache, &["--seed", "7", "verify", "doublecount", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let again = hyperposet(&cache, &["--seed", "7", "verify", "doublecount", "--trials", "50"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn bad_input_exits_two_with_a_diagnostic() {
    let cache = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"elements\": [\"a\"], \"covers\": [[\"a\", \"zz\"]]}").unwrap();
    let not_json = dir.path().join("garbage.json");
    std::fs::write(&not_json, "not json").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["poset", "info", "nonsense"],
        vec!["poset", "info", broken.to_str().unwrap()],
        vec!["ex", "--dims", "3,3", "--pattern", not_json.to_str().unwrap()],
        vec!["ex", "--dims", "3,x", "--pattern", "identity:2"],
        vec!["la", "--n", "9", "--poset", "diamond", "--mode", "weak"],
        vec!["verify", "bogus"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = hyperposet(&cache, &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn in_process_runner_matches_binary() {
    let cache = tempfile::tempdir().unwrap();
    let dir = cache.path().to_str().unwrap();
    let argv = ["hyperposet", "--cache-dir", dir, "poset", "dimension", "diamond"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = hyperposet::cli::run(argv, &mut out, &mut err);
    assert_eq!(code, 0);
    let bin = hyperposet(&cache, &["poset", "dimension", "diamond"]);
    assert_eq!(out, bin.stdout);
}
