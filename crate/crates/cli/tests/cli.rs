use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilmotive"))
        .args(args)
        .env_remove("WEILMOTIVE_CACHE")
        .output()
        .expect("binary runs")
}

fn run_cached(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilmotive"))
        .args(args)
        .env("WEILMOTIVE_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

const E23: [&str; 8] = ["--e", "2", "--f", "3", "--gamma", "1", "--delta", "1"];
const E25: [&str; 8] = ["--e", "2", "--f", "5", "--gamma", "1", "--delta", "1"];

fn with<'a>(cmd: &'a str, curve: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(curve);
    v.extend_from_slice(rest);
    v
}

#[test]
fn curve_info_example() {
    let o = run(&with("curve-info", &E25, &[]));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("genus: 2"), "{s}");
    assert!(s.contains("components: 1"), "{s}");
}

#[test]
fn verify_example() {
    let o = run(&with(
        "verify",
        &E25,
        &["--p", "11", "--n", "2", "--a", "2"],
    ));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("PASS"), "{s}");
    assert!(s.contains("1 - 4X - 74X^2 - 484X^3 + 14641X^4"), "{s}");
}

#[test]
fn zeta_example() {
    let o = run(&with("zeta", &E23, &["--p", "7"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("T^2 + 4T + 7"));
    let o = run(&with("zeta", &E23, &["--p", "5", "--check"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("T^2 + 5"));
}

#[test]
fn json_envelope() {
    let o = run(&with(
        "euler-factor",
        &E23,
        &["--p", "7", "--format", "json"],
    ));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "euler-factor");
    assert_eq!(v["curve"]["genus"], 1);
    assert_eq!(v["curve"]["gamma"], "1");
    assert_eq!(v["verified"], true);
    let r = &v["results"][0];
    assert_eq!(r["component"], serde_json::json!([1, 1]));
    assert_eq!(r["p"], 7);
    assert_eq!(r["factor"]["level"], 1);
    assert_eq!(
        r["factor"]["coeffs"],
        serde_json::json!([[[1, 1]], [[4, 1]], [[7, 1]]])
    );
}

#[test]
fn motive_factor_json_has_cyclotomic_layout() {
    let o = run(&with(
        "motive-factor",
        &["--e", "2", "--f", "9"],
        &["--p", "7", "--n", "2", "--a", "2", "--format", "json"],
    ));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        let level = r["factor"]["level"].as_u64().unwrap();
        for c in r["factor"]["coeffs"].as_array().unwrap() {
            let c = c.as_array().unwrap();
            assert!(!c.is_empty() && c.len() as u64 <= level.max(1));
            for pair in c {
                assert_eq!(pair.as_array().unwrap().len(), 2);
            }
        }
    }
    assert!(v["product"]["coeffs"].is_array());
}

#[test]
fn exit_codes() {
    // usage: missing flag, malformed rational, invalid curve, bad prime, bad params
    assert_eq!(
        run(&["zeta", "--e", "2", "--f", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&with(
            "zeta",
            &["--e", "2", "--f", "3", "--gamma", "1/0"],
            &["--p", "7"]
        ))
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["curve-info", "--e", "2", "--f", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&with("zeta", &E23, &["--p", "3"])).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&with("zeta", &E23, &["--p", "9"])).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&with(
            "motive-factor",
            &E23,
            &["--p", "7", "--n", "2", "--a", "1"]
        ))
        .status
        .code(),
        Some(2)
    );
    // resource bound
    let o = run(&with("zeta", &["--e", "2", "--f", "9"], &["--p", "97"]));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
    let o = run(&with(
        "invariants",
        &["--e", "2", "--f", "9"],
        &["--n", "4", "--a", "3", "--monomial-bound", "100"],
    ));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tampered_cache_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.ndjson");
    let args = with("zeta", &E23, &["--p", "7", "--check"]);
    assert_eq!(run_cached(&args, &cache).status.code(), Some(0));
    // Negating every stored Z keeps norms and conjugate pairing, so the entry
    // loads, but the cycle factor becomes T^2 - 4T + 7.
    let mut lines = Vec::new();
    for line in std::fs::read_to_string(&cache).unwrap().lines() {
        let mut v: Value = serde_json::from_str(line).unwrap();
        if v["key"]["kind"] == "jacobi" {
            for item in v["payload"]["values"].as_array_mut().unwrap() {
                for pair in item["z"]["coeffs"].as_array_mut().unwrap() {
                    pair[0] = (-pair[0].as_i64().unwrap()).into();
                }
            }
        }
        lines.push(v.to_string());
    }
    std::fs::write(&cache, lines.join("\n") + "\n").unwrap();
    let o = run_cached(&args, &cache);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL") && s.contains("T^2 - 4T + 7"), "{s}");
}

#[test]
fn cache_hits_and_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.ndjson");
    let args = with("verify", &E25, &["--pmax", "13", "--n", "3", "--a", "2"]);
    let plain = run(&args);
    let first = run_cached(&args, &cache);
    let second = run_cached(&args, &cache);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    let text = std::fs::read_to_string(&cache).unwrap();
    let kinds: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["key"]["kind"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    for k in ["count", "zeta", "jacobi"] {
        assert!(kinds.iter().any(|x| x == k), "no {k} record");
    }
    // the second run appended nothing
    let lines_after_first = text.lines().count();
    let third = run_cached(&args, &cache);
    assert_eq!(
        std::fs::read_to_string(&cache).unwrap().lines().count(),
        lines_after_first
    );
    assert_eq!(third.stdout, plain.stdout);

    // truncate the final record mid-line
    let cut = text.len() - 10;
    std::fs::write(&cache, &text[..cut]).unwrap();
    let o = run_cached(&args, &cache);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, plain.stdout);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    // the recomputed record was appended on its own line
    let again = run_cached(&args, &cache);
    assert_eq!(again.stdout, plain.stdout);
    assert!(!String::from_utf8_lossy(&again.stderr).contains("discarding"));
}

#[test]
fn determinism_and_jobs() {
    let args = with(
        "verify",
        &["--e", "3", "--f", "4", "--delta", "2"],
        &["--pmax", "31", "--n", "2", "--a", "2"],
    );
    let a = run(&args);
    let b = run(&args);
    let mut one = args.clone();
    one.extend_from_slice(&["--jobs", "1"]);
    let c = run(&one);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn other_commands() {
    let o = run(&with("invariants", &E23, &["--n", "2", "--a", "2"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6 invariant classes"));

    let o = run(&with(
        "grouping-check",
        &E25,
        &["--p", "3", "--r", "2", "--n", "2", "--a", "2"],
    ));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m = 2: PASS"), "{}", stdout(&o));

    let o = run(&with("frobenius", &E25, &["--p", "3", "--format", "json"]));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["results"][0]["ord"], 4);
    assert_eq!(
        v["results"][0]["values"][0]["z"]["coeffs"][0],
        serde_json::json!([-9, 1])
    );

    let o = run(&with("decompose", &["--e", "2", "--f", "9"], &[]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("component (3,1): dimension 1"));

    let o = run(&with(
        "lseries",
        &E23,
        &["--n", "1", "--a", "1", "--pmax", "7", "--terms", "49"],
    ));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for expect in [
        "a_1 = 1\n",
        "a_5 = 0\n",
        "a_7 = -4\n",
        "a_25 = -5\n",
        "a_49 = 9\n",
        "a_35 = 0\n",
        "a_11 = 0\n",
    ] {
        assert!(s.contains(expect), "{expect} missing from\n{s}");
    }
}
