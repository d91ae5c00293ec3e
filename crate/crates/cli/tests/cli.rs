use std::process::Command;

use serde_json::Value;
use subring_zeta_cli::{run, Outcome, CACHE_ENV, EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("subring-zeta").chain(args.iter().copied()))
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn counts(out: &Outcome) -> Vec<(u64, u32, String)> {
    json(&out.stdout)["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["p"].as_u64().unwrap(),
                c["m"].as_u64().unwrap() as u32,
                c["count"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn count_examples() {
    let out = cli(&["count", "--ring", "split:4", "--p", "7", "--m", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(counts(&out), vec![(7, 1, "10".into())]);
    let out = cli(&["count", "--ring", "split:2", "--p", "3", "--m", "0,2"]);
    assert_eq!(counts(&out), vec![(3, 0, "1".into()), (3, 2, "4".into())]);
    let out = cli(&[
        "count", "--ring", "split:2", "--p", "3", "--m", "2", "--format", "csv",
    ]);
    assert_eq!(out.stdout, "p,m,count\n3,2,4\n");
}

#[test]
fn count_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.json");
    let ring = subring_zeta::make_split_ring(3).unwrap();
    std::fs::write(&path, ring.to_spec_json().to_string()).unwrap();
    let out = cli(&[
        "count",
        "--ring",
        path.to_str().unwrap(),
        "--p",
        "5",
        "--m",
        "1",
    ]);
    assert_eq!(counts(&out), vec![(5, 1, "6".into())]);
    assert_eq!(json(&out.stdout)["digest"], ring.digest());
}

#[test]
fn series_examples() {
    let out = cli(&["series", "--family", "split:3", "--B", "100"]);
    assert_eq!(out.code, EXIT_OK);
    let rows: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(rows[0], "k,f,N");
    assert_eq!(rows[2], "2,3,4");
    assert_eq!(rows.len(), 101);
    let out = cli(&["series", "--family", "split:3", "--B", "1"]);
    assert_eq!(out.stdout, "k,f,N\n1,1,1\n");
    let out = cli(&["series", "--family", "monogenic:x^2+1", "--B", "50"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stderr.contains("notice:") && out.stderr.contains('2'));
    let out = cli(&[
        "series",
        "--family",
        "monogenic:x^2+1",
        "--B",
        "50",
        "--ramified",
        "error",
    ]);
    assert_eq!(out.code, EXIT_INPUT);
    assert_eq!(json(&out.stderr)["error"], "ramified_prime");
}

#[test]
fn series_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.json");
    let out = cli(&[
        "series",
        "--family",
        "split:3",
        "--B",
        "500",
        "--fit",
        "--fit-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let fit = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(fit["beta"], 3);
    assert!(fit["C"].as_f64().unwrap().is_finite());
}

#[test]
fn r2_examples() {
    let out = cli(&["r2", "--kind", "C6", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out.stdout)[0]["r2"], 3);
    let out = cli(&["r2", "--table1"]);
    assert_eq!(out.stdout.lines().count(), 13);
    // the AGL(1,5) row disagrees with its tabulated value
    assert_eq!(out.code, EXIT_VIOLATION);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"degree": 1, "generators": []}"#).unwrap();
    let out = cli(&["r2", "--group", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stderr.contains("warning"));
}

#[test]
fn verify_suites() {
    let out = cli(&["verify", "--suite", "a1", "--n", "5", "--p", "5"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out.stdout)["all_match"], true);
    let out = cli(&[
        "verify", "--suite", "wishful", "--p", "3", "--type", "5", "--mmax", "2",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let out = cli(&[
        "verify",
        "--suite",
        "congruence",
        "--p",
        "2",
        "--kmax",
        "4",
        "--lmax",
        "4",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let out = cli(&[
        "verify",
        "--suite",
        "congruence",
        "--p",
        "3",
        "--kmax",
        "4",
        "--lmax",
        "0",
    ]);
    assert_eq!(out.code, EXIT_VIOLATION);
    let out = cli(&[
        "verify", "--suite", "mu", "--d", "4", "--p", "3", "--weight", "2", "--format", "csv",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out
        .stdout
        .starts_with("prop,checked,worst_ratio,violations\n"));
    let out = cli(&["verify", "--suite", "quintic", "--p", "3,5", "--m", "2"]);
    assert_eq!(out.code, EXIT_OK);
}

#[test]
fn timing_can_be_omitted() {
    let args = [
        "verify",
        "--suite",
        "mu",
        "--d",
        "3",
        "--p",
        "2,3",
        "--weight",
        "3",
        "--omit-timing",
    ];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a, b);
    assert!(!a.stdout.contains("runtime_ms"));
}

#[test]
fn exit_codes() {
    let out = cli(&[
        "--budget", "3", "count", "--ring", "split:4", "--p", "3", "--m", "3",
    ]);
    assert_eq!(out.code, EXIT_BUDGET);
    assert_eq!(json(&out.stderr)["exit_code"], EXIT_BUDGET);
    let out = cli(&["count", "--ring", "split:2", "--p", "2", "--m", "80"]);
    assert_eq!(out.code, EXIT_BUDGET);
    let out = cli(&["count", "--ring", "split:2", "--p", "4"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert_eq!(json(&out.stderr)["error"], "not_prime");
    let out = cli(&["count", "--ring", "wat:2", "--p", "3"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = cli(&["count", "--p", "3"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert_eq!(json(&out.stderr)["error"], "usage");
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    assert_eq!(
        cli(&["--workers", "0", "r2", "--kind", "S4"]).code,
        EXIT_INPUT
    );
}

#[test]
fn workers_and_cache_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let base = [
        "count",
        "--ring",
        "unramified:3:1^1 2^1",
        "--unital",
        "--p",
        "3",
        "--m",
        "0..3",
    ];
    let plain = cli(&base);
    for extra in [
        &["--workers", "1"][..],
        &["--workers", "4"],
        &["--cache", cache.to_str().unwrap()],
    ] {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        assert_eq!(cli(&a), plain, "{extra:?}");
    }
    let mut a = base.to_vec();
    a.extend(["--cache", cache.to_str().unwrap()]);
    assert_eq!(cli(&a), plain);
    a.push("--audit-cache");
    let audit = cli(&a);
    assert_eq!(audit.code, EXIT_OK);
    assert_eq!(
        json(&audit.stdout)["audit"]["mismatches"],
        serde_json::json!([])
    );
}

#[test]
fn audit_detects_corrupted_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let c = cache.to_str().unwrap();
    let digest = subring_zeta::make_split_ring(3).unwrap().digest();
    std::fs::write(
        &cache,
        format!("{{\"ring\":\"{digest}\",\"p\":3,\"m\":2,\"unital\":false,\"count\":\"999\"}}\n"),
    )
    .unwrap();
    let hit = cli(&[
        "count", "--ring", "split:3", "--p", "3", "--m", "2", "--cache", c,
    ]);
    assert_eq!(counts(&hit), vec![(3, 2, "999".into())]);
    let audit = cli(&[
        "count",
        "--ring",
        "split:3",
        "--p",
        "3",
        "--m",
        "2",
        "--cache",
        c,
        "--audit-cache",
    ]);
    assert_eq!(audit.code, EXIT_VIOLATION);
    assert_eq!(
        json(&audit.stdout)["audit"]["mismatches"][0]["cached"],
        "999"
    );
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_subring-zeta"))
        .args(["count", "--ring", "split:3", "--p", "2", "--m", "3"])
        .env(CACHE_ENV, &cache)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let lines = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(lines.lines().count(), 1);
    let rec = subring_zeta::parse_cache_line(lines.trim()).unwrap();
    assert_eq!((rec.p, rec.m, rec.unital), (2, 3, false));
}

#[test]
fn binary_reports_errors_as_json() {
    let out = Command::new(env!("CARGO_BIN_EXE_subring-zeta"))
        .args(["count", "--ring", "split:2", "--p", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(out.stdout.is_empty());
    let err = json(std::str::from_utf8(&out.stderr).unwrap());
    assert_eq!(err["exit_code"], EXIT_INPUT);
}
