use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use linheight::arith::ValuationContext;
use linheight::generate::{arch_case, nonarch_case};
use linheight::io::{parse_instance, ArchInstance, FiniteInstance, InstanceDocument};
use linheight::run::{intersect, ResultDocument, Status};
use linheight::selftest::selftest;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_linheight"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn random_documents(count: usize) -> Vec<InstanceDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=5);
            let p = rng.gen_range(1..=n / 2);
            if i % 2 == 0 {
                let ctx = ValuationContext::new([2, 3, 5, 13][i % 4]).unwrap();
                let case = nonarch_case(&mut rng, n, p, &ctx);
                InstanceDocument::Finite(FiniteInstance::from_quadruple(&case.quad, Some(i as u64)))
            } else {
                let case = arch_case(&mut rng, n, p);
                InstanceDocument::Archimedean(ArchInstance::from_quadruple(&case.quad, None))
            }
        })
        .collect()
}

#[test]
fn documents_round_trip() {
    for doc in random_documents(100) {
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn evaluation_is_deterministic() {
    for doc in random_documents(12) {
        let a = serde_json::to_string(&intersect(&doc, false).unwrap()).unwrap();
        let b = serde_json::to_string(&intersect(&doc, false).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timing"));
        let r: ResultDocument = serde_json::from_str(&a).unwrap();
        assert_eq!(r.status(), Status::Ok);
    }
    let s1 = selftest(3, 6, &[2, 3]);
    let s2 = selftest(3, 6, &[2, 3]);
    assert_eq!(s1, s2);
    assert!(s1.all_passed());
    let empty = selftest(3, 0, &[2]);
    assert!(empty.suites.is_empty() && empty.all_passed());
}

#[test]
fn schema_problems_are_errors() {
    for text in [
        "{}",
        r#"{"place": "finite", "n": 2}"#,
        r#"{"place": "finite", "n": 2, "prime": 4, "A": [["1"],["1"]], "B": [["1"],["3"]], "C": [["1"],["0"]], "D": [["0"],["1"]]}"#,
        r#"{"place": "finite", "n": 2, "prime": 3, "A": [["1"],["x"]], "B": [["1"],["3"]], "C": [["1"],["0"]], "D": [["0"],["1"]]}"#,
        r#"{"place": "finite", "n": 2, "prime": 3, "A": [["1"],["1"]], "B": [["1"],["3"]], "C": [["1"],["0"]], "D": [["0"],["1"]], "extra": 1}"#,
    ] {
        let parsed = parse_instance(text).and_then(|d| intersect(&d, false));
        assert!(parsed.is_err(), "{text}");
    }
}

#[test]
fn intersect_fixtures() {
    let out = run(
        &[
            "intersect",
            fixture("finite_n2.json").to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["value"], -1);
    assert_eq!(v["values"]["algebraic"], -1);
    assert!(v.get("timing_ms").is_none());

    let out = run(
        &[
            "intersect",
            fixture("archimedean_n2.json").to_str().unwrap(),
            "--json",
            "--timing",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 2.0 * 2f64.ln()).abs() < 1e-8);
    assert!((v["values"]["levine"].as_f64().unwrap() - value).abs() < 1e-8);
    assert!(v["timing_ms"].is_number());

    let out = run(
        &[
            "intersect",
            fixture("improper.json").to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["status"], "hypothesis_failed");
}

#[test]
fn intersect_reads_stdin_and_prints_text() {
    let text = std::fs::read_to_string(fixture("finite_n2.json")).unwrap();
    let out = run(&["intersect", "-"], Some(&text));
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("value: -1"), "{stdout}");

    let out = run(&["intersect", "-"], Some("not json"));
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["intersect", "/nonexistent/file.json"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn building_queries() {
    let out = run(
        &[
            "building",
            "half-geodesic",
            fixture("half_geodesic.json").to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(
        v["vertices"][2],
        serde_json::json!([["1", "0"], ["0", "4"]])
    );

    let out = run(
        &[
            "building",
            "distance",
            fixture("distance.json").to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(
        json_of(&out),
        serde_json::json!({"adjacent": false, "distance": 2})
    );

    let out = run(
        &[
            "building",
            "reduction-equal",
            fixture("reduction.json").to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(json_of(&out), serde_json::json!({"equal": true}));

    let out = run(
        &[
            "building",
            "distance",
            fixture("reduction.json").to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_command() {
    let args = [
        "selftest", "--seed", "5", "--count", "6", "--sizes", "2,3", "--json",
    ];
    let out = run(&args, None);
    assert_eq!(out.status.code(), Some(0));
    let again = run(&args, None);
    assert_eq!(out.stdout, again.stdout);
    let v = json_of(&out);
    assert!(v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["failed"] == 0));

    let out = run(&["selftest", "--count", "2", "--sizes", "2"], None);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.trim_end().ends_with("PASS"), "{stdout}");
}
