use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hypercover"));
    c.env_remove("HYPERCOVER_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn construct_then_verify(kind: &str, param: Option<&str>) -> Output {
    let mut args = vec!["construct", kind];
    args.extend(param);
    let planes = run(&args);
    assert_eq!(code(&planes), 0, "{}", String::from_utf8_lossy(&planes.stderr));
    run_stdin(&["verify", "-"], &planes.stdout)
}

#[test]
fn verify_example_n6_file() {
    let planes = run(&["construct", "example-n6"]);
    let f = temp_file(std::str::from_utf8(&planes.stdout).unwrap());
    let out = run(&["verify", f.path().to_str().unwrap(), "--n", "6"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["covered"], true);
    assert_eq!(r["num_uncovered"], 0);
}

#[test]
fn verify_single_plane_not_cover() {
    let f = temp_file("{\"a\": [1, 1], \"b\": 0}\n");
    let out = run(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["covered"], false);
    assert_eq!(r["num_uncovered"], 2);
}

#[test]
fn verify_malformed_line_names_line() {
    let f = temp_file("{\"a\": [1, 1], \"b\": 0}\n{\"a\": [1, oops], \"b\": 0}\n");
    let out = run(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn verify_dimension_errors() {
    let mixed = temp_file("{\"a\": [1, 1], \"b\": 0}\n{\"a\": [1, 1, 1], \"b\": 1}\n");
    assert_eq!(code(&run(&["verify", mixed.path().to_str().unwrap()])), 3);
    let ok = temp_file("{\"a\": [1, 1], \"b\": 0}\n");
    assert_eq!(code(&run(&["verify", ok.path().to_str().unwrap(), "--n", "3"])), 3);
    let too_big = format!("{{\"a\": [{}], \"b\": 0}}\n", vec!["1"; 25].join(", "));
    let too_big = temp_file(&too_big);
    assert_eq!(code(&run(&["verify", too_big.path().to_str().unwrap()])), 3);
}

#[test]
fn verify_accepts_non_skew_planes() {
    let f = temp_file("{\"a\": [1, 0], \"b\": -1}\n{\"a\": [1, 0], \"b\": 1}\n");
    assert_eq!(code(&run(&["verify", f.path().to_str().unwrap()])), 0);
}

#[test]
fn verify_rational_coefficients() {
    let f = temp_file("{\"a\": [\"1/2\", \"1/2\"], \"b\": 0}\n{\"a\": [\"1/2\", \"-1/2\"], \"b\": 0}\n");
    assert_eq!(code(&run(&["verify", f.path().to_str().unwrap()])), 0);
    let unreduced = temp_file("{\"a\": [\"2/4\", 1], \"b\": 0}\n");
    assert_eq!(code(&run(&["verify", unreduced.path().to_str().unwrap()])), 2);
}

#[test]
fn construct_pipes_into_verify() {
    assert_eq!(code(&construct_then_verify("pow2", Some("2"))), 0);
    assert_eq!(code(&construct_then_verify("pow2", Some("1"))), 0);
    assert_eq!(code(&construct_then_verify("levels", Some("3"))), 0);
    assert_eq!(code(&construct_then_verify("balanced", Some("6"))), 0);
    assert_eq!(code(&construct_then_verify("example-n5", None)), 0);
    assert_eq!(code(&construct_then_verify("example-n6", None)), 0);
}

#[test]
fn construct_pow2_shape() {
    let out = run(&["construct", "pow2", "2"]);
    let lines: Vec<Value> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    for l in &lines {
        let a = l["a"].as_array().unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(&a[..3], &[Value::from(1), Value::from(1), Value::from(1)]);
        assert_eq!(a[3].as_i64().unwrap().abs(), 1);
        assert_eq!(a[4].as_i64().unwrap().abs(), 2);
        assert_eq!(l["b"], 0);
    }
}

#[test]
fn construct_usage_errors() {
    assert_eq!(code(&run(&["construct", "balanced", "5"])), 2);
    assert_eq!(code(&run(&["construct", "levels"])), 2);
    assert_eq!(code(&run(&["construct", "pow2", "9"])), 2);
    assert_eq!(code(&run(&["construct", "nonsense", "3"])), 2);
}

#[test]
fn construct_is_deterministic() {
    let a = run(&["construct", "levels", "7"]);
    let b = run(&["construct", "levels", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

const X2: &str = r#"{"n": 3, "k": 1, "coeffs": [{"S": [2], "c": [1]}]}"#;

#[test]
fn interp_single_monomial() {
    let f = temp_file(X2);
    let out = run(&["interp", f.path().to_str().unwrap(), "--m", "2", "--S", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["coefficient"], serde_json::json!([1]));
    assert_eq!(r["direct"], serde_json::json!([1]));
    assert_eq!(r["match"], true);
}

#[test]
fn interp_constant_poly() {
    let f = temp_file(r#"{"n": 5, "k": 2, "coeffs": [{"S": [], "c": ["7/3", -1]}]}"#);
    let out = run(&["interp", f.path().to_str().unwrap(), "--m", "2", "--S", "1,4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["coefficient"], serde_json::json!([0, 0]));
    assert_eq!(r["match"], true);
}

#[test]
fn interp_rational_vector_valued() {
    let f = temp_file(
        r#"{"n": 7, "k": 2, "coeffs": [
            {"S": [1, 2], "c": ["1/2", 3]},
            {"S": [3, 5], "c": [-2, "5/7"]},
            {"S": [4], "c": [1, 1]},
            {"S": [], "c": [9, 0]}
        ]}"#,
    );
    let out = run(&["interp", f.path().to_str().unwrap(), "--m", "2", "--S", "3,5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["coefficient"], serde_json::json!([-2, "5/7"]));
    assert_eq!(r["match"], true);
}

#[test]
fn interp_precondition_failures() {
    let f = temp_file(X2);
    let p = f.path().to_str().unwrap();
    let odd = run(&["interp", p, "--m", "3", "--S", "2"]);
    assert_eq!(code(&odd), 4);
    let tight = run(&["interp", p, "--m", "4", "--S", "2"]);
    assert_eq!(code(&tight), 4);
    let err = String::from_utf8_lossy(&tight.stderr);
    assert!(err.contains("n/m - 1/2"), "{err}");
    let high = temp_file(r#"{"n": 5, "k": 1, "coeffs": [{"S": [1, 2], "c": [1]}]}"#);
    assert_eq!(code(&run(&["interp", high.path().to_str().unwrap(), "--m", "2", "--S", "1"])), 4);
}

#[test]
fn interp_bad_inputs() {
    let dup = temp_file(r#"{"n": 3, "k": 1, "coeffs": [{"S": [1], "c": [1]}, {"S": [1], "c": [2]}]}"#);
    assert_eq!(code(&run(&["interp", dup.path().to_str().unwrap(), "--m", "2", "--S", "1"])), 2);
    let f = temp_file(X2);
    assert_eq!(code(&run(&["interp", f.path().to_str().unwrap(), "--m", "2", "--S", "4"])), 2);
}

#[test]
fn scheme_prints_measure() {
    let out = run(&["scheme", "--n", "3", "--m", "2", "--S", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert!(!r["atoms"].as_array().unwrap().is_empty());
}

#[test]
fn kernel_base_case() {
    let out = run(&["kernel", "3", "1", "1", "1", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["nullity"], 0);
    assert_eq!(r["expects_trivial_kernel"], true);
}

#[test]
fn kernel_outside_hypothesis() {
    let out = run(&["kernel", "2", "1", "1", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["nullity"], 1);
    assert_eq!(r["expects_trivial_kernel"], false);
}

#[test]
fn kernel_rational_and_negative() {
    let out = run(&["kernel", "5", "2", "1/2", "-3", "2", "7/5", "-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["nullity"], 0);
}

#[test]
fn kernel_errors() {
    assert_eq!(code(&run(&["kernel", "3", "1", "1", "0", "1"])), 3);
    assert_eq!(code(&run(&["kernel", "3", "1", "1", "1"])), 3);
    assert_eq!(code(&run(&["kernel", "3", "1", "1", "x", "1"])), 2);
}

#[test]
fn search_finds_n5_cover() {
    let out = run(&["search", "--n", "5", "--B", "2", "--max-k", "4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["status"], "FoundCover");
    let family = r["family"].as_array().unwrap();
    assert_eq!(family.len(), 4);
    let lines: String = family.iter().map(|p| format!("{p}\n")).collect();
    assert_eq!(code(&run_stdin(&["verify", "-", "--n", "5"], lines.as_bytes())), 0);
}

#[test]
fn search_exhausts_below_bound() {
    let out = run(&["search", "--n", "4", "--B", "1", "--offset-bound", "2", "--max-k", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "ExhaustedNoCover");
}

#[test]
fn search_output_is_deterministic() {
    let args = ["search", "--n", "4", "--B", "2", "--max-k", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn search_workers_from_env() {
    let out = bin()
        .args(["search", "--n", "4", "--B", "1", "--max-k", "4"])
        .env("HYPERCOVER_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let bad = bin()
        .args(["search", "--n", "4", "--max-k", "4"])
        .env("HYPERCOVER_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 3);
}
