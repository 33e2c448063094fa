use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const Z2_MINUS_1: &str = r#"{"numerator": [[-1, 0], [0, 0], [1, 0]]}"#;
const Z3_MINUS_Z: &str = r#"{"numerator": [[0, 0], [-1, 0], [0, 0], [1, 0]]}"#;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn folia_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_folia"));
    cmd.current_dir(dir).args(args).env_remove("FOLIA_NUM_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Outcome {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn folia(dir: &Path, args: &[&str]) -> Outcome {
    folia_env(dir, args, &[])
}

fn manifest(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run_manifest(command: &str, body: &str, extra: &[&str]) -> Outcome {
    let tmp = TempDir::new().unwrap();
    manifest(tmp.path(), "m.json", body);
    let mut args = vec![command, "--manifest", "m.json"];
    args.extend_from_slice(extra);
    folia(tmp.path(), &args)
}

fn expect_code(o: &Outcome, code: i32, needle: &str) {
    assert_eq!(o.code, code, "stdout: {}\nstderr: {}", o.stdout, o.stderr);
    assert!(o.stderr.contains(needle), "'{needle}' not in stderr: {}", o.stderr);
}

fn json(o: &Outcome) -> serde_json::Value {
    serde_json::from_str(&o.stdout).expect("stdout is JSON")
}

#[test]
fn help_and_version_exit_zero() {
    let tmp = TempDir::new().unwrap();
    let h = folia(tmp.path(), &["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.stdout.contains("decompose"));
    assert_eq!(folia(tmp.path(), &["--version"]).code, 0);
}

#[test]
fn usage_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    expect_code(&folia(tmp.path(), &["bogus"]), 1, "unrecognized subcommand");
    expect_code(&folia(tmp.path(), &[]), 1, "Usage");
    expect_code(&folia(tmp.path(), &["decompose", "--svg", "maybe"]), 1, "'on' or 'off'");
    expect_code(&folia(tmp.path(), &["solve", "--resolution", "65x64"]), 1, "NX,NT");
    expect_code(&folia(tmp.path(), &["dims", "--g", "two"]), 1, "invalid value");
}

#[test]
fn missing_manifest_is_io_error() {
    let tmp = TempDir::new().unwrap();
    expect_code(&folia(tmp.path(), &["decompose", "--manifest", "nope.json"]), 1, "i/o error");
}

#[test]
fn malformed_manifest_is_schema_error() {
    expect_code(&run_manifest("decompose", "{not json", &[]), 1, "schema error");
    expect_code(
        &run_manifest("decompose", r#"{"diferential": {}}"#, &[]),
        1,
        "unknown field",
    );
    expect_code(
        &run_manifest("decompose", r#"{"tolerances": {"quad": 1e-8}}"#, &[]),
        1,
        "unknown field",
    );
}

#[test]
fn unknown_param_key_is_schema_error() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"extra": 1}}}}"#);
    expect_code(&run_manifest("decompose", &body, &[]), 1, "params for decompose");
    expect_code(
        &run_manifest("tree", r#"{"params": {"mode": "enumerate", "valence": 5, "x": 1}}"#, &[]),
        1,
        "params for tree",
    );
    expect_code(&run_manifest("tree", r#"{"params": {"mode": "forest"}}"#, &[]), 1, "params for tree");
}

#[test]
fn missing_differential_is_schema_error() {
    expect_code(&run_manifest("decompose", "{}", &[]), 1, "no differential");
}

#[test]
fn bad_differential_document_is_schema_error() {
    expect_code(
        &run_manifest("decompose", r#"{"differential": {"numerator": "z^2"}}"#, &[]),
        1,
        "schema error",
    );
    expect_code(
        &run_manifest(
            "residue",
            r#"{"differential": {"order": 4, "sqrt_coeffs": [[0.3, 1, 0]]}}"#,
            &[],
        ),
        1,
        "half-integer",
    );
}

#[test]
fn differential_from_file() {
    let tmp = TempDir::new().unwrap();
    fs::create_dir(tmp.path().join("cfg")).unwrap();
    manifest(tmp.path(), "cfg/q.json", Z2_MINUS_1);
    manifest(tmp.path(), "cfg/m.json", r#"{"differential": "q.json"}"#);
    let o = folia(tmp.path(), &["decompose", "--manifest", "cfg/m.json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    manifest(tmp.path(), "cfg/bad.json", r#"{"differential": "missing.json"}"#);
    expect_code(&folia(tmp.path(), &["decompose", "--manifest", "cfg/bad.json"]), 1, "missing.json");
}

#[test]
fn nonpositive_tolerance_is_schema_error() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}}}"#);
    expect_code(&run_manifest("decompose", &body, &["--tol-compat", "0"]), 1, "must be positive");
    expect_code(&run_manifest("decompose", &body, &["--tol-solver=-1"]), 1, "must be positive");
}

#[test]
fn invalid_thread_count_exits_one() {
    let tmp = TempDir::new().unwrap();
    let o = folia_env(tmp.path(), &["dims", "--g", "2", "--orders", "3"], &[("FOLIA_NUM_THREADS", "zero")]);
    expect_code(&o, 1, "FOLIA_NUM_THREADS");
    let o = folia_env(tmp.path(), &["dims", "--g", "2", "--orders", "3"], &[("FOLIA_NUM_THREADS", "0")]);
    expect_code(&o, 1, "FOLIA_NUM_THREADS");
    let o = folia_env(tmp.path(), &["dims", "--g", "2", "--orders", "3"], &[("FOLIA_NUM_THREADS", "2")]);
    assert_eq!(o.code, 0);
}

#[test]
fn unwritable_output_is_io_error() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("taken"), "").unwrap();
    let o = folia(tmp.path(), &["dims", "--g", "2", "--orders", "3", "--out", "taken"]);
    expect_code(&o, 1, "i/o error");
}

#[test]
fn saddle_connection_is_domain_error() {
    let body = format!(r#"{{"differential": {Z3_MINUS_Z}}}"#);
    expect_code(&run_manifest("decompose", &body, &[]), 2, "non-generic: saddle connection between zeros #");
    let body = format!(r#"{{"differential": {Z3_MINUS_Z}, "params": {{"shear": [0.1, 0.1]}}}}"#);
    expect_code(&run_manifest("shear", &body, &[]), 2, "non-generic: saddle connection");
}

#[test]
fn shear_errors() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"shear": [1.0, 2.0]}}}}"#);
    expect_code(&run_manifest("shear", &body, &[]), 2, "dimension mismatch");
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"shear": [100.0]}}}}"#);
    expect_code(&run_manifest("shear", &body, &[]), 2, "outside trust region");
}

#[test]
fn shear_moves_real_part_only() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"shear": [1.7]}}}}"#);
    let o = run_manifest("shear", &body, &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    let after = &v["after"][0]["period"];
    assert!((after[0].as_f64().unwrap() - 1.7).abs() < 1e-6);
    assert!((after[1].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    assert_eq!(v["before"][0]["width"], v["after"][0]["width"]);
}

#[test]
fn residue_errors() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"pole": "north"}}}}"#);
    expect_code(&run_manifest("residue", &body, &[]), 1, "expected an index");
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"pole": [3, 0]}}}}"#);
    expect_code(&run_manifest("residue", &body, &[]), 2, "no pole at");
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"method": "guess"}}}}"#);
    expect_code(&run_manifest("residue", &body, &[]), 1, "unknown residue method");
    let body = r#"{"differential": {"numerator": [[1, 0]], "denominator": [[0, 0], [1, 0]]}, "params": {"pole": [0, 0]}}"#;
    expect_code(&run_manifest("residue", body, &[]), 2, "residue undefined");
}

#[test]
fn residue_of_z2_minus_1_at_infinity() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"pole": "inf", "method": "contour"}}}}"#);
    let o = run_manifest("residue", &body, &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = &json(&o)["residue"];
    assert!((r[0].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!(r[1].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn compat_verdicts() {
    let model = r#"{"order": 6, "sqrt_coeffs": [[-3, 1, 0], [-1, 0.3, 0]]}"#;
    let body = format!(r#"{{"differential": {model}, "params": {{"radius": 0.5}}}}"#);
    let o = run_manifest("compat", &body, &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["compatible"], true);

    let body = format!(r#"{{"differential": {model}, "params": {{"local_params": [1, 1, 1, 1]}}}}"#);
    let o = run_manifest("compat", &body, &[]);
    expect_code(&o, 2, "incompatible");
    assert_eq!(json(&o)["compatible"], false);

    let body = format!(r#"{{"differential": {model}, "params": {{"local_params": [1, 1]}}}}"#);
    expect_code(&run_manifest("compat", &body, &[]), 2, "local parameter count 2 != n - 2 = 4");
    let body = format!(r#"{{"differential": {model}, "params": {{"local_params": [1, -1, 1, 1]}}}}"#);
    expect_code(&run_manifest("compat", &body, &[]), 2, "negative measure");
    let body = format!(r#"{{"differential": {model}, "params": {{"radius": -1}}}}"#);
    expect_code(&run_manifest("compat", &body, &[]), 2, "must be positive");
}

#[test]
fn trace_errors_and_output() {
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"start": [0.3, 0.5], "orientation": 2}}}}"#);
    expect_code(&run_manifest("trace", &body, &[]), 1, "orientation");
    let body = format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"start": [1, 0]}}}}"#);
    expect_code(&run_manifest("trace", &body, &[]), 2, "singularity");

    let tmp = TempDir::new().unwrap();
    manifest(
        tmp.path(),
        "m.json",
        &format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"start": [0.3, 0.5], "kind": "vertical"}}}}"#),
    );
    let o = folia(tmp.path(), &["trace", "--manifest", "m.json", "--out", "o"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["legs"].as_array().unwrap().len(), 2);
    let svg = fs::read_to_string(tmp.path().join("o/trace.svg")).unwrap();
    assert!(svg.contains("<polyline"));
    let csv = fs::read_to_string(tmp.path().join("o/trace.csv")).unwrap();
    assert!(csv.starts_with("leg,re,im\n"));
}

#[test]
fn harmonic_errors() {
    let body = r#"{"params": {"boundary": {"constant": 1, "cos": [[1, 1]]}, "lengths": [2, 4]}}"#;
    expect_code(&run_manifest("decay", body, &[]), 2, "nonzero mean");
    let body = r#"{"params": {"a": [0.3, 0], "order": 6, "delta": 0.5, "i_max": 2}}"#;
    expect_code(&run_manifest("exhaust", body, &[]), 2, "too few exhaustion steps");
    let body = r#"{"params": {"a": [0.3, 0], "order": 5, "delta": 0.5, "i_max": 8}}"#;
    expect_code(&run_manifest("exhaust", body, &[]), 2, "must be even");
    let body = r#"{"params": {"length": 2, "top": {"cos": [[1, 1]]}, "solver": "gauss"}}"#;
    expect_code(&run_manifest("solve", body, &[]), 1, "unknown");
    let body = r#"{"params": {"length": 2, "top": {"cos": [[1, 1]]}}}"#;
    expect_code(&run_manifest("solve", body, &["--resolution", "4,4"]), 2, "invalid input");
    let body = r#"{"params": {"length": 2, "top": {"cos": [[1, 1]], "tan": []}}}"#;
    expect_code(&run_manifest("solve", body, &[]), 1, "unknown field");
}

#[test]
fn tree_errors() {
    let body = r#"{"params": {"mode": "expansion", "valence": 5, "diagonals": [[0, 2], [0, 3]], "lengths": [1]}}"#;
    expect_code(&run_manifest("tree", body, &[]), 2, "inconsistent lengths");
    let body = r#"{"params": {"mode": "enumerate", "valence": 2}}"#;
    expect_code(&run_manifest("tree", body, &[]), 2, "valence 2 < 3");
    let body = r#"{"params": {"mode": "leafspace", "order": 4, "data": {"case": "positive", "tau": 9, "diagonals": [[0, 2]], "lengths": [1], "a0": 1, "a_last": 1}}}"#;
    expect_code(&run_manifest("tree", body, &[]), 2, "inconsistent lengths");
    let body = r#"{"params": {"mode": "leafspace", "order": 3, "data": {"case": "zero", "diagonals": [[0, 2]], "root_length": 1}}}"#;
    expect_code(&run_manifest("tree", body, &[]), 1, "takes no diagonals");
}

#[test]
fn dims_errors() {
    let tmp = TempDir::new().unwrap();
    expect_code(&folia(tmp.path(), &["dims", "--orders", "3"]), 1, "genus");
    expect_code(&folia(tmp.path(), &["dims", "--g", "2"]), 1, "pole orders");
    expect_code(&folia(tmp.path(), &["dims", "--g", "2", "--orders", "2"]), 2, "pole order 2 < 3");
}

#[test]
fn dims_example() {
    let tmp = TempDir::new().unwrap();
    let o = folia(tmp.path(), &["dims", "--g", "2", "--orders", "3"]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["chi"], 10);
    let o = run_manifest("dims", r#"{"params": {"genus": 0, "orders": [7]}}"#, &[]);
    assert_eq!(json(&o)["chi"], 2);
}

#[test]
fn decompose_example() {
    let tmp = TempDir::new().unwrap();
    manifest(tmp.path(), "m.json", &format!(r#"{{"differential": {Z2_MINUS_1}, "out": "res"}}"#));
    let o = folia(tmp.path(), &["decompose", "--manifest", "m.json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["strip_count"], 1);
    assert_eq!(v["half_plane_count"], 4);
    let w = v["skeleton"]["strips"][0]["width"].as_f64().unwrap();
    assert!((w - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    let svg = fs::read_to_string(tmp.path().join("res/decompose.svg")).unwrap();
    assert_eq!(svg.matches("class=\"region\"").count(), 4);
    assert!(svg.contains("id=\"legend\"") && svg.contains("id=\"scale-bar\""));

    let o = folia(tmp.path(), &["decompose", "--manifest", "m.json", "--out", "plain", "--svg", "off"]);
    assert_eq!(o.code, 0);
    assert!(!tmp.path().join("plain/decompose.svg").exists());
    assert!(tmp.path().join("plain/periods.csv").exists());
}

#[test]
fn decay_example_matches_closed_form() {
    let tmp = TempDir::new().unwrap();
    manifest(
        tmp.path(),
        "m.json",
        r#"{"params": {"boundary": {"cos": [[1, 1]]}, "lengths": [2, 4, 6, 8]}, "resolution": [257, 64]}"#,
    );
    let o = folia(tmp.path(), &["decay", "--manifest", "m.json", "--out", "o"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let csv = fs::read_to_string(tmp.path().join("o/decay.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("L,midline_max,ratio,dtheta_max,dtheta_ratio"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let exact = 1.0 / (r[0] / 2.0).cosh();
        assert!((r[1] - exact).abs() < 2e-3, "L = {}: {} vs {exact}", r[0], r[1]);
    }
}

#[test]
fn solve_dump_round_trips() {
    let tmp = TempDir::new().unwrap();
    manifest(
        tmp.path(),
        "m.json",
        r#"{"params": {"length": 2, "top": {"cos": [[2, 1]]}, "bottom": {"sin": [[1, 0.5]]}}}"#,
    );
    let o = folia(tmp.path(), &["solve", "--manifest", "m.json", "--out", "o", "--resolution", "33,32"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let bytes = fs::read(tmp.path().join("o/field.folh")).unwrap();
    let (nx, nt, values) = folia::harmonic::decode_folh(&bytes).unwrap();
    assert_eq!((nx, nt), (33, 32));
    let csv = fs::read_to_string(tmp.path().join("o/field.csv")).unwrap();
    let from_csv: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(from_csv.len(), values.len());
    for (a, b) in from_csv.iter().zip(&values) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    let summary = json(&o);
    assert_eq!(summary["boundary"], "dirichlet");
    assert!(summary["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn tree_outputs() {
    let tmp = TempDir::new().unwrap();
    manifest(
        tmp.path(),
        "m.json",
        r#"{"params": {"mode": "leafspace", "order": 5, "data": {"case": "zero", "diagonals": [[0, 2]], "lengths": [0.7], "root_length": 1.2}}}"#,
    );
    let o = folia(tmp.path(), &["tree", "--manifest", "m.json", "--out", "o"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["leaf_space"]["parameter_dimension"], 2);
    let dot = fs::read_to_string(tmp.path().join("o/tree.dot")).unwrap();
    assert!(dot.starts_with("graph tree {"));
    let svg = fs::read_to_string(tmp.path().join("o/tree.svg")).unwrap();
    assert_eq!(svg.matches("ray ").count(), 3);
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn identical_manifests_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("decompose", format!(r#"{{"differential": {Z2_MINUS_1}}}"#)),
        ("trace", format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"start": [0.2, 0.4]}}}}"#)),
        ("decay", r#"{"params": {"boundary": {"cos": [[1, 1], [3, 0.5]]}, "lengths": [2, 4]}}"#.to_string()),
        ("solve", r#"{"params": {"length": 1.5, "top": {"cos": [[1, 1]]}}}"#.to_string()),
    ];
    for (cmd, body) in cases {
        manifest(tmp.path(), "m.json", &body);
        let a = folia(tmp.path(), &[cmd, "--manifest", "m.json", "--out", "a"]);
        let b = folia_env(tmp.path(), &[cmd, "--manifest", "m.json", "--out", "b"], &[("FOLIA_NUM_THREADS", "1")]);
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(outputs(&tmp.path().join("a")), outputs(&tmp.path().join("b")), "{cmd}");
        fs::remove_dir_all(tmp.path().join("a")).unwrap();
        fs::remove_dir_all(tmp.path().join("b")).unwrap();
    }
}

#[test]
fn golden_outputs() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let tmp = TempDir::new().unwrap();
    let o = folia(tmp.path(), &["dims", "--g", "2", "--orders", "3,4"]);
    assert_eq!(o.stdout, fs::read_to_string(golden.join("dims.json")).unwrap());
    manifest(tmp.path(), "m.json", r#"{"params": {"mode": "enumerate", "valence": 5}}"#);
    let o = folia(tmp.path(), &["tree", "--manifest", "m.json"]);
    assert_eq!(o.stdout, fs::read_to_string(golden.join("tree_enumerate.json")).unwrap());
    manifest(tmp.path(), "m.json", &format!(r#"{{"differential": {Z2_MINUS_1}, "params": {{"pole": "inf"}}}}"#));
    let o = folia(tmp.path(), &["residue", "--manifest", "m.json"]);
    assert_eq!(o.stdout, fs::read_to_string(golden.join("residue.json")).unwrap());
}

#[test]
fn json_floats_round_trip() {
    let tmp = TempDir::new().unwrap();
    manifest(tmp.path(), "m.json", &format!(r#"{{"differential": {Z2_MINUS_1}}}"#));
    let o = folia(tmp.path(), &["decompose", "--manifest", "m.json"]);
    let v = json(&o);
    let w = v["widths"][0].as_f64().unwrap();
    assert!(o.stdout.contains(&folia::format::fmt_f64(w)));
    let again = folia::format::to_json(&v).unwrap();
    assert_eq!(again + "\n", o.stdout);
}
