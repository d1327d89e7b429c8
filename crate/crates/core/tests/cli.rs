use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn framephase(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framephase"))
        .args(args)
        .current_dir(dir)
        .env_remove("FRAMEPHASE_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const BASIS: &str = r#"{"field":"real","n":2,"m":2,"vectors":[[1,0],[0,1]]}"#;
const THREE: &str = r#"{"field":"real","n":2,"m":3,"vectors":[[1,0],[0,1],[1,1]]}"#;

#[test]
fn gen_writes_full_spark_frame() {
    let dir = tempfile::tempdir().unwrap();
    let o = framephase(dir.path(), &["gen", "--field", "real", "--n", "2", "--m", "3", "--kind", "full-spark", "--out", "f.json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(v["vectors"].as_array().unwrap().len(), 3);
    assert!(stderr(&o).contains("frame bounds"));
}

#[test]
fn gen_rejects_bad_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let o = framephase(dir.path(), &["gen", "--n", "2", "--m", "1", "--out", "f.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("M ≥ N required"));
    let o = framephase(dir.path(), &["gen", "--n", "2", "--m", "3", "--kind", "repeated-tail", "--out", "f.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("M ≥ 2N"));
    let o = framephase(dir.path(), &["gen", "--field", "real", "--n", "4", "--kind", "gabor", "--out", "f.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let o = framephase(dir.path(), &["gen", "--field", "complex", "--n", "3", "--m", "7", "--seed", "5", "--out", name]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(dir.path().join("a.json")).unwrap(), std::fs::read(dir.path().join("b.json")).unwrap());
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "basis.json", BASIS);
    let o = framephase(dir.path(), &["certify", "basis.json"]);
    assert_eq!(code(&o), 2);
    let v = stdout_json(&o);
    assert_eq!(v["verdict"], "NotInjective");
    assert_eq!(v["failing_subset"], serde_json::json!([1]));
    assert!(v["witness"]["x"].is_array());

    framephase(dir.path(), &["gen", "--n", "2", "--m", "3", "--kind", "full-spark", "--out", "fs.json"]);
    let o = framephase(dir.path(), &["certify", "fs.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["verdict"], "Injective");

    framephase(dir.path(), &["gen", "--field", "complex", "--n", "3", "--m", "5", "--out", "c.json"]);
    let o = framephase(dir.path(), &["certify", "c.json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["verdict"], "NotInjective");
    assert!(stderr(&o).contains("2N = 6"));

    framephase(dir.path(), &["gen", "--field", "complex", "--n", "2", "--m", "5", "--out", "c5.json"]);
    let o = framephase(dir.path(), &["certify", "c5.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["verdict"], "NecessaryConditionsPass");
    assert!(stderr(&o).contains("unknown regime"));
}

#[test]
fn certify_reports_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"field":"real","n":2,"m":3,"vectors":[[1,0]]}"#);
    let o = framephase(dir.path(), &["certify", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("m = 3"));
    let o = framephase(dir.path(), &["certify", "missing.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn measure_examples() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "three.json", THREE);
    let o = framephase(dir.path(), &["measure", "three.json", "--x", "1,2", "--out", "m.json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(v["magnitudes"], serde_json::json!([1.0, 2.0, 3.0]));

    framephase(dir.path(), &["measure", "three.json", "--x", "0,0", "--out", "z.json"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("z.json")).unwrap()).unwrap();
    assert_eq!(v["magnitudes"], serde_json::json!([0.0, 0.0, 0.0]));

    write(dir.path(), "x.json", "[1, 2]");
    let o = framephase(dir.path(), &["measure", "three.json", "--x-file", "x.json", "--out", "m2.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(dir.path().join("m.json")).unwrap(), std::fs::read(dir.path().join("m2.json")).unwrap());

    let o = framephase(dir.path(), &["measure", "three.json", "--x", "1,2", "--x-file", "x.json", "--out", "m3.json"]);
    assert_eq!(code(&o), 1);
    let o = framephase(dir.path(), &["measure", "three.json", "--x", "1,2,3", "--out", "m3.json"]);
    assert_eq!(code(&o), 1);
    assert!(!dir.path().join("m3.json").exists());
}

#[test]
fn reconstruct_round_trip_and_ambiguity() {
    let dir = tempfile::tempdir().unwrap();
    framephase(dir.path(), &["gen", "--n", "3", "--m", "5", "--seed", "2", "--out", "f.json"]);
    framephase(dir.path(), &["measure", "f.json", "--x", "-1,0.5,2", "--out", "m.json"]);
    let o = framephase(dir.path(), &["reconstruct", "f.json", "m.json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["status"], "Unique");
    let ray: Vec<f64> = v["rays"][0].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    // canonical representative starts positive, so it is −x
    for (r, x) in ray.iter().zip([1.0, -0.5, -2.0]) {
        assert!((r - x).abs() < 1e-9);
    }

    write(dir.path(), "basis.json", BASIS);
    framephase(dir.path(), &["measure", "basis.json", "--x", "1,1", "--out", "mb.json"]);
    let o = framephase(dir.path(), &["reconstruct", "basis.json", "mb.json"]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout_json(&o)["rays"].as_array().unwrap().len(), 2);
}

#[test]
fn doctored_measurements_have_no_solution() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "three.json", THREE);
    // (1, 2, 3) is consistent; adding 1 to the last entry leaves W
    write(dir.path(), "m.json", r#"{"m":3,"magnitudes":[1.0,2.0,4.0]}"#);
    let o = framephase(dir.path(), &["reconstruct", "three.json", "m.json"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout_json(&o)["status"], "NoSolution");

    write(dir.path(), "short.json", r#"{"m":2,"magnitudes":[1.0,2.0]}"#);
    let o = framephase(dir.path(), &["reconstruct", "three.json", "short.json"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn complex_reconstruction_is_heuristic() {
    let dir = tempfile::tempdir().unwrap();
    framephase(dir.path(), &["gen", "--field", "complex", "--n", "2", "--m", "6", "--seed", "1", "--out", "c.json"]);
    framephase(dir.path(), &["measure", "c.json", "--x", "0.5-1i,2", "--out", "m.json"]);
    let o = framephase(dir.path(), &["reconstruct", "c.json", "m.json", "--restarts", "20"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["status"], "HeuristicSuccess");

    write(dir.path(), "bad.json", r#"{"m":6,"magnitudes":[1.0,0.1,3.0,0.2,1.5,0.05]}"#);
    let o = framephase(dir.path(), &["reconstruct", "c.json", "bad.json", "--restarts", "3", "--max-iters", "2000"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout_json(&o)["status"], "HeuristicFail");
}

#[test]
fn witness_command() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "basis.json", BASIS);
    let o = framephase(dir.path(), &["witness", "basis.json", "--subset", "2", "--out", "w.json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["failing_subset"], serde_json::json!([2]));
    assert_eq!(std::fs::read(dir.path().join("w.json")).unwrap(), o.stdout);

    write(dir.path(), "three.json", THREE);
    let o = framephase(dir.path(), &["witness", "three.json"]);
    assert_eq!(code(&o), 2);
    let o = framephase(dir.path(), &["witness", "three.json", "--subset", "1"]);
    assert_eq!(code(&o), 1);
    let o = framephase(dir.path(), &["witness", "three.json", "--subset", "4"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn experiment_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = framephase(dir.path(), &["experiment", "--preset", "real-genericity", "--out-dir", "r", "--trials", "10"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("r/real-genericity.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "field,N,M,trials,inj_rate,rec_rate,mean_ms,seed");
    let ns: Vec<&str> = rows[1..].iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    for n in ["2", "3", "4", "5"] {
        assert!(ns.contains(&n));
    }

    let o = framephase(dir.path(), &["experiment", "--preset", "sharpness", "--out-dir", "s", "--trials", "10"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s/sharpness.json")).unwrap()).unwrap();
    for cell in report["cells"].as_array().unwrap() {
        assert_eq!(cell["not_injective_rate"], 1.0);
    }

    let o = framephase(dir.path(), &["experiment", "--preset", "nonsense", "--out-dir", "x"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_and_help() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&framephase(dir.path(), &["--help"])), 0);
    assert_eq!(code(&framephase(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&framephase(dir.path(), &[])), 1);
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "three.json", THREE);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_framephase"))
            .args(["certify", "three.json"])
            .current_dir(dir.path())
            .env("FRAMEPHASE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("zero")), 1);
    assert_eq!(code(&run("0")), 1);
}
