use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn curbkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curbkit")).args(args).output().expect("run curbkit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const MERGE_GAME: &str = "curbkit-game v1\n2 2\n1 1  0 0\n0 1  1 0\n";
const PENNIES: &str = "curbkit-game v1\n2 2\n0 1  1 0\n1 0  0 1\n";

fn generated(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend(["--out", path.to_str().unwrap()]);
    let out = curbkit(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generate_gamma_writes_the_reference_table() {
    let out = curbkit(&["generate", "gamma", "--rows", "3", "--cols", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "curbkit-game v1\n3 4\n0 1  1 0  0 1/2  1 1/4\n1 0  0 1  1 1/2  0 3/4\n1/3 1/2  2/3 1/2  -3 -3  -3 -4\n"
    );
}

#[test]
fn generate_omega_uses_default_parameters() {
    let text = stdout(&curbkit(&["generate", "omega", "--k", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "4 4");
    assert_eq!(lines[2], "0 1  1 0  1/10 -10000  1/10 -10000");
}

#[test]
fn generate_random_is_seeded() {
    let a = curbkit(&["generate", "random", "--rows", "5", "--cols", "5", "--seed", "7"]);
    let b = curbkit(&["generate", "random", "--rows", "5", "--cols", "5", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = curbkit(&["generate", "random", "--rows", "5", "--cols", "5", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generate_without_seed_reports_the_one_used() {
    let out = curbkit(&["generate", "random", "--rows", "2", "--cols", "2"]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    let seed = stderr.trim().strip_prefix("seed: ").expect("seed reported").to_string();
    let again = curbkit(&["generate", "random", "--rows", "2", "--cols", "2", "--seed", &seed]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn generate_parameter_errors_exit_2() {
    assert_eq!(curbkit(&["generate", "gamma", "--rows", "1", "--cols", "4"]).status.code(), Some(2));
    assert_eq!(curbkit(&["generate", "gamma", "--rows", "3"]).status.code(), Some(2));
    let padded = ["generate", "padded", "--rows", "3", "--cols", "4", "--block-rows", "2", "--block-cols", "2"];
    assert_eq!(curbkit(&padded).status.code(), Some(2));
    assert_eq!(curbkit(&["generate", "covariant", "--rows", "2", "--cols", "2", "--rho", "2"]).status.code(), Some(2));
    assert_eq!(curbkit(&["generate", "nonsense"]).status.code(), Some(2));
}

#[test]
fn solve_containing_on_merge_example() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "merge.txt", MERGE_GAME);
    let out = curbkit(&["solve", game.to_str().unwrap(), "--mode", "containing", "--seed-strategy", "r:2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let set = &doc["sets"][0];
    assert_eq!(set["rows"], serde_json::json!([1, 2]));
    assert_eq!(set["cols"], serde_json::json!([1]));
    assert_eq!(set["size"], 3);
    assert_eq!(set["seed"], "r:2");
}

#[test]
fn solve_small_on_merge_example() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "merge.txt", MERGE_GAME);
    let out = curbkit(&["solve", game.to_str().unwrap(), "--mode", "small"]);
    assert_eq!(stdout(&out), "mode: small\nset 1: rows {1} cols {1}  size 2  lfp_calls 0\nlfp_calls: 0\n");
}

#[test]
fn solve_all_on_omega() {
    let dir = tempfile::tempdir().unwrap();
    let game = generated(dir.path(), "omega.txt", &["omega", "--k", "2"]);
    let out = curbkit(&["solve", game.to_str().unwrap(), "--mode", "all", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["sets"].as_array().unwrap().len(), 1);
    assert_eq!(doc["sets"][0]["size"], 8);
    assert_eq!(doc["numeric_mode"], "rational");
}

#[test]
fn solve_one_reports_its_seed() {
    let dir = tempfile::tempdir().unwrap();
    let game = generated(
        dir.path(),
        "padded.txt",
        &["padded", "--rows", "4", "--cols", "4", "--block-rows", "2", "--block-cols", "2"],
    );
    let out = curbkit(&["solve", game.to_str().unwrap(), "--mode", "one", "--rng-seed", "5", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rng_seed"], 5);
    assert_eq!(doc["sets"][0]["size"], 4);
}

#[test]
fn solve_float_game() {
    let dir = tempfile::tempdir().unwrap();
    let game = generated(dir.path(), "random.txt", &["random", "--rows", "4", "--cols", "4", "--seed", "1"]);
    let out = curbkit(&["solve", game.to_str().unwrap(), "--mode", "all", "--json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["numeric_mode"], "float");
}

#[test]
fn solve_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "merge.txt", MERGE_GAME);
    let game = game.to_str().unwrap();
    assert_eq!(curbkit(&["solve", game, "--mode", "bogus"]).status.code(), Some(2));
    assert_eq!(curbkit(&["solve", game, "--mode", "containing"]).status.code(), Some(2));
    assert_eq!(curbkit(&["solve", game, "--mode", "containing", "--seed-strategy", "x:1"]).status.code(), Some(2));
    assert_eq!(curbkit(&["solve", game, "--mode", "containing", "--seed-strategy", "r:0"]).status.code(), Some(2));
    assert_eq!(curbkit(&["solve", game, "--mode", "containing", "--seed-strategy", "c:3"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "curbkit-game v1\n1 1\n1/2 0.5\n");
    assert_eq!(curbkit(&["solve", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(curbkit(&["nash", bad.to_str().unwrap()]).status.code(), Some(3));
    let missing = dir.path().join("missing.txt");
    assert_eq!(curbkit(&["solve", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn nash_on_matching_pennies() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "mp.txt", PENNIES);
    let out = curbkit(&["nash", game.to_str().unwrap()]);
    assert_eq!(stdout(&out), "equilibrium 1: r:{1:1/2, 2:1/2} c:{1:1/2, 2:1/2}  regret 0\n");
}

#[test]
fn nash_with_preprocessing_on_omega() {
    let dir = tempfile::tempdir().unwrap();
    let game = generated(dir.path(), "omega.txt", &["omega", "--k", "2"]);
    let out = curbkit(&["nash", game.to_str().unwrap(), "--preprocess-curb", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["curb"]["size"], 8);
    let eq = &doc["equilibria"][0];
    assert_eq!(eq["row"], serde_json::json!({"1": "1/2", "2": "1/2"}));
    assert_eq!(eq["col"], serde_json::json!({"1": "1/2", "2": "1/2"}));
    assert_eq!(eq["regret"], "0");
}

#[test]
fn nash_with_preprocessing_on_padded_game() {
    let dir = tempfile::tempdir().unwrap();
    let game = generated(
        dir.path(),
        "padded.txt",
        &["padded", "--rows", "6", "--cols", "6", "--block-rows", "2", "--block-cols", "2"],
    );
    let text = stdout(&curbkit(&["nash", game.to_str().unwrap(), "--preprocess-curb"]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("curb: rows {1, 2} cols {1, 2}  size 4"), "{text}");
    assert_eq!(lines[1], "equilibrium 1: r:{1:1/2, 2:1/2} c:{1:1/2, 2:1/2}  regret 0");
}

#[test]
fn nash_support_cap_and_all() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "mp.txt", PENNIES);
    let capped = stdout(&curbkit(&["nash", game.to_str().unwrap(), "--max-support", "1"]));
    assert_eq!(capped, "no equilibrium found\n");
    let coordination = write(dir.path(), "co.txt", "curbkit-game v1\n2 2\n1 1  0 0\n0 0  1 1\n");
    let all = stdout(&curbkit(&["nash", coordination.to_str().unwrap(), "--all"]));
    assert_eq!(all.lines().count(), 3, "{all}");
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = curbkit(&[
        "bench",
        "--experiment",
        "distribution",
        "--family",
        "gamma",
        "--rows",
        "3",
        "--cols",
        "4",
        "--sizes",
        "7",
        "--instances",
        "5",
        "--rng-seed",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("game_id,family,n,smallest_curb_size,lfp_calls,wall_time"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.split(',').nth(3) == Some("7")));
}

#[test]
fn bench_runtime_columns_and_errors() {
    let out = curbkit(&["bench", "--experiment", "runtime", "--sizes", "6", "--instances", "2", "--rng-seed", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("game_id,family,n,algorithm,wall_time,lfp_calls\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    let bad = curbkit(&["bench", "--instances", "0", "--rng-seed", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = curbkit(&["bench", "--algorithms", "fast_mc", "--rng-seed", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}
