use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIVE_POINT: &str = r#"{"m": 2, "points": [[0, 0], [7, 0], [5, -1], [3, -3], [11, 2]]}"#;
const PASSING: &str = r#"{"m": 2, "points": [[19, -4], [2, 13], [-19, 9], [-5, -17], [-10, -13]]}"#;
// PASSING rotated by (3/5, 4/5), shifted by (5, -2) and relabeled
const ROTATED: &str = r#"{"m": 2, "points": [["-21/5", "37/5"], ["47/5", "-89/5"], ["78/5", "-81/5"], ["98/5", "54/5"], ["-68/5", "-59/5"]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distrecon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn distances_of_the_square() {
    let dir = TempDir::new().unwrap();
    let sq = file(&dir, "sq.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");
    let o = run(&["distances", s(&sq)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 ×4, 2 ×2"), "{}", stdout(&o));
    let o = run(&["distances", s(&sq), "--sqrt"]);
    assert!(stdout(&o).contains("1.41421"));
    let j = json_of(&run(&["--format", "json", "distances", s(&sq)]));
    assert_eq!(j["total"], 6);
}

#[test]
fn five_point_example_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "five.json", FIVE_POINT);
    let o = run(&["test", s(&p)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("verdict: fails"));
    assert!(text.contains("repeated distances: no"));
    let j = json_of(&run(&["--format", "json", "test", s(&p)]));
    assert_eq!(j["verdict"], "FailsTest");
    assert_eq!(j["witness"]["g"], "0");
    assert_eq!(j["witness"]["position"], j["combos_checked"]);
}

#[test]
fn passing_configuration_exits_zero() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "pass.json", PASSING);
    let o = run(&["test", s(&p)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("combinations checked: 100800 of 100800"));
    let o = run(&["test", s(&p), "--float"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["test", s(&p), "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn small_and_malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let tri = file(&dir, "tri.csv", "0,0\n1,0\n0,1\n");
    let o = run(&["test", s(&tri)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("3 points: always reconstructible"), "{}", stderr(&o));
    let bad = file(&dir, "bad.json", "{\"points\": [[0, 0], [1]]}");
    assert_eq!(run(&["test", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["test", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "lattice", "--N", "0"]).status.code(), Some(2));
}

#[test]
fn compare_modes() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "p.json", PASSING);
    let q = file(&dir, "q.json", ROTATED);
    let five = file(&dir, "five.json", FIVE_POINT);
    assert_eq!(run(&["compare", s(&p), s(&q)]).status.code(), Some(0));
    assert_eq!(run(&["compare", s(&p), s(&five)]).status.code(), Some(1));
    let o = run(&["compare", s(&p), s(&q), "--mode", "orientation"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("SameSe2"));

    let mirrored = file(&dir, "m.json", r#"{"points": [[19, 4], [2, -13], [-19, -9], [-5, 17], [-10, 13]]}"#);
    let o = run(&["compare", s(&p), s(&mirrored), "--mode", "orientation"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MirrorPair"));

    let scaled = file(&dir, "s.json", r#"{"points": [[38, -8], [4, 26], [-38, 18], [-10, -34], [-20, -26]]}"#);
    assert_eq!(run(&["compare", s(&p), s(&scaled)]).status.code(), Some(1));
    let j = json_of(&run(&["--format", "json", "compare", s(&p), s(&scaled), "--mode", "similarity"]));
    assert_eq!(j["match"], true);
}

#[test]
fn lattice_and_counts() {
    let o = run(&["experiment", "lattice", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1820 / 1636 / 1748"));
    assert!(stdout(&o).contains("112/184 = 60.9%"));
    let o = run(&["--format", "csv", "experiment", "counts", "--n", "5,6"]);
    assert_eq!(stdout(&o), "n,combinations\n5,100800\n6,2059200\n");
    let j = json_of(&run(&["--format", "json", "experiment", "random", "--trials", "100", "--seed", "1"]));
    assert_eq!(j["trials"], 100);
    assert_eq!(j["seed"], 1);
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "five.json", FIVE_POINT);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v
    };
    let one = strip(json_of(&run(&["--threads", "1", "--format", "json", "test", s(&p), "--full"])));
    let four = strip(json_of(&run(&["--threads", "4", "--format", "json", "test", s(&p), "--full"])));
    assert_eq!(one, four);
    assert_eq!(one["combos_checked"], 100_800);
}

#[test]
fn report_file_follows_extension() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "five.json", FIVE_POINT);
    let json_out = dir.path().join("r.json");
    let csv_out = dir.path().join("r.csv");
    run(&["test", s(&p), "--out", s(&json_out)]);
    run(&["test", s(&p), "--out", s(&csv_out)]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "FailsTest");
    assert!(std::fs::read_to_string(&csv_out).unwrap().starts_with("verdict,certified,"));
}
