use std::io::Write;
use std::process::{Command, Output, Stdio};

use exact_nim::cli::OutputRecord;
use exact_nim::oracle::sg_brute;
use exact_nim::{GameSpec, Position};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exact-nim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> OutputRecord {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rec: OutputRecord = serde_json::from_str(text.trim()).expect("one JSON object");
    assert_eq!(serde_json::to_string(&rec).unwrap(), text.trim());
    rec
}

fn play(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = bin()
        .arg("play")
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    (
        o.status.code().unwrap(),
        stdout(&o),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

#[test]
fn sg_exact_with_params() {
    let rec = json(&["sg", "--ruleset", "exact", "--k", "2", "--pos", "3,3,4,4"]);
    let spec = GameSpec::exact(4, 2).unwrap();
    let oracle = sg_brute(&spec, &Position::from([3, 3, 4, 4])).unwrap();
    assert_eq!(rec.result["sg"], oracle);
    assert_eq!(rec.result["sg"], 2);
    let p = &rec.result["params"];
    assert_eq!((p["u"].as_u64(), p["m"].as_u64(), p["y"].as_u64()), (Some(7), Some(3), Some(1)));
    assert_eq!((p["z"].as_u64(), p["v"].as_u64()), (Some(2), Some(2)));
    assert_eq!(p["type"], "II");
}

#[test]
fn sg_moore_reports_m() {
    let rec = json(&["sg", "--ruleset", "moore", "--k", "2", "--pos", "2,3,6"]);
    assert_eq!(rec.result["m"], 10);
    assert_eq!(rec.result["sg"], serde_json::Value::Null);
}

#[test]
fn sg_open_case_exits_2() {
    let o = run(&["sg", "--ruleset", "exact", "--k", "2", "--pos", "1,2,3,4,5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported"));
}

#[test]
fn parse_errors_exit_1() {
    assert_eq!(run(&["sg", "--k", "2", "--pos", "1,-2"]).status.code(), Some(1));
    assert_eq!(run(&["tetris", "--k", "2"]).status.code(), Some(1));
    assert_eq!(run(&["sg", "--k", "5", "--pos", "1,2"]).status.code(), Some(1));
    assert_eq!(
        run(&["move", "--k", "2", "--pos", "1,1,2,2", "--target-sg", "0", "--target-tetris", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn tetris_examples() {
    let rec = json(&["tetris", "--k", "4", "--pos", "1,2,2,3,4,4,7"]);
    assert_eq!(rec.result["t"], 5);
    assert_eq!(rec.result["xbar"], serde_json::json!([0, 0, 0, 5, 5, 6, 7]));
    assert_eq!(json(&["tetris", "--k", "2", "--pos", "0,0,0,0"]).result["t"], 0);
    assert_eq!(json(&["tetris", "--k", "2", "--pos", "1,2,3,4"]).result["t"], 5);
}

#[test]
fn move_examples() {
    let rec = json(&["move", "--ruleset", "exact", "--k", "2", "--pos", "1,1,2,2", "--target-sg", "0"]);
    assert_eq!(rec.result["achieved"], 0);
    let succ: Vec<u64> = serde_json::from_value(rec.result["successor"].clone()).unwrap();
    let spec = GameSpec::exact(4, 2).unwrap();
    assert_eq!(sg_brute(&spec, &Position::new(succ)).unwrap(), 0);

    let rec = json(&["move", "--ruleset", "moore", "--k", "2", "--pos", "2,3,6", "--target-m", "0"]);
    assert_eq!(rec.result["achieved"], 0);
    let moved = rec.result["move"].as_array().unwrap();
    assert!((1..=2).contains(&moved.len()));

    let rec = json(&["move", "--k", "4", "--pos", "1,2,2,3,4,4,7", "--target-tetris", "2"]);
    assert_eq!(rec.result["achieved"], 2);

    let o = run(&["move", "--ruleset", "exact", "--k", "2", "--pos", "0,0,0,0", "--target-sg", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let rec = json(&["verify", "--ruleset", "exact", "--n", "4", "--k", "2", "--max", "6", "--check", "sg"]);
    assert_eq!(rec.result["positions"], 2401);
    assert_eq!(rec.result["mismatches"], 0);
    let rec = json(&["verify", "--ruleset", "moore", "--n", "3", "--k", "2", "--max", "8", "--check", "moore01"]);
    assert_eq!(rec.result["mismatches"], 0);
    let rec = json(&["verify", "--ruleset", "exact", "--n", "4", "--k", "1", "--max", "4", "--check", "sg"]);
    assert_eq!(rec.result["mismatches"], 0);
    for check in ["moves", "corollary3", "tetris"] {
        let rec = json(&["verify", "--n", "4", "--k", "2", "--max", "3", "--check", check]);
        assert_eq!(rec.result["mismatches"], 0, "{check}");
    }
    let rec = json(&["verify", "--ruleset", "moore", "--n", "3", "--k", "2", "--max", "4", "--check", "moves"]);
    assert_eq!(rec.result["mismatches"], 0);
}

#[test]
fn verify_budget_exits_2() {
    let o = run(&["verify", "--n", "6", "--k", "3", "--max", "9", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let p = path.to_str().unwrap();
    let rec = json(&["table", "--ruleset", "exact", "--n", "4", "--k", "2", "--max", "3", "--format", "csv", "--out", p]);
    assert_eq!(rec.result["rows"], 35);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pos,sg,source"));
    assert_eq!(lines.count(), 35);

    let path = dir.path().join("m.csv");
    let p = path.to_str().unwrap();
    json(&["table", "--ruleset", "moore", "--n", "3", "--k", "2", "--max", "3", "--out", p]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "0;0;2,2,oracle"));

    let path = dir.path().join("t.json");
    let p = path.to_str().unwrap();
    json(&["table", "--n", "3", "--k", "2", "--max", "2", "--format", "json", "--out", p]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);
    assert_eq!(doc["rows"][0]["source"], "formula");
}

#[test]
fn table_io_failure_exits_1() {
    let o = run(&["table", "--n", "2", "--k", "1", "--max", "2", "--out", "/nonexistent/dir/t.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degseq_examples() {
    let rec = json(&["degseq", "--k", "2", "--pos", "1,1,1,1", "--realize"]);
    assert_eq!(rec.result["realizable"], true);
    assert_eq!(rec.result["edges"].as_array().unwrap().len(), 2);
    let rec = json(&["degseq", "--k", "2", "--pos", "3,1,0,0"]);
    assert_eq!(rec.result["realizable"], false);
    let rec = json(&["degseq", "--k", "3", "--pos", "2,2,2", "--realize"]);
    assert_eq!(rec.result["edges"], serde_json::json!([[1, 2, 3], [1, 2, 3]]));
    let o = run(&["degseq", "--k", "3", "--pos", "2,2,2", "--realize"]);
    assert_eq!(stdout(&o).lines().filter(|l| *l == "1 2 3").count(), 2);
    let o = run(&["degseq", "--k", "2", "--pos", "3,1,0,0", "--realize"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn play_engine_reaches_p_position() {
    let (code, out, _) = play(&["--k", "2", "--pos", "1,1,2,2", "--engine-first"], "");
    assert_eq!(code, 0);
    let after = out
        .lines()
        .filter_map(|l| l.strip_prefix("position: "))
        .nth(1)
        .expect("engine moved");
    let spec = GameSpec::exact(4, 2).unwrap();
    assert_eq!(sg_brute(&spec, &after.parse().unwrap()).unwrap(), 0);
}

#[test]
fn play_rejects_and_accepts() {
    let (code, out, err) = play(&["--k", "2", "--pos", "1,1,2,2"], "1=0\n1=0 2=0\n");
    assert_eq!(code, 0);
    assert!(err.contains("exactly 2 piles"), "{err}");
    assert!(out.contains("position: 0,0,2,2"), "{out}");
    assert!(out.contains("engine:"), "{out}");
}

#[test]
fn play_to_the_end() {
    // (1,1,0,0): the human empties both piles and wins
    let (code, out, _) = play(&["--k", "2", "--pos", "1,1,0,0"], "1=0 2=0\n");
    assert_eq!(code, 0);
    assert!(out.contains("you win"), "{out}");
    let (code, out, _) = play(&["--k", "2", "--pos", "3,1,1,2", "--engine-first"], "");
    assert_eq!(code, 0);
    assert!(out.contains("engine:"));
}
