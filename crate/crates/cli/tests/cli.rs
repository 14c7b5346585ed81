use std::process::{Command, Output};

fn inseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inseq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

#[test]
fn run_prints_terminated_header() {
    let o = inseq(&["run", "out.set:T ; !", "--inputs", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "TERMINATED out=T");
}

#[test]
fn run_dumps_registers_when_present() {
    let o = inseq(&["run", "-in:1.get ; out.set:T ; !", "--inputs", "F"]);
    assert_eq!(stdout(&o), "TERMINATED out=T\nout=T in:1=F");
}

#[test]
fn deadlock_is_not_an_error() {
    let o = inseq(&["run", "#0", "--inputs", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "DEADLOCK");
}

#[test]
fn json_run_record() {
    let o = inseq(&["run", "+in:1.get ; out.set:T ; !", "--inputs", "T", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "TERMINATED");
    assert_eq!(v["out"], true);
    assert_eq!(v["registers"]["in:1"], true);
    assert_eq!(v["steps"], 3);
}

#[test]
fn split_run_requires_splitting_class() {
    let ok = inseq(&["run-split", "split:1 ; -reply:1 ; ! ; out.set:T ; !"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("TERMINATED"));
    let bad = inseq(&["run", "aux:1.set:T ; !", "--split"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn satc_commands() {
    assert_eq!(stdout(&inseq(&["satc-eval", "TTF"])), "F");
    assert_eq!(stdout(&inseq(&["satc-eval", "TT"])), "T");
    let enc = inseq(&["satc-encode", "p cnf 1 1\n1 0\n"]);
    assert_eq!(enc.status.code(), Some(0));
    let bits = stdout(&enc);
    assert_eq!(stdout(&inseq(&["satc-eval", &bits])), "T");
    let built = inseq(&["satc-build", "3"]);
    assert!(stdout(&built).starts_with("split:1"));
}

#[test]
fn truthtable_marks_nontermination() {
    let o = inseq(&["truthtable", "+in:1.get ; #0 ; out.set:T ; !", "--n", "1"]);
    assert_eq!(stdout(&o), "T-");
}

#[test]
fn transform_trace() {
    let o = inseq(&["elim-setfalse", "out.set:T ; out.set:F ; !", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("input: out.set:T ; out.set:F ; !"));
    assert!(s.contains("output: "));
    assert!(s.contains("steps: "));
}

#[test]
fn file_arguments() {
    let dir = std::env::temp_dir().join(format!("inseq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.inseq");
    std::fs::write(&path, "out.set:T ; !\n").unwrap();
    let o = inseq(&["parse", &format!("@{}", path.display())]);
    assert_eq!(stdout(&o), "out.set:T ; !");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(inseq(&["parse", "nonsense"]).status.code(), Some(1));
    assert_eq!(inseq(&["satc-eval", "TXF"]).status.code(), Some(1));
    assert_eq!(inseq(&["run"]).status.code(), Some(2));
    assert_eq!(inseq(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn search_finds_short_sequence() {
    let o = inseq(&["search", "FT", "--max-length", "4"]);
    assert_eq!(stdout(&o), "+in:1.get ; out.set:T ; !");
}

#[test]
fn classify_json() {
    let o = inseq(&["classify", "aux:1.set:T ; #2 ; ! ; out.set:T ; !", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isbr"], true);
    assert_eq!(v["isbrna"], false);
    assert_eq!(v["max_jump"], 2);
    assert_eq!(v["terms"], 2);
}
