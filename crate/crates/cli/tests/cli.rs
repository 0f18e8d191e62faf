use std::path::Path;
use std::process::{Command, Output};

fn timenorm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timenorm"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const CORPUS: &str = "\
last october\tDATE\t2020-10\t2021-05-17
this month\tDATE\t2021-05\t2021-05-17
last year\tDATE\t2020\t2021-05-17
last week\tDATE\t2021-W19\t2021-05-17
today\tDATE\t2021-05-17\t2021-05-17
";

#[test]
fn capture_prints_sorted_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let out = timenorm(
        &["capture", "--base", "2021-05-17", "--target", "2020-10"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"(ToLast[year],ModifyEnum[October])"));
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted, "sequences must be printed in sorted order");
}

#[test]
fn learn_apply_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("corpus.tsv"), CORPUS).unwrap();

    let out = timenorm(
        &["learn", "--corpus", "corpus.tsv", "--format", "tsv", "--out", "rules.txt"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rules = std::fs::read_to_string(dir.path().join("rules.txt")).unwrap();
    assert!(rules.contains("last TIME_UNIT:$1\tInstant\t(ToLast[$1])"));

    let out = timenorm(
        &["apply", "--rules", "rules.txt", "--dct", "2021-05-17", "--expr", "last october"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "DATE\t2020-10\tvia=direct\n");

    let out = timenorm(
        &["eval", "--rules", "rules.txt", "--corpus", "corpus.tsv", "--format", "tsv",
          "--report", "json"],
        dir.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["value_accuracy"], 1.0);
    assert_eq!(report["type_accuracy"], 1.0);
    assert_eq!(report["errors"]["unseen_pattern"], 0);
}

#[test]
fn apply_batch_reports_failures_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("corpus.tsv"), CORPUS).unwrap();
    timenorm(
        &["learn", "--corpus", "corpus.tsv", "--format", "tsv", "--out", "rules.txt"],
        dir.path(),
    );
    std::fs::write(
        dir.path().join("batch.tsv"),
        "last october\t2021-05-17\nutter gibberish here\t2021-05-17\n",
    )
    .unwrap();
    let out = timenorm(
        &["apply", "--rules", "rules.txt", "--batch", "batch.tsv"],
        dir.path(),
    );
    assert!(out.status.success(), "failures in batch mode still exit 0");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "DATE\t2020-10\tvia=direct");
    assert!(lines[1].starts_with("utter gibberish here\tFAILED\t"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = timenorm(&["apply", "--rules", "nope.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = timenorm(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unreadable_corpus_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = timenorm(
        &["learn", "--corpus", "missing.tsv", "--format", "tsv", "--out", "rules.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_directories_are_walked() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("docs");
    std::fs::create_dir(&sub).unwrap();
    std::fs::write(sub.join("a.tsv"), "last october\tDATE\t2020-10\t2021-05-17\n").unwrap();
    std::fs::write(sub.join("b.tsv"), "today\tDATE\t2021-05-17\t2021-05-17\n").unwrap();
    let out = timenorm(
        &["learn", "--corpus", "docs", "--format", "tsv", "--out", "rules.txt"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rules = std::fs::read_to_string(dir.path().join("rules.txt")).unwrap();
    assert!(rules.contains("last MONTH:$1"));
    assert!(rules.contains("today"));
}
