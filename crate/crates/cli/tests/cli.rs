use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/mathematics").join(name)
}

fn citenv(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citenv"))
        .arg(args[0])
        .arg("--registry")
        .arg(fixture("journals.csv"))
        .arg("--edges")
        .arg(fixture("edges.csv"))
        .arg("--out")
        .arg(out)
        .args(&args[1..])
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn map_writes_the_artifact_tree() {
    let tmp = tempfile::tempdir().unwrap();
    let o = citenv(&["map", "--year", "2004", "--seed", "jme"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = tmp.path().join("jme/cited/2004");
    for name in ["local.txt", "cosine.txt", "impact.txt", "map.net", "map.svg"] {
        assert!(dir.join(name).is_file(), "{name}");
    }
    let impact = fs::read_to_string(dir.join("impact.txt")).unwrap();
    let row = impact.lines().find(|l| l.starts_with("jme\t")).unwrap();
    assert!(row.split('\t').any(|f| f == "96%"), "{row}");
}

#[test]
fn degenerate_map_warns_but_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let o = citenv(&["map", "--year", "2004", "--seed", "jme", "--mode", "citing"], tmp.path());
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: degenerate"));
    assert!(tmp.path().join("jme/citing/2004/map.svg").is_file());
}

#[test]
fn unknown_seed_exits_with_data_code_and_leaves_no_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = citenv(&["map", "--year", "2004", "--seed", "nobody"], &out);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nobody"));
    assert!(!out.exists());
}

#[test]
fn malformed_edges_exit_with_parse_code_and_line() {
    let tmp = tempfile::tempdir().unwrap();
    let edges = tmp.path().join("bad.csv");
    fs::write(&edges, "citing_id,cited_id,count,year\njme,jme,273,2004\njme,bnu,many,2004\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_citenv"))
        .args(["map", "--year", "2004", "--seed", "jme"])
        .arg("--registry")
        .arg(fixture("journals.csv"))
        .arg("--edges")
        .arg(&edges)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_with_io_code() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_citenv"))
        .args(["batch", "--year", "2004", "--registry", "/nonexistent/journals.csv", "--edges", "x.csv"])
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn compare_prints_the_within_share_change() {
    let tmp = tempfile::tempdir().unwrap();
    let o = citenv(&["compare", "--seed", "jme", "--year", "2003", "--year", "2004"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l == "jme\t92%\t96%"), "{}", stdout(&o));
    let o = citenv(&["compare", "--seed", "jme", "--year", "2003"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn split_prints_percentages() {
    let tmp = tempfile::tempdir().unwrap();
    let o = citenv(&["split", "--year", "2004", "--seed", "ams-c", "--total", "1209"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("domestic\t112\t9%"), "{text}");
    assert!(text.contains("international\t1097\t91%"), "{text}");
    let o = citenv(&["split", "--year", "2004", "--seed", "ams-c", "--total", "-5"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn batch_writes_a_summary_and_honours_the_thread_cap() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_citenv"))
        .env("CITENV_THREADS", "2")
        .args(["batch", "--year", "2003"])
        .arg("--registry")
        .arg(fixture("journals.csv"))
        .arg("--edges")
        .arg(fixture("edges.csv"))
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = fs::read_to_string(tmp.path().join("summary.tsv")).unwrap();
    assert_eq!(summary.lines().count(), 18);
    assert!(summary.lines().any(|l| l.starts_with("jme\t6\t0\tno\tok")), "{summary}");
}

#[test]
fn threshold_flag_changes_membership() {
    let tmp = tempfile::tempdir().unwrap();
    let o = citenv(&["map", "--year", "2003", "--seed", "jme", "--threshold", "0.015"], tmp.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("\t5 members"), "{}", stdout(&o));
    let o = citenv(&["map", "--year", "2003", "--seed", "jme", "--threshold", "1.5"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threshold"), "{}", stderr(&o));
}
