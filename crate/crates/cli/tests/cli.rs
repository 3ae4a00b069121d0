use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const READ_EXEL: &str = "import pandas as pd\ndf = pd.read_exel('data.csv')\n";

fn kchlint(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kchlint"))
        .args(args)
        .current_dir(dir)
        .env_remove("KCHLINT_KB_PATH")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn workspace(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn manifests() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/manifests")
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/corpus")
}

#[test]
fn check_clean_file_is_silent() {
    let dir = workspace(&[("ok.py", "import numpy as np\nprint(np.mean([1, 2]))\n")]);
    let out = kchlint(dir.path(), &["check", "ok.py"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn check_reports_unknown_api() {
    let dir = workspace(&[("bad.py", READ_EXEL)]);
    let out = kchlint(dir.path(), &["check", "bad.py"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("bad.py:2:5: UnknownApi "), "{text}");
    assert!(text.contains("[use pd.read_csv]"));
}

#[test]
fn check_missing_file_is_an_error() {
    let dir = workspace(&[]);
    let out = kchlint(dir.path(), &["check", "absent.py"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("absent.py"));
}

#[test]
fn check_syntax_error_is_an_error() {
    let dir = workspace(&[("broken.py", "def f(:\n")]);
    assert_eq!(code(&kchlint(dir.path(), &["check", "broken.py"])), 2);
}

#[test]
fn check_json_is_stable_and_in_input_order() {
    let dir = workspace(&[("a.py", READ_EXEL), ("b.py", "x = np.arrya([1])\n"), ("c.py", "y = 1\n")]);
    let args = ["--format", "json", "check", "b.py", "c.py", "a.py"];
    let first = kchlint(dir.path(), &args);
    let second = kchlint(dir.path(), &args);
    assert_eq!(code(&first), 1);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let files: Vec<&str> = v.as_array().unwrap().iter().map(|d| d["file"].as_str().unwrap()).collect();
    assert_eq!(files.first(), Some(&"b.py"));
    assert_eq!(files.last(), Some(&"a.py"));
    let a = v.as_array().unwrap().last().unwrap();
    assert_eq!(a["category"], "UnknownApi");
    assert_eq!(a["span"]["line"], 2);
    assert_eq!(a["suggestion"]["replacement"], "pd.read_csv");
}

#[test]
fn fix_stdout_prints_repaired_source() {
    let dir = workspace(&[("bad.py", READ_EXEL)]);
    let out = kchlint(dir.path(), &["fix", "--stdout", "bad.py"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "import pandas as pd\ndf = pd.read_csv('data.csv')\n");
    assert!(stderr(&out).contains("applied 1, unfixed 0"));
    assert_eq!(fs::read_to_string(dir.path().join("bad.py")).unwrap(), READ_EXEL);
}

#[test]
fn fix_diff_is_unified() {
    let dir = workspace(&[("bad.py", READ_EXEL)]);
    let out = kchlint(dir.path(), &["fix", "--diff", "bad.py"]);
    let text = stdout(&out);
    assert!(text.starts_with("--- a/bad.py\n+++ b/bad.py\n"), "{text}");
    assert!(text.contains("-df = pd.read_exel('data.csv')\n+df = pd.read_csv('data.csv')\n"));
}

#[test]
fn fix_in_place_rewrites_and_leaves_clean_files_alone() {
    let messy = "import numpy   as np\nx=np.mean( [1,2] )   # fine\n";
    let dir = workspace(&[("bad.py", "df = read_csv('a.csv')\n"), ("ok.py", messy)]);
    let out = kchlint(dir.path(), &["fix", "--in-place", "bad.py", "ok.py"]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(dir.path().join("bad.py")).unwrap(),
        "import pandas as pd\ndf = pd.read_csv('a.csv')\n"
    );
    assert_eq!(fs::read(dir.path().join("ok.py")).unwrap(), messy.as_bytes());

    let again = kchlint(dir.path(), &["fix", "--in-place", "bad.py", "ok.py"]);
    assert_eq!(code(&again), 0);
}

#[test]
fn fix_unfixable_only() {
    let dir = workspace(&[("u.py", "import numpy as np\nnp.qqqqqqqqqq()\n")]);
    let out = kchlint(dir.path(), &["fix", "--in-place", "u.py"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("applied 0, unfixed 1"), "{}", stderr(&out));
}

#[test]
fn fix_json_record() {
    let dir = workspace(&[("bad.py", READ_EXEL)]);
    let out = kchlint(dir.path(), &["fix", "--format", "json", "bad.py"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["changed"], true);
    assert_eq!(v[0]["applied"].as_array().unwrap().len(), 1);
    assert!(v[0]["fixed_source"].as_str().unwrap().contains("read_csv"));
}

#[test]
fn fix_modes_are_exclusive() {
    let dir = workspace(&[("bad.py", READ_EXEL)]);
    assert_eq!(code(&kchlint(dir.path(), &["fix", "--diff", "--in-place", "bad.py"])), 2);
    assert_eq!(code(&kchlint(dir.path(), &["fix"])), 2);
}

#[test]
fn eval_reports_scores() {
    let dir = workspace(&[]);
    let out = kchlint(dir.path(), &["eval", corpus().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for key in ["precision", "recall", "f1", "fix"] {
        assert!(text.contains(key), "{text}");
    }
}

#[test]
fn eval_json_is_one_document() {
    let dir = workspace(&[]);
    let out = kchlint(dir.path(), &["eval", "--format", "json", corpus().to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tn"], 74);
    assert!(v.get("wall_time").is_none());
    let timed = kchlint(dir.path(), &["eval", "--format", "json", "--timing", corpus().to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["wall_time"].is_f64());
}

#[test]
fn eval_without_index_fails() {
    let dir = workspace(&[]);
    let out = kchlint(dir.path(), &["eval", "."]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("index.json"));
}

#[test]
fn kb_validate_bundled_and_malformed() {
    let pandas = manifests().join("pandas.json");
    let dir = workspace(&[("bad.json", r#"{"schema_version": 1, "libraries": {"json": {"callabls": []}}}"#)]);
    assert_eq!(code(&kchlint(dir.path(), &["kb", "validate", pandas.to_str().unwrap()])), 0);
    let out = kchlint(dir.path(), &["kb", "validate", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("libraries.json.callabls"), "{}", stderr(&out));
}

#[test]
fn kb_merge_then_show() {
    let extra = r#"{"schema_version": 1, "libraries": {"json": {"version": "9.9", "callables": ["detect_encoding"]}}}"#;
    let dir = workspace(&[("extra.json", extra)]);
    let json = manifests().join("json.json");
    let out = kchlint(dir.path(), &["kb", "merge", json.to_str().unwrap(), "extra.json", "-o", "merged.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let show = kchlint(dir.path(), &["--kb", "merged.json", "kb", "show", "json"]);
    assert_eq!(code(&show), 0);
    let text = stdout(&show);
    assert!(text.starts_with("json 9.9\n"), "{text}");
    assert!(text.contains("  detect_encoding\n") && text.contains("  loads\n"));
    assert_eq!(code(&kchlint(dir.path(), &["kb", "show", "not_a_lib"])), 2);
}

#[test]
fn search_path_layers_manifests() {
    let extra = r#"{"schema_version": 1, "libraries": {"pandas": {"version": "0", "callables": ["read_exel"]}}}"#;
    let dir = workspace(&[("bad.py", READ_EXEL), ("extra.json", extra)]);
    let run = |var: Option<&Path>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_kchlint"));
        cmd.args(["check", "bad.py"]).current_dir(dir.path()).env_remove("KCHLINT_KB_PATH");
        if let Some(v) = var {
            cmd.env("KCHLINT_KB_PATH", v);
        }
        code(&cmd.output().unwrap())
    };
    assert_eq!(run(None), 1);
    assert_eq!(run(Some(dir.path())), 0);
    assert_eq!(code(&kchlint(dir.path(), &["--kb", "extra.json", "check", "bad.py"])), 0);
}
