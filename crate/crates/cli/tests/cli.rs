use std::io::Write;
use std::process::{Command, Output, Stdio};

fn matro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matro")).args(args).output().expect("binary runs")
}

fn matro_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_matro"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tutte_of_u12_counts_two_bases() {
    let dir = tempfile::tempdir().unwrap();
    let u12 = write(&dir, "u12.matroid", "2 1\n0\n1\n");
    let out = matro(&["tutte", &u12, "--at", "1/1", "1/1", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0 1\n1 0\nT(1/1, 1/1) = 2/1\n");
}

#[test]
fn invalid_matroid_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.matroid", "4 2\n0 1\n2 3\n");
    let out = matro(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ExchangeViolated"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(matro(&["validate", "--nope", "x"]).status.code(), Some(2));
    assert_eq!(matro(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let u12 = write(&dir, "u12.matroid", "2 1\n0\n1\n");
    assert_eq!(matro(&["tutte", &u12, "--at", "0.5", "1"]).status.code(), Some(2));
    assert_eq!(matro(&["validate", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(matro(&["verify", "--suite", "bogus", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn examples_round_trip_through_validate() {
    for name in ["figure2", "counterexample"] {
        let ex = matro(&["examples", name]);
        assert_eq!(ex.status.code(), Some(0));
        let text = stdout(&ex);
        assert!(text.starts_with("# labels: {"));
        let labels = text.lines().next().unwrap().trim_start_matches("# labels: ");
        let map: serde_json::Value = serde_json::from_str(labels).unwrap();
        assert!(map.as_object().unwrap().len() >= 7);
        let checked = matro_stdin(&["validate", "-"], &text);
        assert_eq!(checked.status.code(), Some(0), "{}", String::from_utf8_lossy(&checked.stderr));
    }
}

#[test]
fn freer_and_clones_on_figure2() {
    let dir = tempfile::tempdir().unwrap();
    let fig = write(&dir, "fig.matroid", &stdout(&matro(&["examples", "figure2"])));
    // labels: x1 x2 x3 x3' x4 x5 x6
    assert_eq!(stdout(&matro(&["clones", &fig])), "0 1\n2 3\n4 5\n");
    assert_eq!(stdout(&matro(&["freer", &fig, "6", "0"])), "freer\n");
    assert!(stdout(&matro(&["freer", &fig, "0", "4"])).starts_with("not freer"));
    assert_eq!(matro(&["freer", &fig, "2", "2"]).status.code(), Some(2));
}

#[test]
fn compare_reports_exact_hyperbola_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.matroid", "2 1\n0\n1\n");
    let n = write(&dir, "n.matroid", "2 1\n0\n");
    let grid = write(&dir, "grid", "2 2\n1 1\n3 3\n");
    let out = stdout(&matro(&["compare", &m, &n, "--grid", &grid]));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["2/1 2/1 4/1 4/1 0 0", "1/1 1/1 2/1 1/1 1 1", "3/1 3/1 6/1 9/1 -1 -1"]);
    assert!(out.contains("# rank-preserving weak map: [0, 1]"));
}

#[test]
fn catalog_output_is_bit_exact_and_reloadable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.cat");
    let out = matro(&["catalog", "--n", "3", "--mode", "labeled", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("catalog n=3 mode=labeled count="));
    let printed = stdout(&matro(&["catalog", "--n", "3", "--mode", "labeled"]));
    assert_eq!(printed, text);
    let cat = matro::catalog::Catalog::from_text(&text).unwrap();
    assert_eq!(cat.to_text(), text);
    assert_eq!(matro(&["catalog", "--n", "7", "--mode", "labeled"]).status.code(), Some(2));
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("all.json");
    let out = matro(&["--jobs", "2", "verify", "--suite", "all", "--n", "5", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for r in reports {
        for key in ["suite", "n", "grid", "instances", "failures", "elapsed_ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["failures"].as_array().unwrap().len(), 0);
        assert_eq!(r["n"], 5);
    }

    let single = matro(&["verify", "--suite", "lemma-lc", "--n", "4", "--seed", "7"]);
    assert_eq!(single.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&single)).unwrap();
    assert_eq!(json["suite"], "lemma-lc");
    assert_eq!(json["grid"].as_array().unwrap().len(), 12);
}

#[test]
fn disk_cache_is_used_and_tolerates_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let fig = write(&dir, "fig.matroid", &stdout(&matro(&["examples", "figure2"])));
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_matro"))
            .args(["tutte", &fig, "--at", "2", "2"])
            .env("MATRO_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    for f in &files {
        std::fs::write(f, "not a polynomial").unwrap();
    }
    let second = run();
    assert_eq!(stdout(&second), stdout(&first));
}
