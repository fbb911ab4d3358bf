//! End-to-end tests of the command-line interface: output formats and the
//! exit-code contract (0 success, 1 failed verdicts, 2 usage/parse, 3
//! capacity/interrupt).

use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cyclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn count_basics() {
    let out = cyclone(&["count", "-n", "7", "-d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "42\n");
    let err = stderr(&out);
    assert!(err.contains("count=42"), "{err}");
    assert!(err.contains("mode=serial"), "{err}");

    let out = cyclone(&["count", "-n", "9", "-d", "4"]);
    assert_eq!(stdout(&out), "357\n");

    let out = cyclone(&["count", "-n", "10", "-d", "5"]);
    assert_eq!(stdout(&out), "1233\n");

    let out = cyclone(&["count", "-n", "11", "-d", "5"]);
    assert_eq!(stdout(&out), "51676\n");

    let out = cyclone(&[
        "count",
        "-n",
        "9",
        "-d",
        "4",
        "--parallel",
        "4",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "357\n");
    assert!(stderr(&out).contains("mode=parallel workers=4 budget=10"));
}

#[test]
fn count_usage_errors() {
    assert_eq!(
        cyclone(&["count", "-n", "2", "-d", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cyclone(&["count", "-n", "4", "-d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(cyclone(&["count", "-n", "4"]).status.code(), Some(2));
    assert_eq!(
        cyclone(&["count", "-n", "4", "-d", "2", "--parallel", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cyclone(&["count", "-n", "4", "-d", "2", "--budget", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cyclone(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn count_ledger_replaces_rows() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("counts.ledger");
    let ledger_s = ledger.to_str().unwrap();
    cyclone(&["count", "-n", "4", "-d", "2", "--ledger", ledger_s]);
    cyclone(&["count", "-n", "5", "-d", "2", "--ledger", ledger_s]);
    cyclone(&[
        "count",
        "-n",
        "4",
        "-d",
        "2",
        "--parallel",
        "2",
        "--ledger",
        ledger_s,
    ]);
    let content = fs::read_to_string(&ledger).unwrap();
    let rows: Vec<&str> = content.lines().collect();
    assert_eq!(rows.len(), 2, "{content}");
    assert!(rows[0].starts_with("2 2 2 "), "{content}");
    assert!(rows[0].contains(" parallel 2 1000"), "{content}");
    assert!(rows[1].starts_with("3 2 5 "), "{content}");
    assert!(rows[1].contains(" serial 1 1000"), "{content}");
}

#[test]
fn enumerate_formats() {
    let out = cyclone(&["enumerate", "-n", "4", "-d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{{1,2,3},{1,3,4}}\n{{1,2,4},{2,3,4}}\n");

    let out = cyclone(&["enumerate", "-n", "6", "-d", "2"]);
    assert_eq!(stdout(&out).lines().count(), 14);

    let out = cyclone(&["enumerate", "-n", "5", "-d", "3", "--with-gkz"]);
    assert_eq!(
        stdout(&out),
        "{{1,2,3,5},{1,3,4,5}} (96,48,96,48,96)\n{{1,2,3,4},{1,2,4,5},{2,3,4,5}} (84,96,24,96,84)\n"
    );

    let out = cyclone(&[
        "enumerate",
        "-n",
        "4",
        "-d",
        "2",
        "--format",
        "jsonl",
        "--with-gkz",
    ]);
    assert_eq!(
        stdout(&out),
        "{\"cells\":[[1,2,3],[1,3,4]],\"gkz\":[8,2,8,6]}\n{\"cells\":[[1,2,4],[2,3,4]],\"gkz\":[6,8,2,8]}\n"
    );

    let out = cyclone(&["enumerate", "-n", "4", "-d", "2", "--format", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poset_summaries() {
    let out = cyclone(&["poset", "-n", "4", "-d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "nodes=2 edges=1 tree=1 min={{1,2,3},{1,3,4}} max={{1,2,4},{2,3,4}}\n"
    );

    let out = cyclone(&["poset", "-n", "6", "-d", "2", "--reduce"]);
    assert_eq!(
        stdout(&out),
        "nodes=14 edges=21 tree=13 min={{1,2,3},{1,3,4},{1,4,5},{1,5,6}} \
         max={{1,2,6},{2,3,6},{3,4,6},{4,5,6}} reduced=21\n"
    );

    let out = cyclone(&["poset", "-n", "8", "-d", "3"]);
    assert!(stdout(&out).starts_with("nodes=138 "), "{}", stdout(&out));
}

#[test]
fn poset_dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("hst.dot");
    let out = cyclone(&[
        "poset",
        "-n",
        "6",
        "-d",
        "2",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph hst1 {\n"));
    assert_eq!(text.matches(" -> ").count(), 21);
    assert_eq!(text.matches("[style=dashed]").count(), 8);
    // regeneration is byte-identical
    let dot2 = dir.path().join("hst2.dot");
    cyclone(&[
        "poset",
        "-n",
        "6",
        "-d",
        "2",
        "--dot",
        dot2.to_str().unwrap(),
    ]);
    assert_eq!(text, fs::read_to_string(&dot2).unwrap());
}

#[test]
fn node_limit_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args(["poset", "-n", "6", "-d", "2"])
        .env("CYCLONE_NODE_LIMIT", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args(["poset", "-n", "6", "-d", "2"])
        .env("CYCLONE_NODE_LIMIT", "bogus")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args(["ratios", "--max-n", "7"])
        .env("CYCLONE_NODE_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "7 skipped\n");
}

#[test]
fn ratios_output() {
    let out = cyclone(&["ratios", "--max-n", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "7 42 42 42/42 1.000\n8 138 132 138/132 1.045\n9 357 429 357/429 0.832\n"
    );
    assert_eq!(cyclone(&["ratios", "--max-n", "6"]).status.code(), Some(2));
}

#[test]
fn check_verdicts() {
    let dir = tempfile::tempdir().unwrap();

    let good = dir.path().join("good.txt");
    fs::write(&good, "{{1,2,3},{1,3,4}}\n{{1,2,4},{2,3,4}}\n").unwrap();
    let out = cyclone(&[
        "check",
        "--file",
        good.to_str().unwrap(),
        "-n",
        "4",
        "-d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "line 1: ok\nline 2: ok\n");

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "{{1,2,3},{1,3,4}}\n{{1,2,3}}\n").unwrap();
    let out = cyclone(&[
        "check",
        "--file",
        bad.to_str().unwrap(),
        "-n",
        "4",
        "-d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("line 1: ok"), "{text}");
    assert!(text.contains("line 2: volume 2 of 8"), "{text}");

    let malformed = dir.path().join("malformed.txt");
    fs::write(&malformed, "{{1,2,3},{1,3,4}}\n{{1,2}\n").unwrap();
    let out = cyclone(&[
        "check",
        "--file",
        malformed.to_str().unwrap(),
        "-n",
        "4",
        "-d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    // wrong cell size is a verdict, not a parse error
    let wrong = dir.path().join("wrong.txt");
    fs::write(&wrong, "{{1,2}}\n").unwrap();
    let out = cyclone(&[
        "check",
        "--file",
        wrong.to_str().unwrap(),
        "-n",
        "4",
        "-d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("invalid simplex"), "{}", stdout(&out));
}

#[test]
fn root_and_gkz_commands() {
    let out = cyclone(&["root", "-n", "6", "-d", "2"]);
    assert_eq!(stdout(&out), "{{1,2,3},{1,3,4},{1,4,5},{1,5,6}}\n");
    let out = cyclone(&["root", "-n", "5", "-d", "3", "--with-gkz"]);
    assert_eq!(stdout(&out), "{{1,2,3,5},{1,3,4,5}} (96,48,96,48,96)\n");

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tris.txt");
    fs::write(&file, "{{1,2,3},{1,3,4}}\n{{1,2,4},{2,3,4}}\n").unwrap();
    let out = cyclone(&[
        "gkz",
        "-n",
        "4",
        "-d",
        "2",
        "--file",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "(8,2,8,6)\n(6,8,2,8)\n");

    // via stdin
    let mut child = Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args(["gkz", "-n", "4", "-d", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"{{1,2,4},{2,3,4}}\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "(6,8,2,8)\n");

    // labels outside the configuration are an input error
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "{{1,2,5}}\n").unwrap();
    let out = cyclone(&["gkz", "-n", "4", "-d", "2", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn checkpoint_header_guard() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.txt");
    fs::write(
        &ck,
        "cyclone-ckpt v1 n=9 d=2\ntotals visited=0 flip_edges=0 max_depth=0\n",
    )
    .unwrap();
    // file says C(9,2), run asks for C(9,3)
    let out = cyclone(&[
        "count",
        "-n",
        "9",
        "-d",
        "3",
        "--checkpoint",
        ck.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("checkpoint"), "{}", stderr(&out));
}

#[test]
fn sigint_saves_checkpoint_and_resume_completes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.txt");
    // budget=1 makes coordination the bottleneck so the run survives a second
    let child = Command::new(env!("CARGO_BIN_EXE_cyclone"))
        .args([
            "count",
            "-n",
            "11",
            "-d",
            "3",
            "--parallel",
            "2",
            "--budget",
            "1",
            "--checkpoint",
            ck.to_str().unwrap(),
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(800));
    unsafe {
        libc::kill(child.id() as libc::pid_t, libc::SIGINT);
    }
    let out = child.wait_with_output().unwrap();
    match out.status.code() {
        Some(3) => {
            assert!(ck.exists());
            let resumed = cyclone(&[
                "count",
                "-n",
                "11",
                "-d",
                "3",
                "--checkpoint",
                ck.to_str().unwrap(),
            ]);
            assert_eq!(resumed.status.code(), Some(0));
            assert_eq!(stdout(&resumed), "89405\n");
        }
        // the run may already have finished on a fast machine
        Some(0) => assert_eq!(String::from_utf8(out.stdout).unwrap(), "89405\n"),
        code => panic!(
            "unexpected exit {code:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ),
    }
}
