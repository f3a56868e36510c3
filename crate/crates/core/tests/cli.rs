use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn polypos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polypos"))
        .args(args)
        .env_remove("POLYPOS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_reports_violation_with_exit_0() {
    let o = polypos(&["check", "--cone", "sos", "--degree", "2", &fixture("derivative.op")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: Violates"));
    assert!(out.contains("h = (-x + 1)^2"));
    assert!(out.contains("at x0 = 0"));
    assert!(out.contains("value = -2"));
}

#[test]
fn check_reports_preservation() {
    for cone in ["sos", "pos", "ell"] {
        let o = polypos(&["check", "--cone", cone, "--degree", "4", &fixture("identity.op")]);
        assert_eq!(o.status.code(), Some(0), "{cone}");
        assert!(stdout(&o).contains("verdict: Preserves"), "{cone}");
    }
    let o = polypos(&["check", "--unbounded", &fixture("identity.op")]);
    assert!(stdout(&o).contains("verdict: Preserves"));
}

#[test]
fn json_witness_verifies() {
    for (cone, file) in [("sos", "derivative.op"), ("pos", "mixed.op"), ("ell", "derivative.op")] {
        let o = polypos(&["--json", "check", "--cone", cone, "--degree", "2", &fixture(file)]);
        assert_eq!(o.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for field in ["cone", "degree_bound", "result", "certificate", "predicate_report", "truncation_flag"] {
            assert!(report.get(field).is_some(), "{cone}: missing {field}");
        }
        assert_eq!(report["result"], "Violates");

        let dir = std::env::temp_dir().join(format!("polypos-cli-{}-{cone}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let whole = dir.join("report.json");
        std::fs::write(&whole, &o.stdout).unwrap();
        let v = polypos(&["witness-verify", &fixture(file), whole.to_str().unwrap()]);
        assert_eq!(stdout(&v).trim(), "true", "{cone}: {}", stderr(&v));
        assert_eq!(v.status.code(), Some(0));

        // the bare witness object works too, and fails for another operator
        let bare = dir.join("witness.json");
        let w = report["certificate"]["witness"].clone();
        std::fs::write(&bare, serde_json::to_vec(&w).unwrap()).unwrap();
        let v = polypos(&["witness-verify", "--cone", cone, &fixture(file), bare.to_str().unwrap()]);
        assert_eq!(stdout(&v).trim(), "true");
        let v = polypos(&["witness-verify", &fixture("identity.op"), bare.to_str().unwrap()]);
        assert_eq!(stdout(&v).trim(), "false");
        assert_eq!(v.status.code(), Some(1));
        std::fs::remove_dir_all(&dir).ok();
    }
}

#[test]
fn parse_errors_exit_2_with_position() {
    let o = polypos(&["check", "--degree", "2", &fixture("bad_index.op")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1:3"), "{}", stderr(&o));
    let o = polypos(&["ff", "2x", "x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polypos(&["check", "--degree", "2", "no-such-file.op"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polypos(&["check", "--cone", "psd", "--degree", "2", &fixture("identity.op")]);
    assert_eq!(o.status.code(), Some(2));
    let o = polypos(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polypos(&["moments", "check", "1", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn comments_and_rational_coefficients() {
    let o = polypos(&["symbol", "--m", "0", &fixture("comment.op")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3/2*y^2 - y + 1");
}

#[test]
fn small_utilities() {
    assert_eq!(stdout(&polypos(&["ff", "x^2", "x^2"])).trim(), "2");
    let o = polypos(&["moments", "check", "1", "0", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not a moment sequence"));
    let o = polypos(&["moments", "check", "2", "0", "2"]);
    assert!(stdout(&o).contains("moment sequence"));
    assert!(!stdout(&o).contains("not a moment"));

    let o = polypos(&["symbol", "--m", "2", &fixture("mixed.op")]);
    assert_eq!(stdout(&o).trim(), "x^2 - 2*x*y + y^2 + 1");
    let o = polypos(&["hankel", "--m", "1", "--at", "-1", &fixture("mixed.op")]);
    assert_eq!(stdout(&o).trim(), "[2, 2]\n[2, 2]");

    let o = polypos(&["conv-build", &fixture("two_atoms.m"), "--order", "4"]);
    let printed = stdout(&o);
    assert!(printed.contains("q[0] = 2"));
    assert!(printed.contains("q[2] = 1"));
    assert!(printed.contains("q[4] = 1/12"));
    // the printed operator parses back
    let t = polypos::text::parse_weyl(&printed).unwrap();
    assert_eq!(t.order(), Some(4));

    let o = polypos(&["recover", "2", "0", "2", "0", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("atom polynomial: x^2 - 1"), "{out}");
    // the atom lines are a measure file
    let body: String = out.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let m = polypos::text::parse_measure(&body).unwrap();
    assert_eq!(m.len(), 2);
}

#[test]
fn multivariate_check() {
    let o = polypos(&["mv-check", "--alpha", "(1,1)", &fixture("d1d2.op")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("value = -2"), "{out}");
    let o = polypos(&["--json", "mv-check", "--alpha", "(1,1)", "--at", "(0,0)", &fixture("d1d2.op")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"]["value"], "-2");
}

#[test]
fn oracle_echoes_seed() {
    let o = polypos(&["oracle", "--degree", "2", "--trials", "20", "--seed", "11", &fixture("derivative.op")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("seed: 11"));
    let o = Command::new(env!("CARGO_BIN_EXE_polypos"))
        .args(["oracle", "--degree", "2", "--trials", "5", &fixture("identity.op")])
        .env("POLYPOS_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("seed: 42"));
    assert!(stdout(&o).contains("no counterexample"), "{}", stdout(&o));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polypos"))
        .args(["check", "--degree", "2", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"q[2] = 1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(stdout(&o).contains("verdict: Preserves"));
}
