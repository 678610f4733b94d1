use std::process::{Command, Output};

use torsion_clean::theorems::CheckResult;
use torsion_clean::torsion::{verify_certificate, Certificate, CertificateRecord, IndexReport};
use torsion_clean::RingHandle;

fn tcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcl")).args(args).env_remove("TCL_MAX_SIZE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(tcl(&["index", "M(2,GF(2))"]).status.code(), Some(0));
    assert_eq!(tcl(&["index", "GF(6)"]).status.code(), Some(2));
    assert_eq!(tcl(&["index"]).status.code(), Some(2));
    assert_eq!(tcl(&["frobnicate", "GF(2)"]).status.code(), Some(2));
    assert_eq!(tcl(&["index", "M(5,GF(2))"]).status.code(), Some(4));
    assert_eq!(tcl(&["decompose", "M(2,GF(2))", "[[1,1],[1,0]]", "2", "--strong"]).status.code(), Some(3));
    assert_eq!(tcl(&["decompose", "GF(2)", "5", "1"]).status.code(), Some(2));
    assert_eq!(tcl(&["verify", "T(3,GF(2))"]).status.code(), Some(0));
    assert_eq!(tcl(&["verify", "GF(2)", "--check", "bogus"]).status.code(), Some(2));
}

#[test]
fn size_guard_flag_beats_environment() {
    let run = |env: &str, extra: &[&str]| {
        let mut args = vec!["analyze", "M(3,GF(2))"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_tcl"))
            .args(&args)
            .env("TCL_MAX_SIZE", env)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("100", &[]), Some(4));
    assert_eq!(run("100", &["--max-size", "1000"]), Some(0));
    assert_eq!(run("1000", &[]), Some(0));
}

#[test]
fn json_round_trips() {
    let o = tcl(&["decompose", "M(2,GF(2))", "[[1,1],[1,0]]", "2", "--json"]);
    let rec: CertificateRecord = serde_json::from_slice(&o.stdout).unwrap();
    let ring = RingHandle::parse(&rec.ring).unwrap();
    let cert = Certificate::from_record(&ring, &rec).unwrap();
    assert!(verify_certificate(&cert));
    assert_eq!((rec.e, rec.u, rec.order), (1, 6, 2));

    let o = tcl(&["index", "M(3,GF(2))", "--strong", "--json", "--no-timing"]);
    let rep: IndexReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep.index, Some(84));
    assert_eq!(rep.elapsed_ms, None);
    for w in &rep.witnesses {
        let x = ring_elem("M(3,GF(2))", w.element);
        let c = torsion_clean::decompose(&x, w.order as u64, true).unwrap();
        assert!(verify_certificate(&c));
    }

    let o = tcl(&["verify", "M(2,GF(2))", "--json"]);
    let results: Vec<CheckResult> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(results[0].id, "identity-eq");
}

fn ring_elem(spec: &str, code: u32) -> torsion_clean::RingElem {
    RingHandle::parse(spec).unwrap().elem(code as u64).unwrap()
}

#[test]
fn identical_runs_are_byte_identical() {
    let specs = ["M(2,GF(2))", "T(4,GF(2))", "P(GF(4),GF(8))", "GF(6)", "Q(GF(4),2,1)"];
    for fmt in ["--csv", "--json"] {
        let mut base = vec!["survey", fmt, "--no-timing"];
        base.extend(specs);
        let a = tcl(&base);
        let mut one = base.clone();
        one.extend(["--jobs", "1"]);
        let b = tcl(&one);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
    let csv = stdout(&tcl(&["survey", "--csv", "--no-timing", "M(2,GF(2))", "GF(6)"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("\"M(2,GF(2))\",16,6,6,2,6,"));
    assert!(lines[2].starts_with("GF(6),,,,,,"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("tcl-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("index.json");
    let o = tcl(&["index", "GF(9)", "--json", "--no-timing", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let rep: IndexReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep.index, Some(8));
    std::fs::remove_dir_all(&dir).unwrap();
}
