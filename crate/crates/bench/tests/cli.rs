use std::path::Path;
use std::process::{Command, Output};

fn aben(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aben"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run aben")
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn cp_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("msg.txt"), b"quarterly numbers").unwrap();
    ok(aben(&["setup", "--scheme", "cp", "--pub", "k.aben-pub", "--msk", "k.aben-msk", "--seed", "1"], d));
    ok(aben(&["keygen", "--pub", "k.aben-pub", "--msk", "k.aben-msk", "--attrs", "finance,manager", "--out", "fm.aben-key"], d));
    ok(aben(&["keygen", "--pub", "k.aben-pub", "--msk", "k.aben-msk", "--attrs", "finance", "--out", "f.aben-key"], d));
    ok(aben(
        &["encrypt", "--pub", "k.aben-pub", "--policy", "finance and manager", "--in", "msg.txt", "--out", "msg.aben-ct"],
        d,
    ));
    ok(aben(&["decrypt", "--pub", "k.aben-pub", "--key", "fm.aben-key", "--in", "msg.aben-ct", "--out", "plain.txt"], d));
    assert_eq!(std::fs::read(d.join("plain.txt")).unwrap(), b"quarterly numbers");

    let denied = aben(&["decrypt", "--pub", "k.aben-pub", "--key", "f.aben-key", "--in", "msg.aben-ct", "--out", "x"], d);
    assert!(!denied.status.success());
    assert!(String::from_utf8_lossy(&denied.stderr).contains("does not satisfy"));
    assert!(!d.join("x").exists());
}

#[test]
fn kp_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("log"), b"").unwrap();
    ok(aben(
        &["setup", "--scheme", "kp", "--universe", "web,db,prod", "--pub", "p", "--msk", "m", "--seed", "2"],
        d,
    ));
    ok(aben(&["keygen", "--pub", "p", "--msk", "m", "--policy", "db and prod", "--out", "key"], d));
    ok(aben(&["encrypt", "--pub", "p", "--attrs", "db,prod", "--in", "log", "--out", "ct"], d));
    ok(aben(&["decrypt", "--pub", "p", "--key", "key", "--in", "ct", "--out", "back"], d));
    assert_eq!(std::fs::read(d.join("back")).unwrap(), b"");

    let bad = aben(&["encrypt", "--pub", "p", "--attrs", "cache", "--in", "log", "--out", "ct2"], d);
    assert!(!bad.status.success());
    let missing = aben(&["keygen", "--pub", "p", "--msk", "m", "--out", "k2"], d);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--policy"));
}

#[test]
fn corrupted_key_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(aben(&["setup", "--scheme", "cp", "--pub", "p", "--msk", "m", "--seed", "3"], d));
    let mut bytes = std::fs::read(d.join("p")).unwrap();
    bytes.truncate(bytes.len() - 5);
    std::fs::write(d.join("p"), bytes).unwrap();
    let out = aben(&["keygen", "--pub", "p", "--msk", "m", "--attrs", "a", "--out", "k"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
}

#[test]
fn bench_writes_raw_summary_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(aben(
        &[
            "bench", "--scheme", "both", "--op", "keygen,encrypt", "--attrs", "1..3", "--levels", "80", "--reps", "2",
            "--seed", "5", "--out", "r.csv", "--summary",
        ],
        d,
    ));
    let raw = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 2 * 2 * 3 * 2);
    assert_eq!(raw.lines().next().unwrap(), "scheme,op,sec_level,n_attrs,rep,duration_ns,size_bytes");
    let summary = std::fs::read_to_string(d.join("r.summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2 * 3);
    let meta = std::fs::read_to_string(d.join("r.meta.txt")).unwrap();
    assert!(meta.contains("shape=and"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("encrypt"));

    ok(aben(
        &["bench", "--scheme", "cp", "--op", "decrypt", "--attrs", "4", "--reps", "1", "--shape", "kofn", "--k", "2", "--out", "k.csv"],
        d,
    ));
    assert!(std::fs::read_to_string(d.join("k.meta.txt")).unwrap().contains("kofn(k=2)"));
}
