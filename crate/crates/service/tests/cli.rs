use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use ndlab_service::Store;

fn ndlab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ndlab"));
    c.env_remove("NDLAB_DATA_DIR").env_remove("NDLAB_PORT").env_remove("NDLAB_HOST");
    c
}

fn script(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../core/corpus/scripts/{id}.nd"))
}

fn run(c: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = run(ndlab().args(["check", "peirce"]).arg(script("peirce")));
    assert_eq!((code, out.trim()), (0, "proved"));
    let (code, out, _) = run(ndlab().args(["check", "converse"]).arg(script("converse")));
    assert_eq!((code, out.trim()), (1, "refuted"));
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.nd");
    std::fs::write(&partial, "backward impl_intro\n").unwrap();
    let (code, out, _) = run(ndlab().args(["check", "identity"]).arg(&partial));
    assert_eq!(code, 2);
    assert!(out.starts_with("open"));
    let bad = dir.path().join("bad.nd");
    std::fs::write(&bad, "backward impl_intro\nbackward raa\nbackward exists_intro c\n").unwrap();
    let (code, _, err) = run(ndlab().args(["check", "identity"]).arg(&bad));
    assert_eq!(code, 2);
    assert!(err.contains(":3:"), "{err}");
    let (code, _, err) = run(ndlab().args(["check", "no-such-exercise"]).arg(&bad));
    assert_eq!(code, 2);
    assert!(err.contains("no-such-exercise"));
}

#[test]
fn check_reads_exercise_files() {
    let dir = tempfile::tempdir().unwrap();
    let pack = dir.path().join("pack.json");
    let (code, out, _) = run(ndlab().args(["gen", "--seed", "5", "--mode", "prove", "--count", "2"]));
    assert_eq!(code, 0);
    std::fs::write(&pack, &out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let id = v["exercises"][1]["id"].as_str().unwrap();
    let s = dir.path().join("auto.nd");
    std::fs::write(&s, "auto 2\nqed\n").unwrap();
    let (code, _, err) = run(ndlab().arg("check").arg(format!("{}#{id}", pack.display())).arg(&s));
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = run(ndlab().arg("check").arg(&pack).arg(&s));
    assert_eq!(code, 2);
    assert!(err.contains("holds 2 exercises"), "{err}");
    let one = dir.path().join("one.json");
    std::fs::write(&one, v["exercises"][0].to_string()).unwrap();
    assert_eq!(run(ndlab().arg("check").arg(&one).arg(&s)).0, 0);
}

#[test]
fn gen_is_reproducible_across_processes() {
    let args = ["gen", "--seed", "42", "--mode", "mystery", "--count", "10"];
    let (c1, a, _) = run(ndlab().args(args));
    let (c2, b, _) = run(ndlab().args(args));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, c, _) = run(ndlab().args(["gen", "--seed", "43", "--mode", "mystery", "--count", "10"]));
    assert_ne!(a, c);
    let (code, _, err) = run(ndlab().args(["gen", "--seed", "1", "--mode", "prove", "--symbols", "0"]));
    assert_eq!(code, 2);
    assert!(err.contains("num_symbols"));
}

#[test]
fn replay_a_session_file() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let id = store.create_session("identity", "ann").unwrap().id;
    for c in ["backward impl_intro", "nope", "backward assumption", "qed"] {
        store.apply_command(&id, c).unwrap();
    }
    let path = store.session_path(&id);
    let (code, out, _) = run(ndlab().arg("replay").arg(&path));
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.ends_with("4 events, 1 rejected, status Proved\n"), "{out}");
    let (code, out, _) = run(ndlab().arg("replay").arg("--json").arg(&path));
    assert_eq!(code, 0);
    let log: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(log["frames"].as_array().unwrap().len(), 3);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("\"nope\"", "\"backward raa\"")).unwrap();
    let (code, _, err) = run(ndlab().arg("replay").arg(&path));
    assert_eq!(code, 2);
    assert!(err.contains("corrupt at event 1"), "{err}");
}

#[test]
fn repl_reads_stdin() {
    let mut child = ndlab()
        .args(["repl", "and-comm"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b":hint\nbogus\nauto 1\n:tree\nqed\n:quit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(text.starts_with("goal 1: h1: p /\\ q |- q /\\ p\n"), "{text}");
    assert!(text.contains("hint: "));
    assert!(text.contains("error: SyntaxError"));
    assert!(text.contains("no open goals"));
    assert!(text.contains("no finished proof"));
    assert!(text.trim_end().ends_with("proved"));
}

#[test]
fn serve_answers_health_checks() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let mut child = ndlab()
        .arg("serve")
        .env("NDLAB_DATA_DIR", dir.path())
        .env("NDLAB_PORT", port.to_string())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    let response = loop {
        if let Ok(mut s) = std::net::TcpStream::connect(("127.0.0.1", port)) {
            s.write_all(b"GET /health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").unwrap();
            let mut buf = String::new();
            s.read_to_string(&mut buf).unwrap();
            break buf;
        }
        assert!(Instant::now() < deadline, "server did not start");
        std::thread::sleep(Duration::from_millis(50));
    };
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.ends_with("ok"));
    assert!(dir.path().join("sessions").is_dir());
}
