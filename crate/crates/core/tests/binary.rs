//! End-to-end checks against the compiled `tropbuild` binary.

use std::process::Command;

fn tropbuild(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropbuild")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn results_and_exit_codes() {
    assert_eq!(tropbuild(&["dist", "0,0,0", "3,1,0"]), (0, "3\n".into(), String::new()));
    assert_eq!(tropbuild(&["tlen", "t^-1,0;0,t"]).1, "2\n");
    assert_eq!(tropbuild(&["chart-transition", "1,0;0,1", "1,0;1,1", "0,2"]).1, "none\n");
    let (code, _, err) = tropbuild(&["tlen", "1,1;1,1"]);
    assert_eq!((code, err.lines().count()), (1, 1));
    assert_eq!(tropbuild(&["pinv", "0,2;1,0", "0,zz"]).0, 2);
    assert_eq!(tropbuild(&["no-such-command"]).0, 2);
}

#[test]
fn json_documents() {
    let (code, out, _) = tropbuild(&["--json", "chart-transition", "1,0;0,1", "1,0;1,1", "0,2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["defined"], false);
    assert_eq!(v["result"], serde_json::Value::Null);
    let (_, out, _) = tropbuild(&["--json", "pinv", "0,2;1,0", "0,0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], serde_json::json!(["-1", "-2"]));
}

#[test]
fn selftest_is_reproducible() {
    let args = ["selftest", "--seed", "3", "--trials", "40", "--heavy", "4"];
    let first = tropbuild(&args);
    assert_eq!(first.0, 0, "{}", first.1);
    assert_eq!(first, tropbuild(&args));
    assert!(first.1.ends_with("24/24 suites passed (seed 3)\n"));
}
