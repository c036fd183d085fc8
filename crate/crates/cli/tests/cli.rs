use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarzian-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_prints_canonical_form() {
    let o = run(&["expand", "--series", "A", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "u5/u1 - 10*u4*u2/u1^2 - 6*u3^2/u1^2 + 48*u3*u2^2/u1^3 - 36*u2^4/u1^4"
    );
    let s = run(&["expand", "--series", "A", "--n", "3"]);
    assert_eq!(stdout(&s).trim(), "u3/u1 - 3/2*u2^2/u1^2");
}

#[test]
fn expand_json_envelope() {
    let o = run(&["--format", "json", "expand", "--series", "B", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["command"], "expand");
    assert!(v["data"]["expression"].as_str().unwrap().contains("u4/u1"));
}

#[test]
fn verify_covariance_passes() {
    let o = run(&["verify", "covariance", "--series", "B", "--n", "4", "--trials", "50", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS covariance"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--format", "json", "verify", "altrec", "--trials", "20", "--seed", "3"][..],
        &["--format", "json", "repro", "--q", "2"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
    }
    let one = Command::new(env!("CARGO_BIN_EXE_schwarzian-lab"))
        .env("SCHWARZIAN_LAB_THREADS", "1")
        .args(["--format", "json", "aw"])
        .output()
        .unwrap();
    assert_eq!(one.stdout, run(&["--format", "json", "aw"]).stdout);
}

#[test]
fn failed_check_exits_one() {
    // A tolerance far below quadrature accuracy must fail, not error.
    let o = run(&["--tolerance", "1e-30", "repro", "--q", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn bad_configuration_exits_two() {
    assert_eq!(run(&["--tolerance", "-1", "expand", "--series", "A", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--series", "A", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--function", "not-a-map"]).status.code(), Some(2));
    assert_eq!(run(&["bergman", "--z", "2"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_schwarzian-lab"))
        .env("SCHWARZIAN_LAB_THREADS", "zero")
        .args(["expand", "--series", "A", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn csv_formats() {
    let o = run(&["--format", "csv", "bergman", "--k", "1"]);
    let text = stdout(&o);
    assert!(text.starts_with("name,lhs,rhs,error,tolerance,passed\n"));
    assert_eq!(text.lines().count(), 3);
    let b = run(&["--format", "csv", "bound", "--series", "A", "--n", "3", "--levels", "6", "--angles", "16"]);
    assert_eq!(b.status.code(), Some(0), "{}", stdout(&b));
    assert!(stdout(&b).lines().count() > 2);
}
