use std::process::{Command, Output};

use serde_json::Value;

fn qnull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnull"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn present_splits_after_the_prefix() {
    let o = qnull(&["present", "(I,1,J)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "v0 = (I)\nblocks = [(1, J)]\nr = 1\n");
}

#[test]
fn eval_regression() {
    let o = qnull(&["eval", "(x-I)*(x-J)", "--at", "(I)"]);
    assert_eq!(stdout(&o), "2*K\n");
}

#[test]
fn counterexample_exits_zero() {
    let o = qnull(&["verify", "counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);
}

#[test]
fn json_has_schema_and_exact_strings() {
    let o = qnull(&["--json", "blowup", "(1+2*I, J)"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["v0"][0]["x1"], "2");
    assert_eq!(doc["blocks"][0]["rho"], "1");
}

#[test]
fn cut_ideal_of_a_prefix_and_one_block() {
    let o = qnull(&["cut-ideal", "(1+2*I, J)"]);
    assert_eq!(stdout(&o), "x1 + (-1 - 2*I)\nx2^2 + 1\n");
}

#[test]
fn vanish_and_restrict() {
    assert_eq!(stdout(&qnull(&["vanish", "x^2+1", "--at", "(I)"])), "true\n");
    assert_eq!(stdout(&qnull(&["vanish", "x^2+1", "--at", "(2*I)"])), "false\n");
    assert_eq!(stdout(&qnull(&["restrict", "x^2+1", "--at", "(2*I)"])), "-3\n");
}

#[test]
fn grid_points() {
    assert_eq!(stdout(&qnull(&["grid", "(I,J)"])), "(I, I)\n(I, -I)\n");
    let o = qnull(&["grid", "(I, J + K)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qnull(&["--field", "f64", "grid", "(I, J + K)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qnull(&["eval", "x^-1", "--at", "(I)"]).status.code(), Some(2));
    assert_eq!(qnull(&["eval", "x2", "--at", "(I)"]).status.code(), Some(2));
    assert_eq!(qnull(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qnull(&["--algebra", "1", "eval", "x", "--at", "(I)"]).status.code(), Some(2));
    assert_eq!(qnull(&["--field", "func", "present", "(I)"]).status.code(), Some(2));
}

#[test]
fn other_algebras_and_fields() {
    let o = qnull(&["--algebra", "-1,-3", "eval", "x*x", "--at", "(J)"]);
    assert_eq!(stdout(&o), "-3\n");
    let o = qnull(&["--field", "func", "--algebra", "al,be", "eval", "x^2 - al + t*(y^2 - be)", "--at", "(I, J)"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn verification_reports_are_deterministic() {
    for args in [
        ["--seed", "7", "verify", "blowup", "(I, J, 1, J)"].as_slice(),
        ["--seed", "7", "verify", "cut", "(1+2*I, J)"].as_slice(),
        ["--seed", "7", "--json", "verify", "central-zeros", "x2^2+1", "--at", "(I, J)"].as_slice(),
    ] {
        let a = qnull(args);
        assert!(a.status.success(), "{args:?}: {}", stdout(&a));
        assert_eq!(a.stdout, qnull(args).stdout);
    }
}
