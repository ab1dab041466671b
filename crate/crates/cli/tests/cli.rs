//! End-to-end tests of the command-line surface: argument grammar, output
//! formats, determinism, and exit codes.

use std::process::{Command, Output};

fn sechint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sechint"))
        .args(args)
        .env_remove("SECHINT_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn poly_prints_polynomial() {
    let out = sechint(&["poly", "--k", "2", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x^2 - 3x + 2"));
}

#[test]
fn poly_evaluates_rational_point() {
    let out = sechint(&["poly", "--k", "2", "--m", "2", "--x", "3/2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("symbolic: -1/4"), "{text}");
    assert!(text.contains("-2.5e-1"), "{text}");
}

#[test]
fn nested_coeffs_staircase() {
    let out = sechint(&["nested", "coeffs", "--N", "5", "--lows", "1,2,3,4,5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("14,14,9,4,1"));
}

#[test]
fn nested_symbolic_and_integrand() {
    let out = sechint(&["nested", "symbolic", "--N", "6", "--lows", "2,2,2,2,2,2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("126*F[2]+56*F[3]+21*F[4]+6*F[5]+F[6]"));
    let out = sechint(&["nested", "integrand", "--N", "4", "--lows", "2,2,2,2"]);
    assert!(stdout(&out).contains("15*sech - 10*sech^2 - 4*sech^3 - sech^4"));
}

#[test]
fn fseq_f1_is_zero() {
    let out = sechint(&["fseq", "--j", "1", "--digits", "30"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("value: 0"));
}

#[test]
fn chi_alias_works() {
    let a = sechint(&["chi", "--j", "2", "--digits", "25"]);
    let b = sechint(&["fseq", "--j", "2", "--digits", "25"]);
    assert_eq!(stdout(&a).replace("chi", "fseq"), stdout(&b));
}

#[test]
fn json_one_object_per_line_with_fields() {
    let out = sechint(&["--format", "json", "fseq", "--j", "2", "--digits", "30"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json line");
        for field in ["command", "inputs", "value", "error_bound", "digits"] {
            assert!(v.get(field).is_some(), "missing {field} in {line}");
        }
    }
}

#[test]
fn text_and_json_values_agree() {
    let t = sechint(&["fseq", "--j", "3", "--digits", "35"]);
    let j = sechint(&["--format", "json", "fseq", "--j", "3", "--digits", "35"]);
    let text = stdout(&t);
    let text_value = text
        .lines()
        .find_map(|l| l.strip_prefix("value: "))
        .expect("value line");
    let parsed: serde_json::Value = serde_json::from_str(stdout(&j).trim()).unwrap();
    assert_eq!(parsed["value"].as_str().unwrap(), text_value);
}

#[test]
fn reruns_are_bit_identical() {
    let args = ["malmsten", "--n", "3", "--a", "2", "--b", "1", "--digits", "45"];
    let a = sechint(&args);
    let b = sechint(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let args = ["chis", "--s", "5/2", "--digits", "20"];
    let a = sechint(&args);
    let b = sechint(&args);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn env_var_sets_digits_and_flag_overrides() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_sechint"))
        .args(["fseq", "--j", "1"])
        .env("SECHINT_DIGITS", "17")
        .output()
        .unwrap();
    assert!(stdout(&with_env).contains("digits: 17"));
    let with_both = Command::new(env!("CARGO_BIN_EXE_sechint"))
        .args(["fseq", "--j", "1", "--digits", "23"])
        .env("SECHINT_DIGITS", "17")
        .output()
        .unwrap();
    assert!(stdout(&with_both).contains("digits: 23"));
}

#[test]
fn domain_errors_exit_2() {
    let out = sechint(&["fseq", "--j", "0", "--digits", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sechint(&["poly", "--k", "5", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sechint(&["malmsten", "--n", "2", "--a", "1/0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sechint(&["nested", "coeffs", "--N", "3", "--lows", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sechint(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // barnes at a pole
    let out = sechint(&["barnes", "--n", "3", "--s", "2", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // usage error from clap
    let out = sechint(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn residue_exact_and_numeric() {
    let out = sechint(&["residue", "--m", "3", "--k", "2", "--x", "5/2", "--numeric", "--digits", "25"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // exact: (-1)^2 P_2(3, 5/2)/3! = e_2(3/2, 1/2, -1/2)/6 = (3/4-3/4-1/4)/6
    assert!(text.contains("symbolic: -1/24"), "{text}");
    assert!(text.contains("residue-numeric"), "{text}");
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("value: ")).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(&lines[0][..20], &lines[1][..20], "numeric matches exact");
}

#[test]
fn verify_nested_suite_passes() {
    let out = sechint(&["--format", "json", "verify", "--suite", "nested", "--digits", "20"]);
    assert!(out.status.success());
    let mut saw_summary = false;
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("json");
        if v["command"] == "verify-summary" {
            saw_summary = true;
            assert_eq!(v["passed"], v["total"]);
        } else {
            assert_eq!(v["passed"], true, "{line}");
        }
    }
    assert!(saw_summary);
}

#[test]
fn verify_cycles_suite_passes() {
    let out = sechint(&["verify", "--suite", "cycles", "--digits", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS cycles/cancellation"));
    assert!(text.lines().last().unwrap().contains("checks passed"));
}
