//! Black-box tests of the `uncq` binary: exit codes, output formats, and
//! the CSV contract.

use std::process::{Command, Output};

fn uncq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncq"))
        .args(args)
        .output()
        .expect("spawn uncq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn exit_codes() {
    // 0: success
    let out = uncq(&["bound", "--state", "bell:phi+", "--r", "z", "--s", "x"]);
    assert_eq!(out.status.code(), Some(0));

    // 2: parse errors (state grammar, direction grammar, sweep steps, clap)
    for args in [
        vec!["bound", "--state", "bogus:1", "--r", "z", "--s", "x"],
        vec!["bound", "--state", "werner:p=oops", "--r", "z", "--s", "x"],
        vec!["bound", "--state", "bell:phi+", "--r", "w", "--s", "x"],
        vec!["bound", "--state", "bell:phi+", "--r", "z", "--s", "z"],
        vec!["sweep", "--state", "bell:phi+", "--steps", "1"],
        vec!["nonsense"],
    ] {
        let out = uncq(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }

    // 3: well-formed but unphysical states
    for spec in ["werner:p=2", "mmm:c1=1,c2=1,c3=1", "belldiag:p=-0.1"] {
        let out = uncq(&["bound", "--state", spec, "--r", "z", "--s", "x"]);
        assert_eq!(out.status.code(), Some(3), "spec {spec}");
    }
}

#[test]
fn sweep_csv_contract() {
    let out = uncq(&["sweep", "--state", "bell:phi+", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta_s,phi_s,p_d_s,h_s,lhs_pair,berta_rhs,fg_bound");
    assert_eq!(lines.len(), 6, "header plus one row per step");
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7, "row {row}");
        for field in fields {
            let v: f64 = field.parse().expect("numeric field");
            assert!(v.is_finite());
        }
    }
    // endpoints of the default range
    let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    let last: f64 = lines[5].split(',').next().unwrap().parse().unwrap();
    assert!(first.abs() < 1e-12);
    assert!((last - std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn csv_format_for_reports() {
    let out = uncq(&[
        "bound", "--state", "bell:phi+", "--r", "z", "--s", "x", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "header and one row");
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(header.len(), row.len());
    assert!(header.contains(&"berta_rhs"));
    // numeric fields parse with '.' decimal separator regardless of locale
    for (k, v) in header.iter().zip(&row) {
        if *k != "state" {
            let _: f64 = v.parse().unwrap_or_else(|_| panic!("field {k}={v}"));
        }
    }
}

#[test]
fn verify_failure_exit_code_reserved_for_violations() {
    let out = uncq(&["verify", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verify: PASS"));
    assert_eq!(text.lines().filter(|l| l.starts_with("suite ")).count(), 7);

    let out = uncq(&["verify", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn joint_mode_never_exceeds_fixed_mode() {
    let fixed = stdout(&uncq(&["fg", "--state", "mmm:c1=0.5,c2=-0.2,c3=-0.3"]));
    let joint = stdout(&uncq(&["fg", "--state", "mmm:c1=0.5,c2=-0.2,c3=-0.3", "--joint"]));
    let grab = |text: &str, key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.split_whitespace().nth(1))
            .expect("field present")
            .parse()
            .expect("numeric")
    };
    assert!(grab(&joint, "fg_bound") <= grab(&fixed, "fg_bound") + 1e-8);
}
