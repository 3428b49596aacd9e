//! End-to-end checks of the binary: exit codes, output formats, and the
//! subcommand surfaces.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn crlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn analyze_reports_expected_verdicts() {
    let out = crlab(&["analyze", &corpus("sphere2.crh")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"name\":\"levi_type\",\"verdict\":\"1\""));
    assert!(text.contains("\"verdict\":\"nondegenerate\""));
    assert!(text.contains("\"codimension\":1"));
    assert!(text.contains("\"name\":\"bloom_graham_type\",\"verdict\":\"2\""));
}

#[test]
fn analyze_rejects_non_algebraic_fixture_with_exit_2() {
    let out = crlab(&["analyze", &corpus("example_2_10_M.crh")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 7"), "diagnostic cites the line: {err}");
}

#[test]
fn missing_file_is_exit_2() {
    let out = crlab(&["analyze", "no_such_fixture.crh"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_is_exit_3() {
    // An auxiliary relation forces the Rabinowitsch route; a one-pair budget
    // cannot finish, which must surface as the resource exit code.
    let dir = std::env::temp_dir().join("crlab_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("aux_budget.crh");
    std::fs::write(
        &path,
        "name = aux_budget\nN = 2\nrho = z2 + conj(z2) + z1*conj(z1)\n\
         aux u: u^2 - z1\nmap = u^2, 0, z2\n",
    )
    .unwrap();
    let p = path.to_string_lossy().into_owned();
    let out = crlab(&["map-check", &p, "--spair-budget", "1"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // With the default budget the same input completes.
    let out = crlab(&["map-check", &p]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"verdict\":\"true\""));
}

#[test]
fn artin_subcommand_matches_reference_values() {
    let out = crlab(&["artin", "x*Y^2 - 1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"name\":\"gap_bound_r\",\"verdict\":\"2\""));
    assert!(text.contains("\"name\":\"scaling_discriminant_check\",\"verdict\":\"true\""));

    let out = crlab(&["artin", "z1 + 1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_carries_timings_json_does_not() {
    let json = crlab(&["analyze", &corpus("sphere2.crh")]);
    let text = crlab(&["analyze", &corpus("sphere2.crh"), "--format", "text"]);
    let json_s = String::from_utf8(json.stdout).unwrap();
    let text_s = String::from_utf8(text.stdout).unwrap();
    assert!(!json_s.contains("ms"));
    assert!(text_s.contains("ms)"));
}

#[test]
fn flow_subcommand_reports_residuals() {
    let out = crlab(&[
        "flow",
        &corpus("im_w_z1sq_c3.crh"),
        "--field",
        "0,1,0",
        "--h",
        "z3",
        "--t-end",
        "1",
        "--steps",
        "1000",
        "--from",
        "1,0,1,0,0,1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"reparam_defect\":"));
    assert!(text.contains("\"rho_residual\":"));
}

#[test]
fn contact_subcommand_reports_inside_witness() {
    let out = crlab(&["contact", &corpus("example_2_10_Mprime.crh")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"verdict\":\"infinite_contact\""));
    assert!(text.contains("\"certificate\":\"t, 0\""));
}
