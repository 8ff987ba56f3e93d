//! End-to-end tests of the `jfp` binary: output shapes and the exit-code
//! contract (0 definitive, 1 input error, 2 unknown within budget).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn jfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jfp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn jfp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jfp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn transform_dihedral_output_shape() {
    let out = jfp(&["transform", &fixture("d8_classical.fp")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("< s, t, b, b1, b2 |"), "{first}");
    assert!(text.contains("pair 2: input relator 2 -> output relators 4, 5"));
}

#[test]
fn transform_free_presentation_is_identity() {
    let out = jfp(&["transform", &fixture("z.fp")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "< x | >");
}

#[test]
fn malformed_input_exits_1_with_span() {
    let out = jfp_stdin(&["order", "-"], "< x | x^ >");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error"), "{err}");
    // Span rendering: offsets appear in the message.
    assert!(err.chars().any(|c| c.is_ascii_digit()), "{err}");
}

#[test]
fn order_of_semidirect_k4() {
    let out = jfp(&["order", &fixture("semidirect_k4.fp")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "60");
}

#[test]
fn order_of_free_group_is_unknown() {
    let out = jfp(&["order", &fixture("z.fp"), "--max-cosets", "500"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("unknown"));
}

#[test]
fn order_reads_stdin() {
    let out = jfp_stdin(&["order", "-"], "< x | x^6 >");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn abelian_output() {
    let out = jfp(&["abelian", &fixture("d8_classical.fp")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "Z/2 x Z/2");
    let out = jfp_stdin(&["abelian", "-", "--format", "json"], "< x, y | x^2 >");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["torsion"], serde_json::json!(["2"]));
    assert_eq!(v["free_rank"], serde_json::json!(1));
}

#[test]
fn low_index_counts_z4_lattice() {
    let out = jfp_stdin(&["low-index", "-", "--max-index", "4"], "< x | x^4 >");
    assert_eq!(out.status.code(), Some(0));
    // Z4 has exactly one subgroup of each index 1, 2, 4.
    assert!(stdout(&out).contains("3 conjugacy classes of index <= 4"));
}

#[test]
fn certify_infinite_exit_codes() {
    // Definitive: infinite dihedral certified via an index-2 subgroup.
    let out = jfp_stdin(&["certify-infinite", "-"], "< s, t | t^2, t^-1*s*t*s >");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index 2"));
    // Definitive refutation: finite group.
    let out = jfp(&["certify-infinite", &fixture("d8_classical.fp")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("finite of order 8"));
    // Unknown within a starved budget.
    let out = jfp(&[
        "certify-infinite",
        &fixture("d8_classical.fp"),
        "--max-cosets",
        "3",
        "--max-index",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_same_accepts_transform_output() {
    let transformed = stdout(&jfp(&["transform", &fixture("d8_classical.fp")]));
    let presentation = transformed.lines().next().unwrap();
    let dir = std::env::temp_dir().join("jfp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d8_transformed.fp");
    std::fs::write(&path, presentation).unwrap();
    let out = jfp(&["verify-same", &fixture("d8_classical.fp"), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn verify_same_detects_difference() {
    let dir = std::env::temp_dir().join("jfp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z2.fp");
    std::fs::write(&path, "< x | x^2 >").unwrap();
    let path3 = dir.join("z3.fp");
    std::fs::write(&path3, "< x | x^3 >").unwrap();
    let out = jfp(&["verify-same", path.to_str().unwrap(), path3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("false"));
}

#[test]
fn report_transform_json_schema() {
    let out = jfp(&["report", "--transform", &fixture("d8_classical.fp"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["presentation"].is_string());
    assert_eq!(v["deficiency"], serde_json::json!(-1));
    assert_eq!(v["summary"], "just-finite");
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 6);
    for verdict in verdicts {
        assert!(verdict["relator_index"].is_number());
        assert!(verdict["certificate_kind"].as_str().unwrap().starts_with("infinite"));
        assert!(verdict["witness"].is_object());
        assert_eq!(verdict["budget_used"]["max_cosets"], serde_json::json!(100000));
    }
    assert_eq!(v["irredundancy"].as_array().unwrap().len(), 3);
}

#[test]
fn report_exit_codes() {
    // Not-just-finite is a definitive answer.
    let out = jfp(&["report", &fixture("d8_classical.fp")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("not-just-finite"));
    // Starved budget gives an inconclusive summary.
    let out = jfp(&[
        "report",
        &fixture("d8_alt.fp"),
        "--max-cosets",
        "3",
        "--max-index",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("inconclusive"));
}

#[test]
fn cyclic_shortcut_flag() {
    let out = jfp_stdin(&["transform", "-", "--cyclic-shortcut"], "< x, y | x^3, y >");
    assert_eq!(out.status.code(), Some(0));
    // The input presents the cyclic group of order 3.
    assert!(stdout(&out).starts_with("< x | x^3 >"), "{}", stdout(&out));
    // Without the flag the construction runs as usual.
    let out = jfp_stdin(&["transform", "-"], "< x, y | x^3, y >");
    assert!(stdout(&out).starts_with("< x, y, b, b1 |"), "{}", stdout(&out));
}

#[test]
fn missing_file_exits_1() {
    let out = jfp(&["order", "/nonexistent/nope.fp"]);
    assert_eq!(out.status.code(), Some(1));
}
