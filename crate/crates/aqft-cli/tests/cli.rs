//! End-to-end checks of the `aqft` binary: output shapes, guard diagnostics,
//! and byte-for-byte determinism.

use std::process::{Command, Output};

fn aqft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn schedule_width_five_brackets() {
    let out = aqft(&["schedule", "--l", "5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "[P4] [Q34] [P3 Q24] [Q23 Q14] [P2 Q13 Q04] [Q12 Q03] [P1 Q02] [Q01] [P0]\ndepth=9\n"
    );
}

#[test]
fn schedule_reports_empty_steps() {
    let out = aqft(&["schedule", "--l", "4", "--m", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("depth=4"), "{text}");
    assert!(text.contains("empty_steps=1,3,5"), "{text}");
}

#[test]
fn deviation_at_production_scale() {
    let out = aqft(&["deviation", "--l", "500", "--m", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("analytic_bound=2.9960562263391427e-3"),
        "{text}"
    );
    assert!(text.contains("observed_max=n/a (width guard)"), "{text}");
}

#[test]
fn deviation_observed_when_small() {
    let out = aqft(&["deviation", "--l", "6", "--m", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("observed_max=0e0"), "{text}");
    assert!(text.contains("bound_satisfied=true"), "{text}");
}

#[test]
fn matrix_text_export() {
    let out = aqft(&["matrix", "--kind", "fft", "--l", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "l=3 m=3 row=c col=a");
}

#[test]
fn matrix_width_guard_is_single_line() {
    let out = aqft(&["matrix", "--kind", "fft", "--l", "11"]);
    assert!(!out.status.success());
    let diagnostic = stderr(&out);
    assert_eq!(diagnostic.lines().count(), 1, "{diagnostic}");
    assert!(diagnostic.contains("exceeds guard"), "{diagnostic}");
}

#[test]
fn hadamard_kind_matches_coarsest_approximation() {
    let ht = aqft(&["matrix", "--kind", "ht", "--l", "3"]);
    let afft = aqft(&["matrix", "--kind", "afft", "--l", "3", "--m", "1"]);
    assert!(ht.status.success() && afft.status.success());
    // Same numbers, different header.
    let strip = |s: String| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    let ht_body = strip(stdout(&ht));
    let afft_body = strip(stdout(&afft));
    for (a, b) in ht_body.split_whitespace().zip(afft_body.split_whitespace()) {
        let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn afft_requires_m() {
    let out = aqft(&["matrix", "--kind", "afft", "--l", "3"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("needs --m"));
}

#[test]
fn plan_golden_and_import_round_trip() {
    let out = aqft(&["plan", "--l", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text,
        "# l=3 m=3 hadamard=3 controlled_phase=3\nP 2\nQ 1 2 2 3\nP 1\nQ 0 2 1 3\nQ 0 1 2 3\nP 0\n"
    );

    let dir = std::env::temp_dir().join(format!("aqft-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plan.txt");
    std::fs::write(&path, &text).unwrap();
    let reimported = aqft(&["plan", "--import", path.to_str().unwrap()]);
    assert!(reimported.status.success());
    assert_eq!(stdout(&reimported), text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn orderfind_recovers_factors() {
    let out = aqft(&[
        "orderfind",
        "--n",
        "15",
        "--x",
        "7",
        "--l",
        "8",
        "--m",
        "8",
        "--shots",
        "16",
        "--seed",
        "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("period=4"), "{text}");
    assert!(text.contains("factors=3 x 5"), "{text}");
}

#[test]
fn orderfind_reports_factoring_failure_mode() {
    // 14 ≡ −1 (mod 15) has order 2 with 14^(r/2) ≡ −1: the period is found
    // but yields no factors.
    let out = aqft(&[
        "orderfind",
        "--n",
        "15",
        "--x",
        "14",
        "--l",
        "8",
        "--shots",
        "16",
        "--seed",
        "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("period=2"), "{text}");
    assert!(text.contains("factors=none"), "{text}");
}

#[test]
fn orderfind_rejects_even_modulus() {
    let out = aqft(&["orderfind", "--n", "16", "--x", "3"]);
    assert!(!out.status.success());
    let diagnostic = stderr(&out);
    assert_eq!(diagnostic.lines().count(), 1);
    assert!(diagnostic.contains("even"), "{diagnostic}");
}

#[test]
fn orderfind_rejects_shared_factor() {
    let out = aqft(&["orderfind", "--n", "15", "--x", "6", "--l", "8"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("not coprime"));
}

#[test]
fn identical_command_and_seed_are_byte_identical() {
    let args = [
        "orderfind",
        "--n",
        "15",
        "--x",
        "7",
        "--l",
        "8",
        "--m",
        "5",
        "--shots",
        "24",
        "--seed",
        "7",
    ];
    let first = aqft(&args);
    let second = aqft(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn orderfind_json_report() {
    let out = aqft(&[
        "orderfind",
        "--n",
        "15",
        "--x",
        "7",
        "--l",
        "8",
        "--shots",
        "8",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["config"]["modulus_n"], 15);
    assert_eq!(value["runs"].as_array().unwrap().len(), 8);
}

#[test]
fn output_dir_env_var_resolves_relative_paths() {
    let dir = std::env::temp_dir().join(format!("aqft-outdir-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_aqft"))
        .args(["matrix", "--kind", "fft", "--l", "2", "--output", "m.txt"])
        .env("AQFT_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let written = std::fs::read_to_string(dir.join("m.txt")).unwrap();
    assert!(written.starts_with("l=2 m=2 row=c col=a\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
