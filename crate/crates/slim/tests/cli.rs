use std::path::Path;
use std::process::{Command, Output};

use slim::listing::parse_netlist;
use slim::pgm;
use slim_core::compiler::{build_csa_multiplier, from_bits, verify_equivalence};
use slim_core::sobel::Image;

fn slim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slim")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = slim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn edp_default_prints_calibrated_ratios() {
    let text = stdout(&["edp", "--config", "default"]);
    let ratio = text.lines().find(|l| l.starts_with("Ratio")).unwrap();
    let cols: Vec<&str> = ratio.split_whitespace().collect();
    assert_eq!(cols, ["Ratio", "783.44", "45.89", "45.89"]);
}

#[test]
fn edp_json_is_parseable() {
    let text = stdout(&["edp", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["slim"]["system"], "SLIM");
    let overall = v["slim"]["overall_edp"].as_f64().unwrap();
    let parts = v["slim"]["data_transfer_edp"].as_f64().unwrap() + v["slim"]["compute_edp"].as_f64().unwrap();
    assert_eq!(overall, parts);
}

#[test]
fn gate_report_lists_and() {
    let text = stdout(&["gate-report"]);
    let and = text.lines().find(|l| l.starts_with("AND ")).unwrap();
    let cols: Vec<&str> = and.split_whitespace().collect();
    assert_eq!(cols, ["AND", "3", "3", "1.750", "1.75x", "2", "2"]);
}

#[test]
fn include_refresh_doubles_energy() {
    let text = stdout(&["gate-report", "--events", "include-refresh"]);
    let xor = text.lines().find(|l| l.starts_with("XOR ")).unwrap();
    assert_eq!(xor.split_whitespace().nth(3), Some("6.000"));
}

#[test]
fn sobel_constant_image_is_black_and_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.pgm");
    std::fs::write(&input, pgm::encode(&Image::filled(12, 10, 8, 200), pgm::Encoding::Binary)).unwrap();
    let mut reports = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("edges{run}.ascii.pgm"));
        let report = dir.path().join(format!("report{run}.json"));
        let text =
            stdout(&["sobel", "--input", path_str(&input), "--out", path_str(&out), "--report", path_str(&report)]);
        assert!(text.contains("reference_match=true memory_preserved=true"), "{text}");
        let edges = pgm::read(&out).unwrap();
        assert_eq!((edges.width, edges.height, edges.bit_depth), (12, 10, 4));
        // Zero padding makes the border respond; the interior is flat.
        for y in 1..9 {
            for x in 1..11 {
                assert_eq!(edges.get(x, y), 0);
            }
        }
        reports.push(std::fs::read(&report).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert!(v["comparison"]["slim"]["overall_edp"].as_f64().unwrap() > 0.0);
    assert!(v["comparison"]["header"].as_str().unwrap().contains("zero-pad"));
}

#[test]
fn sobel_black_image_is_all_black() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("black.pgm");
    let out = dir.path().join("out.pgm");
    std::fs::write(&input, pgm::encode(&Image::filled(8, 8, 8, 0), pgm::Encoding::Ascii)).unwrap();
    stdout(&["sobel", "--input", path_str(&input), "--kernel", "both", "--out", path_str(&out)]);
    assert!(pgm::read(&out).unwrap().pixels.iter().all(|p| *p == 0));
}

#[test]
fn array_dump_persists_between_commands() {
    let dir = tempfile::tempdir().unwrap();
    let arr = dir.path().join("array.txt");
    let a = path_str(&arr);
    stdout(&["write", "--addr", "3.7.2.5", "--bit", "1", "--array", a]);
    let logic = stdout(&["logic", "--op", "nor", "--addr", "3.7.2.5", "--a", "1", "--b", "0", "--array", a]);
    assert!(logic.contains("= 0") && logic.contains("state=10"), "{logic}");
    let read = stdout(&["read", "--addr", "3.7.2.5", "--array", a]);
    assert!(read.contains("state=10 memory=1 logic=0"), "{read}");
    let untouched = stdout(&["read", "--addr", "0.0.0.0", "--array", a]);
    assert!(untouched.contains("memory=0 logic=1"), "{untouched}");
}

#[test]
fn pulse_trace_and_repeat() {
    let text = stdout(&["pulse", "--from", "11", "--repeat", "3", "P3", "P2"]);
    let steps: Vec<&str> = text.lines().filter(|l| l.chars().next().unwrap().is_ascii_digit()).collect();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[0], "0 0 P3 11 10 1 0");
    assert_eq!(steps[5], "2 1 P2 10 11 1 1");
}

#[test]
fn compile_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mul.txt");
    stdout(&["compile", "mul", "--width", "4", "--out", path_str(&out)]);
    let n = parse_netlist(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(n, build_csa_multiplier(4).unwrap());
    assert!(verify_equivalence(&n, |x| {
        let p = from_bits(&x[..4]) * from_bits(&x[4..]);
        (0..8).map(|i| p >> i & 1 == 1).collect()
    })
    .unwrap());
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["logic", "--op", "xyzzy", "--addr", "0.0.0.0", "--a", "0", "--b", "0"][..],
        &["read", "--addr", "0.0.0"],
        &["read", "--addr", "99.0.0.0"],
        &["write", "--addr", "0.0.0.0", "--bit", "2"],
        &["compile", "nope"],
        &["pulse", "P4"],
        &["edp", "--refresh", "sometimes"],
        &["frobnicate"],
    ] {
        let out = slim(args);
        assert!(!out.status.success(), "{args:?} should fail");
    }
}

#[test]
fn missing_config_key_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("partial.cfg");
    let text: String = slim::config::DEFAULT_CONFIG
        .lines()
        .filter(|l| !l.starts_with("cpu.imul.cycles"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&cfg, text).unwrap();
    let out = slim(&["edp", "--config", path_str(&cfg)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cpu.imul.cycles"));

    std::fs::write(&cfg, "base = default\ncpu.miss_rate = 0.1\n").unwrap();
    let text = stdout(&["edp", "--config", path_str(&cfg)]);
    let ratio: Vec<&str> = text.lines().find(|l| l.starts_with("Ratio")).unwrap().split_whitespace().collect();
    // Misses only add compute stalls, so the transfer ratio stays put.
    assert_eq!(ratio[1], "783.44");
    assert!(ratio[3].parse::<f64>().unwrap() > 45.89 * 1.5);
}
