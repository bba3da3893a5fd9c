//! End-to-end tests driving the `ring-ob` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ring-ob"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ring_ob_cli_{name}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn base_scenario() -> String {
    "\
[medium]
omega_c = 3.0
delta_p = 5.0
c6 = 1000.0
density = 0.24
alpha = 70.0

[cavity]
t_mirror = 0.5
cavity_detuning = 0.0

[sweep]
kind = input_output

[output]
n_samples = 2001
"
    .to_string()
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.ob");
    fs::write(&path, text).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Data rows of a CSV file (header and comment lines skipped).
fn data_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|f| f.trim().trim_end_matches(|c: char| c.is_alphabetic()))
                .filter(|f| !f.is_empty())
                .map(|f| f.parse::<f64>().unwrap())
                .collect()
        })
        .collect()
}

fn comment_lines<'a>(text: &'a str, prefix: &str) -> Vec<&'a str> {
    text.lines().filter(|l| l.starts_with(prefix)).collect()
}

/// Minimal XML well-formedness scan: balanced tags, quoted attributes,
/// escaped ampersands.
fn assert_well_formed_xml(text: &str) {
    let mut stack: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'<' => {
                let end = text[i..].find('>').map(|p| i + p).expect("unclosed tag");
                let inner = &text[i + 1..end];
                assert!(!inner.is_empty(), "empty tag");
                if let Some(name) = inner.strip_prefix('/') {
                    let open = stack.pop().unwrap_or_else(|| panic!("stray </{name}>"));
                    assert_eq!(open, name.trim(), "mismatched closing tag");
                } else if !inner.ends_with('/')
                    && !inner.starts_with('?')
                    && !inner.starts_with('!')
                {
                    let name = inner.split_whitespace().next().unwrap().to_string();
                    stack.push(name);
                }
                i = end + 1;
            }
            b'&' => {
                let rest = &text[i..];
                assert!(
                    ["&amp;", "&lt;", "&gt;", "&quot;", "&apos;"]
                        .iter()
                        .any(|e| rest.starts_with(e)),
                    "unescaped ampersand"
                );
                i += 1;
            }
            _ => i += 1,
        }
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
}

#[test]
fn missing_required_key_exits_3_naming_it() {
    let dir = workdir("missing_c6");
    let text = base_scenario().replace("c6 = 1000.0\n", "");
    let path = write_scenario(&dir, &text);
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("c6"), "stderr must name the key: {stderr}");
}

#[test]
fn syntax_error_exits_2() {
    let dir = workdir("syntax");
    let path = write_scenario(
        &dir,
        &base_scenario().replace("t_mirror = 0.5", "t_mirror 0.5"),
    );
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let path = write_scenario(&dir, &base_scenario().replace("= 70.0", "= seventy"));
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn out_of_range_output_intensity_exits_4() {
    let dir = workdir("range");
    let text = base_scenario()
        .replace("kind = input_output", "kind = transmission_profile")
        .replace("n_samples = 2001", "n_samples = 2001\ni_t_max = 0.2");
    let path = write_scenario(&dir, &text);
    let out = bin()
        .arg("run")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn curve_csv_is_self_consistent() {
    let dir = workdir("roundtrip");
    let path = write_scenario(&dir, &base_scenario());
    let out_dir = dir.join("out");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);

    let csv = out_dir.join("curve.csv");
    let rows = data_rows(&csv);
    assert!(rows.len() > 100);
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0, 1.0]);
    for row in &rows {
        let (i_in, i_out, trans) = (row[1], row[2], row[3]);
        if i_in > 0.0 {
            let recomputed = i_out / i_in;
            assert!(
                (recomputed - trans).abs() <= 1e-9 * trans.max(1.0),
                "transmission column inconsistent: {recomputed} vs {trans}"
            );
        }
    }

    let text = fs::read_to_string(&csv).unwrap();
    let count_line = comment_lines(&text, "#fold count");
    assert_eq!(count_line.len(), 1);
    let declared: usize = count_line[0].rsplit(' ').next().unwrap().parse().unwrap();
    let fold_lines = comment_lines(&text, "#fold x=");
    assert_eq!(fold_lines.len(), declared);
    assert!(declared >= 4, "Fig-5-like scenario should be multistable");

    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("scenario_hash = fnv1a64:"));
    assert!(manifest.contains("r_c ="));
    assert!(manifest.contains("eta_a ="));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = workdir("determinism");
    let text = base_scenario().replace(
        "kind = input_output",
        "kind = scaling\nparameter = omega_c\nvalues = 2, 3\nexponent = 3",
    );
    let path = write_scenario(&dir, &text);
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]);
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
    ]);
    for name in ["curve_00.csv", "curve_01.csv", "collapse_report.txt"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn coupling_scaling_run_reports_tight_collapse() {
    let dir = workdir("fig2");
    let text = base_scenario()
        .replace("omega_c = 3.0", "omega_c = 2.0")
        .replace(
            "kind = input_output",
            "kind = scaling\nparameter = omega_c\nvalues = 2, 3, 4, 5\nexponent = 3",
        );
    let path = write_scenario(&dir, &text);
    let out_dir = dir.join("out");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);

    for idx in 0..4 {
        assert!(out_dir.join(format!("curve_{idx:02}.csv")).exists());
    }
    let report = fs::read_to_string(out_dir.join("collapse_report.txt")).unwrap();
    let dev_line = report
        .lines()
        .find(|l| l.starts_with("max_relative_deviation"))
        .unwrap();
    let dev: f64 = dev_line.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!(dev < 1e-9, "collapse deviation {dev}");
}

#[test]
fn detuning_profiles_shift_first_peak() {
    let dir = workdir("fig6");
    let text = base_scenario().replace(
        "kind = input_output",
        "kind = transmission_profile\nvary = cavity_detuning\nvalues = 0, pi/2, pi, 3pi/2",
    );
    let path = write_scenario(&dir, &text);
    let out_dir = dir.join("out");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);

    let mut first_peaks = Vec::new();
    for idx in 0..4 {
        let text = fs::read_to_string(out_dir.join(format!("profile_{idx:02}.csv"))).unwrap();
        let peaks = comment_lines(&text, "#peak i_out=");
        assert!(!peaks.is_empty(), "profile {idx} has no peaks");
        let first: f64 = peaks[0]
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("i_out="))
            .unwrap()
            .parse()
            .unwrap();
        first_peaks.push(first);
    }
    // Larger detuning brings the first interference resonance to lower
    // output intensity (the accumulated phase is negative-going).
    assert!(
        first_peaks[3] < first_peaks[2]
            && first_peaks[2] < first_peaks[1]
            && first_peaks[1] < first_peaks[0],
        "first peaks not ordered by detuning: {first_peaks:?}"
    );
}

#[test]
fn hysteresis_blocks_are_contiguous() {
    let dir = workdir("hysteresis");
    let text = base_scenario()
        .replace("kind = input_output", "kind = hysteresis")
        .replace("n_samples = 2001", "n_samples = 3001\nn_steps = 400");
    let path = write_scenario(&dir, &text);
    let out_dir = dir.join("out");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);

    let text = fs::read_to_string(out_dir.join("hysteresis.csv")).unwrap();
    let branches: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert!(branches.contains(&"up") && branches.contains(&"down"));
    let switches = branches.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(switches, 1, "branch column must form two contiguous blocks");
    assert!(!comment_lines(&text, "#jump direction=").is_empty());
}

#[test]
fn multi_detuning_svg_is_well_formed_with_legend() {
    let dir = workdir("fig3_svg");
    let text = base_scenario().replace(
        "kind = input_output",
        "kind = input_output\nvary = delta_p\nvalues = 1, 2, 3, 4, 5",
    );
    let path = write_scenario(&dir, &text);
    let out_dir = dir.join("out");
    run_ok(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--svg",
    ]);

    for idx in 0..5 {
        assert!(out_dir.join(format!("curve_{idx:02}.csv")).exists());
    }
    let svg = fs::read_to_string(out_dir.join("curves.svg")).unwrap();
    assert_well_formed_xml(&svg);
    assert_eq!(
        svg.matches("<polyline").count(),
        5,
        "one polyline per curve"
    );
    for v in 1..=5 {
        assert!(
            svg.contains(&format!("delta_p = {v}")),
            "legend must label delta_p = {v}"
        );
    }
}

#[test]
fn eta_subcommand_prints_text_and_csv() {
    let out = run_ok(&[
        "eta",
        "--delta-p",
        "5",
        "--omega-c",
        "3",
        "--alpha",
        "70",
        "--c6",
        "1000",
        "--density",
        "0.24",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a (dispersion)"));
    assert!(text.contains("theta"));

    let out = run_ok(&[
        "eta",
        "--delta-p",
        "5",
        "--omega-c",
        "3",
        "--alpha",
        "70",
        "--c6",
        "1000",
        "--density",
        "0.24",
        "--csv",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,b,magnitude,theta");
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[0] < 0.0 && row[1] > 0.0);
    assert!((row[2] - row[0].hypot(row[1])).abs() < 1e-9 * row[2]);
    // Phase law at delta_p = 5.
    let expected = 3.0 * std::f64::consts::PI / 4.0 + 0.5 * (10.0f64).atan();
    assert!((row[3] - expected).abs() < 1e-9);
}

#[test]
fn validate_subcommand_accepts_good_scenario() {
    let dir = workdir("validate");
    let path = write_scenario(&dir, &base_scenario());
    let out = run_ok(&["validate", path.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("scenario ok"));
}
