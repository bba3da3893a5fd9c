//! CSV emitters.
//!
//! Data rows carry 12 significant digits in scientific notation and contain
//! no run metadata, so identical scenarios produce byte-identical files.
//! Structural annotations (folds, peaks, jumps) are appended as `#`-prefixed
//! comment lines after the data block.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ring_ob_core::{HysteresisTrace, NonlinearCoefficient, SteadyStateCurve, TransmissionProfile};

use crate::error::CliError;

/// 12 significant digits, scientific.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn write(path: &Path, body: String) -> Result<(), CliError> {
    fs::write(path, body).map_err(CliError::io(path))
}

/// `x,i_in,i_out,transmission` rows plus `#fold` annotations.
pub fn write_curve(path: &Path, curve: &SteadyStateCurve) -> Result<(), CliError> {
    let mut out = String::from("x,i_in,i_out,transmission\n");
    for s in &curve.samples {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(s.x),
            num(s.i_in),
            num(s.i_out),
            num(s.transmission)
        );
    }
    let _ = writeln!(out, "#fold count {}", curve.turning_points.len());
    for tp in &curve.turning_points {
        let _ = writeln!(
            out,
            "#fold x={} i_in={} i_out={} kind={}",
            num(tp.x),
            num(tp.i_in),
            num(tp.i_out),
            tp.kind.label()
        );
    }
    write(path, out)
}

/// `i_out,transmission` rows plus `#peak` annotations.
pub fn write_profile(path: &Path, profile: &TransmissionProfile) -> Result<(), CliError> {
    let mut out = String::from("i_out,transmission\n");
    for (i_t, t) in &profile.samples {
        let _ = writeln!(out, "{},{}", num(*i_t), num(*t));
    }
    let _ = writeln!(out, "#peak count {}", profile.peaks.len());
    for p in &profile.peaks {
        let _ = writeln!(out, "#peak i_out={} height={}", num(p.i_out), num(p.height));
    }
    write(path, out)
}

/// `i_in,i_out,branch` rows (upward block then downward block) plus `#jump`
/// annotations.
pub fn write_hysteresis(path: &Path, trace: &HysteresisTrace) -> Result<(), CliError> {
    let mut out = String::from("i_in,i_out,branch\n");
    for (i_in, i_out) in &trace.upward {
        let _ = writeln!(out, "{},{},up", num(*i_in), num(*i_out));
    }
    for (i_in, i_out) in &trace.downward {
        let _ = writeln!(out, "{},{},down", num(*i_in), num(*i_out));
    }
    let _ = writeln!(out, "#jump count {}", trace.jumps.len());
    for j in &trace.jumps {
        let _ = writeln!(
            out,
            "#jump direction={} i_in={} i_out_before={} i_out_after={}",
            j.direction.label(),
            num(j.i_in),
            num(j.i_out_before),
            num(j.i_out_after)
        );
    }
    write(path, out)
}

/// `delta_p,re_eta,im_eta,magnitude,theta` rows.
pub fn write_eta_scan(path: &Path, rows: &[(f64, NonlinearCoefficient)]) -> Result<(), CliError> {
    let mut out = String::from("delta_p,re_eta,im_eta,magnitude,theta\n");
    for (delta_p, eta) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(*delta_p),
            num(eta.a),
            num(eta.b),
            num(eta.magnitude),
            num(eta.theta)
        );
    }
    write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ring_ob_core::{trace_curve, CavityConfig};

    #[test]
    fn empty_curve_gives_header_and_zero_fold_count() {
        let g = NonlinearCoefficient::new(-2.0, 0.5).unwrap();
        let cav = CavityConfig::new(0.5, 0.0).unwrap();
        let curve = trace_curve(&g, &cav, 0.0, 100).unwrap();
        let dir = std::env::temp_dir().join("ring_ob_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        write_curve(&path, &curve).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "x,i_in,i_out,transmission\n#fold count 0\n");
    }

    #[test]
    fn numbers_carry_twelve_significant_digits() {
        assert_eq!(num(1.0), "1.00000000000e0");
        assert_eq!(num(-0.125), "-1.25000000000e-1");
        let parsed: f64 = num(std::f64::consts::PI).parse().unwrap();
        assert!((parsed - std::f64::consts::PI).abs() < 1e-11);
    }
}
