//! Run manifest: resolved parameters and output inventory for provenance.
//!
//! The manifest is the only file carrying run metadata; data files stay
//! byte-reproducible. The scenario text is fingerprinted with FNV-1a so a
//! manifest can be matched to the exact input that produced it.

use std::fmt::Display;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ring_ob_core::{BlockadeDerived, CavityConfig, MediumParams, NonlinearCoefficient};

use crate::csv::num;
use crate::error::CliError;

/// 64-bit FNV-1a of the scenario bytes.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Incrementally built manifest body.
pub struct Manifest {
    body: String,
}

impl Manifest {
    pub fn new(scenario_path: &Path, scenario_text: &str, sweep_kind: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(body, "scenario = {}", scenario_path.display());
        let _ = writeln!(
            body,
            "scenario_hash = fnv1a64:{:016x}",
            fnv1a64(scenario_text.as_bytes())
        );
        let _ = writeln!(body, "sweep_kind = {sweep_kind}");
        let _ = writeln!(
            body,
            "units = frequencies and rates in gamma2; intensities dimensionless |omega_p/gamma2|^2; lengths in the unit implied by c6"
        );
        Manifest { body }
    }

    pub fn section(&mut self, title: &str) {
        let _ = writeln!(self.body, "\n[{title}]");
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        let _ = writeln!(self.body, "{key} = {value}");
    }

    pub fn medium(&mut self, p: &MediumParams, d: &BlockadeDerived) {
        self.section("medium");
        self.kv("gamma2", num(p.gamma2));
        self.kv("gamma12", num(p.gamma12));
        self.kv("gamma13", num(p.gamma13));
        self.kv("omega_c", num(p.omega_c));
        self.kv("delta_p", num(p.delta_p));
        self.kv("delta_c", num(p.delta_c));
        self.kv("c6", num(p.c6));
        self.kv("density", num(p.density));
        self.kv("alpha", num(p.alpha));
        if let Some(length) = p.length {
            self.kv("length", num(length));
        }
        if let Some(lambda) = p.lambda_probe {
            self.kv("lambda_probe", num(lambda));
        }
        self.section("derived");
        self.kv("delta_eit", num(d.delta_eit));
        self.kv("r_c", num(d.r_c));
        self.kv("n_blockade", num(d.n_blockade));
    }

    pub fn cavity(&mut self, cav: &CavityConfig) {
        self.section("cavity");
        self.kv("t_mirror", num(cav.t_mirror));
        self.kv("r_mirror", num(cav.r_mirror));
        self.kv("cavity_detuning", num(cav.cavity_detuning));
    }

    pub fn eta(&mut self, eta: &NonlinearCoefficient) {
        self.kv("eta_a", num(eta.a));
        self.kv("eta_b", num(eta.b));
        self.kv("eta_magnitude", num(eta.magnitude));
        self.kv("eta_theta", num(eta.theta));
    }

    pub fn files(&mut self, files: &[std::path::PathBuf]) {
        self.section("outputs");
        for f in files {
            let name = f
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| f.display().to_string());
            self.kv("file", name);
        }
    }

    pub fn write(self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.body).map_err(CliError::io(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_matches_reference_vectors() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }
}
