//! Scenario-file parsing and validation.
//!
//! The format is a flat key-value text with section headers, chosen for
//! hand-editability:
//!
//! ```text
//! [medium]
//! omega_c = 3.0
//! delta_p = 5.0
//! c6 = 1000.0
//! density = 0.24
//! alpha = 70.0
//!
//! [cavity]
//! t_mirror = 0.5
//! cavity_detuning = pi/2
//!
//! [sweep]
//! kind = input_output
//!
//! [output]
//! dir = out
//! n_samples = 2001
//! ```
//!
//! Angles accept `pi` forms (`pi/2`, `3pi/2`, `1.5pi`). Syntax problems are
//! parse errors (exit 2); missing, unknown, or out-of-range keys are
//! validation errors (exit 3).

use std::collections::HashMap;
use std::path::PathBuf;

use ring_ob_core::{CavityConfig, MediumParams};

use crate::error::CliError;

/// Parameter swept by a multi-curve `vary` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaryParam {
    DeltaP,
    OmegaC,
    Alpha,
    Density,
    TMirror,
    CavityDetuning,
}

impl VaryParam {
    pub fn key(&self) -> &'static str {
        match self {
            VaryParam::DeltaP => "delta_p",
            VaryParam::OmegaC => "omega_c",
            VaryParam::Alpha => "alpha",
            VaryParam::Density => "density",
            VaryParam::TMirror => "t_mirror",
            VaryParam::CavityDetuning => "cavity_detuning",
        }
    }

    fn from_key(key: &str) -> Option<Self> {
        Some(match key {
            "delta_p" => VaryParam::DeltaP,
            "omega_c" => VaryParam::OmegaC,
            "alpha" => VaryParam::Alpha,
            "density" => VaryParam::Density,
            "t_mirror" => VaryParam::TMirror,
            "cavity_detuning" => VaryParam::CavityDetuning,
            _ => return None,
        })
    }
}

/// Parameter of a scaling-collapse sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleParam {
    /// η ∝ ε⁻³ with ε the coupling ratio; intensities rescale by ε⁻ᵉ.
    OmegaC,
    /// η ∝ ε⁺² with ε the density ratio (α scaled proportionally);
    /// intensities rescale by ε⁺ᵉ.
    Density,
}

impl ScaleParam {
    pub fn key(&self) -> &'static str {
        match self {
            ScaleParam::OmegaC => "omega_c",
            ScaleParam::Density => "density",
        }
    }
}

/// Optional multi-curve variation of one parameter.
#[derive(Debug, Clone)]
pub struct Vary {
    pub parameter: VaryParam,
    pub values: Vec<f64>,
}

/// The computation a scenario requests.
#[derive(Debug, Clone)]
pub enum SweepKind {
    InputOutput {
        vary: Option<Vary>,
    },
    TransmissionProfile {
        vary: Option<Vary>,
    },
    Hysteresis,
    Scaling {
        parameter: ScaleParam,
        values: Vec<f64>,
        exponent: f64,
    },
    EtaScan {
        delta_p_min: f64,
        delta_p_max: f64,
        n_points: usize,
    },
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::InputOutput { .. } => "input_output",
            SweepKind::TransmissionProfile { .. } => "transmission_profile",
            SweepKind::Hysteresis => "hysteresis",
            SweepKind::Scaling { .. } => "scaling",
            SweepKind::EtaScan { .. } => "eta_scan",
        }
    }
}

/// Output destination and sweep resolution settings.
#[derive(Debug, Clone)]
pub struct OutputOpts {
    pub dir: PathBuf,
    pub svg: bool,
    pub n_samples: usize,
    pub n_steps: usize,
    pub x_max: Option<f64>,
    pub i_t_max: Option<f64>,
    pub i_i_max: Option<f64>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub medium: MediumParams,
    pub cavity: CavityConfig,
    pub sweep: SweepKind,
    pub output: OutputOpts,
}

/// One section's keys with line numbers and consumption tracking.
struct KeyBag {
    section: &'static str,
    entries: HashMap<String, (String, usize)>,
    consumed: Vec<String>,
}

impl KeyBag {
    fn new(section: &'static str) -> Self {
        KeyBag {
            section,
            entries: HashMap::new(),
            consumed: Vec::new(),
        }
    }

    fn insert(&mut self, key: String, value: String, line: usize) -> Result<(), CliError> {
        if self.entries.insert(key.clone(), (value, line)).is_some() {
            return Err(CliError::Parse {
                line,
                message: format!("duplicate key `{key}` in [{}]", self.section),
            });
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        let hit = self.entries.remove(key);
        if hit.is_some() {
            self.consumed.push(key.to_string());
        }
        hit
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((raw, line)) => parse_number(&raw).map(Some).ok_or(CliError::Parse {
                line,
                message: format!("key `{key}`: `{raw}` is not a number"),
            }),
        }
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, CliError> {
        self.take_f64(key)?
            .ok_or_else(|| CliError::validation(key, format!("missing from [{}]", self.section)))
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((raw, line)) => raw.parse::<usize>().map(Some).map_err(|_| CliError::Parse {
                line,
                message: format!("key `{key}`: `{raw}` is not a non-negative integer"),
            }),
        }
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((raw, line)) => match raw.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(CliError::Parse {
                    line,
                    message: format!("key `{key}`: expected `true` or `false`, got `{raw}`"),
                }),
            },
        }
    }

    fn take_values(&mut self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((raw, line)) => {
                let mut out = Vec::new();
                for part in raw.split(',') {
                    let part = part.trim();
                    out.push(parse_number(part).ok_or(CliError::Parse {
                        line,
                        message: format!("key `{key}`: `{part}` is not a number"),
                    })?);
                }
                Ok(Some(out))
            }
        }
    }

    /// Every key must have been consumed by now.
    fn finish(self) -> Result<(), CliError> {
        if let Some((key, (_, _))) = self.entries.into_iter().next() {
            return Err(CliError::validation(
                &key,
                format!("unknown key in [{}]", self.section),
            ));
        }
        Ok(())
    }
}

/// Parses numbers, accepting `pi` angle forms: `pi`, `pi/2`, `3pi/2`,
/// `1.5pi`, `3*pi/2`, and plain floats.
pub fn parse_number(raw: &str) -> Option<f64> {
    let s = raw.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let lower = s.to_ascii_lowercase();
    let idx = lower.find("pi")?;
    let (head, rest) = (lower[..idx].trim(), lower[idx + 2..].trim());
    let coef = if head.is_empty() {
        1.0
    } else {
        head.strip_suffix('*')
            .unwrap_or(head)
            .trim()
            .parse::<f64>()
            .ok()?
    };
    let div = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    let v = coef * std::f64::consts::PI / div;
    v.is_finite().then_some(v)
}

/// Parses and validates a scenario from its text.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let mut sections: HashMap<&'static str, KeyBag> = HashMap::new();
    for name in ["medium", "cavity", "sweep", "output"] {
        sections.insert(name, KeyBag::new(name));
    }

    let mut current: Option<&'static str> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(CliError::Parse {
                line: line_no,
                message: "section header missing `]`".into(),
            })?;
            current = Some(match name {
                "medium" => "medium",
                "cavity" => "cavity",
                "sweep" => "sweep",
                "output" => "output",
                other => {
                    return Err(CliError::Parse {
                        line: line_no,
                        message: format!("unknown section `[{other}]`"),
                    })
                }
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let section = current.ok_or(CliError::Parse {
            line: line_no,
            message: "key outside any section".into(),
        })?;
        sections
            .get_mut(section)
            .expect("sections pre-registered")
            .insert(key.trim().to_string(), value.trim().to_string(), line_no)?;
    }

    let medium = build_medium(sections.remove("medium").expect("registered"))?;
    let cavity = build_cavity(sections.remove("cavity").expect("registered"))?;
    let sweep = build_sweep(sections.remove("sweep").expect("registered"))?;
    let output = build_output(sections.remove("output").expect("registered"))?;

    Ok(Scenario {
        medium,
        cavity,
        sweep,
        output,
    })
}

fn build_medium(mut bag: KeyBag) -> Result<MediumParams, CliError> {
    let omega_c = bag.require_f64("omega_c")?;
    let delta_p = bag.require_f64("delta_p")?;
    let c6 = bag.require_f64("c6")?;
    let density = bag.require_f64("density")?;
    let alpha = bag.require_f64("alpha")?;
    let gamma2 = bag.take_f64("gamma2")?;
    let gamma13 = bag.take_f64("gamma13")?;
    let delta_c = bag.take_f64("delta_c")?;
    let length = bag.take_f64("length")?;
    let lambda_probe = bag.take_f64("lambda_probe")?;
    bag.finish()?;

    let mut medium =
        MediumParams::new(omega_c, delta_p, c6, density, alpha).map_err(CliError::from_model)?;
    if let Some(gamma2) = gamma2 {
        medium = medium.with_gamma2(gamma2).map_err(CliError::from_model)?;
    }
    if let Some(gamma13) = gamma13 {
        medium = medium.with_gamma13(gamma13).map_err(CliError::from_model)?;
    }
    if let Some(delta_c) = delta_c {
        if delta_c != -delta_p {
            return Err(CliError::validation(
                "delta_c",
                format!("two-photon resonance requires delta_c = {}", -delta_p),
            ));
        }
    }
    match (length, lambda_probe) {
        (Some(length), Some(lambda)) => {
            medium = medium
                .with_geometry(length, lambda)
                .map_err(CliError::from_model)?;
        }
        (None, None) => {}
        (Some(_), None) => {
            return Err(CliError::validation(
                "lambda_probe",
                "required when `length` is given",
            ))
        }
        (None, Some(_)) => {
            return Err(CliError::validation(
                "length",
                "required when `lambda_probe` is given",
            ))
        }
    }
    Ok(medium)
}

fn build_cavity(mut bag: KeyBag) -> Result<CavityConfig, CliError> {
    let t_mirror = bag.require_f64("t_mirror")?;
    let detuning = bag.take_f64("cavity_detuning")?.unwrap_or(0.0);
    let r_mirror = bag.take_f64("r_mirror")?;
    bag.finish()?;

    let cavity = CavityConfig::new(t_mirror, detuning).map_err(CliError::from_model)?;
    if let Some(r) = r_mirror {
        if r != cavity.r_mirror {
            return Err(CliError::validation(
                "r_mirror",
                format!("must equal 1 - t_mirror = {}", cavity.r_mirror),
            ));
        }
    }
    Ok(cavity)
}

fn build_sweep(mut bag: KeyBag) -> Result<SweepKind, CliError> {
    let (kind, _) = bag
        .take("kind")
        .ok_or_else(|| CliError::validation("kind", "missing from [sweep]"))?;

    let sweep = match kind.as_str() {
        "input_output" | "transmission_profile" => {
            let vary = match bag.take("vary") {
                None => {
                    if bag.take("values").is_some() {
                        return Err(CliError::validation(
                            "values",
                            "requires a `vary` parameter",
                        ));
                    }
                    None
                }
                Some((name, line)) => {
                    let parameter = VaryParam::from_key(&name).ok_or(CliError::Parse {
                        line,
                        message: format!("key `vary`: unknown parameter `{name}`"),
                    })?;
                    let values = bag
                        .take_values("values")?
                        .ok_or_else(|| CliError::validation("values", "required with `vary`"))?;
                    if values.is_empty() {
                        return Err(CliError::validation("values", "must not be empty"));
                    }
                    Some(Vary { parameter, values })
                }
            };
            if kind == "input_output" {
                SweepKind::InputOutput { vary }
            } else {
                SweepKind::TransmissionProfile { vary }
            }
        }
        "hysteresis" => SweepKind::Hysteresis,
        "scaling" => {
            let (pname, pline) = bag
                .take("parameter")
                .ok_or_else(|| CliError::validation("parameter", "missing from [sweep]"))?;
            let parameter = match pname.as_str() {
                "omega_c" => ScaleParam::OmegaC,
                "density" => ScaleParam::Density,
                other => {
                    return Err(CliError::Parse {
                        line: pline,
                        message: format!(
                            "key `parameter`: `{other}` is not `omega_c` or `density`"
                        ),
                    })
                }
            };
            let values = bag
                .take_values("values")?
                .ok_or_else(|| CliError::validation("values", "missing from [sweep]"))?;
            if values.len() < 2 {
                return Err(CliError::validation("values", "need at least two values"));
            }
            if values.iter().any(|v| *v <= 0.0) {
                return Err(CliError::validation("values", "must be positive"));
            }
            let exponent = bag.require_f64("exponent")?;
            if exponent <= 0.0 {
                return Err(CliError::validation(
                    "exponent",
                    "must be a positive power-law magnitude",
                ));
            }
            SweepKind::Scaling {
                parameter,
                values,
                exponent,
            }
        }
        "eta_scan" => {
            let delta_p_min = bag.require_f64("delta_p_min")?;
            let delta_p_max = bag.require_f64("delta_p_max")?;
            let n_points = bag.take_usize("n_points")?.unwrap_or(201);
            if delta_p_min >= delta_p_max {
                return Err(CliError::validation(
                    "delta_p_min",
                    "must be below delta_p_max",
                ));
            }
            if n_points < 2 {
                return Err(CliError::validation("n_points", "need at least 2"));
            }
            SweepKind::EtaScan {
                delta_p_min,
                delta_p_max,
                n_points,
            }
        }
        other => {
            return Err(CliError::validation(
                "kind",
                format!("unknown sweep kind `{other}`"),
            ))
        }
    };
    bag.finish()?;
    Ok(sweep)
}

fn build_output(mut bag: KeyBag) -> Result<OutputOpts, CliError> {
    let dir = bag
        .take("dir")
        .map(|(v, _)| PathBuf::from(v))
        .unwrap_or_else(|| PathBuf::from("out"));
    let svg = bag.take_bool("svg")?.unwrap_or(false);
    let n_samples = bag.take_usize("n_samples")?.unwrap_or(2001);
    let n_steps = bag.take_usize("n_steps")?.unwrap_or(2000);
    let x_max = bag.take_f64("x_max")?;
    let i_t_max = bag.take_f64("i_t_max")?;
    let i_i_max = bag.take_f64("i_i_max")?;
    bag.finish()?;

    if n_samples < 2 {
        return Err(CliError::validation("n_samples", "need at least 2"));
    }
    if n_steps < 1 {
        return Err(CliError::validation("n_steps", "need at least 1"));
    }
    for (key, v) in [("x_max", x_max), ("i_t_max", i_t_max), ("i_i_max", i_i_max)] {
        if let Some(v) = v {
            if !v.is_finite() || v < 0.0 {
                return Err(CliError::validation(key, "must be non-negative"));
            }
        }
    }
    Ok(OutputOpts {
        dir,
        svg,
        n_samples,
        n_steps,
        x_max,
        i_t_max,
        i_i_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
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
dir = out
";

    #[test]
    fn parses_minimal_scenario() {
        let s = parse_scenario(BASE).unwrap();
        assert_eq!(s.medium.omega_c, 3.0);
        assert_eq!(s.medium.delta_c, -5.0);
        assert_eq!(s.cavity.r_mirror, 0.5);
        assert!(matches!(s.sweep, SweepKind::InputOutput { vary: None }));
        assert_eq!(s.output.n_samples, 2001);
    }

    #[test]
    fn missing_required_key_is_validation() {
        let text = BASE.replace("c6 = 1000.0\n", "");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("c6"), "message: {err}");
    }

    #[test]
    fn bad_syntax_is_parse_error() {
        let text = BASE.replace("t_mirror = 0.5", "t_mirror 0.5");
        assert_eq!(parse_scenario(&text).unwrap_err().exit_code(), 2);
        let text = BASE.replace("alpha = 70.0", "alpha = seventy");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("alpha"));
    }

    #[test]
    fn unknown_key_is_validation() {
        let text = BASE.replace("alpha = 70.0", "alpha = 70.0\nwavelength = 0.78");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("wavelength"));
    }

    #[test]
    fn pi_forms() {
        assert_eq!(parse_number("pi"), Some(std::f64::consts::PI));
        assert_eq!(parse_number("pi/2"), Some(std::f64::consts::FRAC_PI_2));
        assert_eq!(
            parse_number("3pi/2"),
            Some(3.0 * std::f64::consts::FRAC_PI_2)
        );
        assert_eq!(
            parse_number("3*pi/2"),
            Some(3.0 * std::f64::consts::FRAC_PI_2)
        );
        assert_eq!(parse_number("1.5pi"), Some(1.5 * std::f64::consts::PI));
        assert_eq!(parse_number("2.75"), Some(2.75));
        assert_eq!(parse_number("pie"), None);
        assert_eq!(parse_number("nan"), None);
    }

    #[test]
    fn scaling_sweep_parses() {
        let text = BASE.replace(
            "kind = input_output",
            "kind = scaling\nparameter = omega_c\nvalues = 2, 3, 4, 5\nexponent = 3",
        );
        let s = parse_scenario(&text).unwrap();
        match s.sweep {
            SweepKind::Scaling {
                parameter,
                values,
                exponent,
            } => {
                assert_eq!(parameter, ScaleParam::OmegaC);
                assert_eq!(values, vec![2.0, 3.0, 4.0, 5.0]);
                assert_eq!(exponent, 3.0);
            }
            other => panic!("wrong sweep: {other:?}"),
        }
    }

    #[test]
    fn vary_block_parses() {
        let text = BASE.replace(
            "kind = input_output",
            "kind = transmission_profile\nvary = cavity_detuning\nvalues = 0, pi/2, pi, 3pi/2",
        );
        let s = parse_scenario(&text).unwrap();
        match s.sweep {
            SweepKind::TransmissionProfile { vary: Some(v) } => {
                assert_eq!(v.parameter, VaryParam::CavityDetuning);
                assert_eq!(v.values.len(), 4);
                assert!((v.values[3] - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-15);
            }
            other => panic!("wrong sweep: {other:?}"),
        }
    }

    #[test]
    fn inconsistent_delta_c_rejected() {
        let text = BASE.replace("delta_p = 5.0", "delta_p = 5.0\ndelta_c = -4.0");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("delta_c"));
    }
}
