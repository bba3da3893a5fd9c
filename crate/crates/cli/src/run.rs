//! Scenario execution: expands sweep variants, runs the model, and writes
//! CSV, SVG, and manifest outputs.

use std::fs;
use std::path::{Path, PathBuf};

use ring_ob_core::bistability::default_x_max;
use ring_ob_core::{
    derive_blockade, eta_closed_form, hysteresis, scaling_collapse, trace_curve,
    transmission_profile, CavityConfig, MediumParams, NonlinearCoefficient, SteadyStateCurve,
};

use crate::csv;
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::scenario::{
    parse_scenario, OutputOpts, ScaleParam, Scenario, SweepKind, Vary, VaryParam,
};
use crate::svg::{self, Plot, Series};

/// Command-line overrides applied on top of the scenario's `[output]`.
#[derive(Debug, Default)]
pub struct RunOverrides {
    pub out: Option<PathBuf>,
    pub svg: bool,
}

/// One expanded sweep variant.
struct Variant {
    label: String,
    medium: MediumParams,
    cavity: CavityConfig,
    eta: NonlinearCoefficient,
}

/// Loads, validates, and executes a scenario. Returns the files written.
pub fn run_scenario(path: &Path, overrides: RunOverrides) -> Result<Vec<PathBuf>, CliError> {
    let (scenario, text) = load_scenario(path, overrides)?;
    let dir = scenario.output.dir.clone();
    fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;

    let mut manifest = Manifest::new(path, &text, scenario.sweep.name());
    manifest.medium(
        &scenario.medium,
        &derive_blockade(&scenario.medium).map_err(CliError::from_model)?,
    );
    manifest.cavity(&scenario.cavity);

    let mut files = match &scenario.sweep {
        SweepKind::InputOutput { vary } => run_input_output(&scenario, vary, &mut manifest)?,
        SweepKind::TransmissionProfile { vary } => run_profile(&scenario, vary, &mut manifest)?,
        SweepKind::Hysteresis => run_hysteresis(&scenario, &mut manifest)?,
        SweepKind::Scaling {
            parameter,
            values,
            exponent,
        } => run_scaling(&scenario, *parameter, values, *exponent, &mut manifest)?,
        SweepKind::EtaScan {
            delta_p_min,
            delta_p_max,
            n_points,
        } => run_eta_scan(
            &scenario,
            *delta_p_min,
            *delta_p_max,
            *n_points,
            &mut manifest,
        )?,
    };

    manifest.files(&files);
    let manifest_path = dir.join("manifest.txt");
    manifest.write(&manifest_path)?;
    files.push(manifest_path);
    Ok(files)
}

/// Parses the file and applies overrides; exposed for `validate`.
pub fn load_scenario(path: &Path, overrides: RunOverrides) -> Result<(Scenario, String), CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut scenario = parse_scenario(&text)?;
    if let Some(out) = overrides.out {
        scenario.output.dir = out;
    }
    scenario.output.svg |= overrides.svg;
    Ok((scenario, text))
}

fn eta_for(medium: &MediumParams) -> Result<NonlinearCoefficient, CliError> {
    let derived = derive_blockade(medium).map_err(CliError::from_model)?;
    eta_closed_form(medium, &derived).map_err(CliError::from_model)
}

/// Expands an optional `vary` block into validated variants; validation of
/// every variant happens before any curve is computed.
fn expand(scenario: &Scenario, vary: &Option<Vary>) -> Result<Vec<Variant>, CliError> {
    let mut variants = Vec::new();
    let Some(vary) = vary else {
        variants.push(Variant {
            label: String::new(),
            medium: scenario.medium,
            cavity: scenario.cavity,
            eta: eta_for(&scenario.medium)?,
        });
        return Ok(variants);
    };
    for &value in &vary.values {
        let mut medium = scenario.medium;
        let mut cavity = scenario.cavity;
        match vary.parameter {
            VaryParam::DeltaP => {
                medium.delta_p = value;
                medium.delta_c = -value;
            }
            VaryParam::OmegaC => medium.omega_c = value,
            VaryParam::Alpha => medium.alpha = value,
            VaryParam::Density => medium.density = value,
            VaryParam::TMirror => {
                cavity = CavityConfig::new(value, cavity.cavity_detuning)
                    .map_err(CliError::from_model)?;
            }
            VaryParam::CavityDetuning => {
                cavity = CavityConfig::new(cavity.t_mirror, value).map_err(CliError::from_model)?;
            }
        }
        medium.validate().map_err(CliError::from_model)?;
        variants.push(Variant {
            label: format!("{} = {}", vary.parameter.key(), value),
            medium,
            cavity,
            eta: eta_for(&medium)?,
        });
    }
    Ok(variants)
}

fn resolve_x_max(output: &OutputOpts, eta: &NonlinearCoefficient) -> Result<f64, CliError> {
    match output.x_max {
        Some(x) => Ok(x),
        None => default_x_max(eta).ok_or_else(|| {
            CliError::validation("x_max", "required when the absorption Im(eta) is zero")
        }),
    }
}

fn indexed(dir: &Path, stem: &str, idx: usize, many: bool) -> PathBuf {
    if many {
        dir.join(format!("{stem}_{idx:02}.csv"))
    } else {
        dir.join(format!("{stem}.csv"))
    }
}

fn curve_section(manifest: &mut Manifest, idx: usize, v: &Variant, file: &Path) {
    manifest.section(&format!("curve {idx:02}"));
    if !v.label.is_empty() {
        manifest.kv("label", &v.label);
    }
    manifest.kv("omega_c", v.medium.omega_c);
    manifest.kv("delta_p", v.medium.delta_p);
    manifest.kv("alpha", v.medium.alpha);
    manifest.kv("density", v.medium.density);
    manifest.kv("t_mirror", v.cavity.t_mirror);
    manifest.kv("cavity_detuning", v.cavity.cavity_detuning);
    manifest.eta(&v.eta);
    manifest.kv(
        "file",
        file.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    );
}

fn run_input_output(
    scenario: &Scenario,
    vary: &Option<Vary>,
    manifest: &mut Manifest,
) -> Result<Vec<PathBuf>, CliError> {
    let variants = expand(scenario, vary)?;
    let out = &scenario.output;
    let many = variants.len() > 1;
    let mut files = Vec::new();
    let mut series = Vec::new();
    for (idx, v) in variants.iter().enumerate() {
        let x_max = resolve_x_max(out, &v.eta)?;
        let curve =
            trace_curve(&v.eta, &v.cavity, x_max, out.n_samples).map_err(CliError::from_model)?;
        let path = indexed(&out.dir, "curve", idx, many);
        csv::write_curve(&path, &curve)?;
        curve_section(manifest, idx, v, &path);
        manifest.kv("x_max", csv::num(x_max));
        manifest.kv("fold_count", curve.turning_points.len());
        series.push(Series {
            label: if v.label.is_empty() {
                "input-output".into()
            } else {
                v.label.clone()
            },
            points: curve.samples.iter().map(|s| (s.i_in, s.i_out)).collect(),
        });
        files.push(path);
    }
    if out.svg {
        let path = out.dir.join("curves.svg");
        svg::write_plot(
            &path,
            &Plot {
                title: "Steady-state input-output curves".into(),
                x_label: "input intensity I_i (gamma2^2 units)".into(),
                y_label: "output intensity I_t (gamma2^2 units)".into(),
                series,
            },
        )?;
        files.push(path);
    }
    Ok(files)
}

fn run_profile(
    scenario: &Scenario,
    vary: &Option<Vary>,
    manifest: &mut Manifest,
) -> Result<Vec<PathBuf>, CliError> {
    let variants = expand(scenario, vary)?;
    let out = &scenario.output;
    let many = variants.len() > 1;
    let mut files = Vec::new();
    let mut series = Vec::new();
    for (idx, v) in variants.iter().enumerate() {
        let i_t_max = match out.i_t_max {
            Some(limit) => limit,
            None if v.eta.b > 0.0 => 0.999 * v.cavity.t_mirror / (2.0 * v.eta.b),
            None => {
                return Err(CliError::validation(
                    "i_t_max",
                    "required when the absorption Im(eta) is zero",
                ))
            }
        };
        let profile = transmission_profile(&v.eta, &v.cavity, i_t_max, out.n_samples)
            .map_err(CliError::from_model)?;
        let path = indexed(&out.dir, "profile", idx, many);
        csv::write_profile(&path, &profile)?;
        curve_section(manifest, idx, v, &path);
        manifest.kv("i_t_max", csv::num(i_t_max));
        manifest.kv("peak_count", profile.peaks.len());
        series.push(Series {
            label: if v.label.is_empty() {
                "transmission".into()
            } else {
                v.label.clone()
            },
            points: profile.samples.clone(),
        });
        files.push(path);
    }
    if out.svg {
        let path = out.dir.join("profiles.svg");
        svg::write_plot(
            &path,
            &Plot {
                title: "Transmission versus output intensity".into(),
                x_label: "output intensity I_t (gamma2^2 units)".into(),
                y_label: "transmission".into(),
                series,
            },
        )?;
        files.push(path);
    }
    Ok(files)
}

fn run_hysteresis(scenario: &Scenario, manifest: &mut Manifest) -> Result<Vec<PathBuf>, CliError> {
    let out = &scenario.output;
    let eta = eta_for(&scenario.medium)?;
    let x_max = resolve_x_max(out, &eta)?;
    let curve =
        trace_curve(&eta, &scenario.cavity, x_max, out.n_samples).map_err(CliError::from_model)?;
    let coverage = curve.samples.last().map(|s| s.i_in).unwrap_or(0.0);
    let i_i_max = out.i_i_max.unwrap_or(0.95 * coverage);
    let trace = hysteresis(&curve, i_i_max, out.n_steps).map_err(CliError::from_model)?;

    let curve_path = out.dir.join("curve.csv");
    csv::write_curve(&curve_path, &curve)?;
    let trace_path = out.dir.join("hysteresis.csv");
    csv::write_hysteresis(&trace_path, &trace)?;

    manifest.section("hysteresis");
    manifest.eta(&eta);
    manifest.kv("x_max", csv::num(x_max));
    manifest.kv("i_i_max", csv::num(i_i_max));
    manifest.kv("n_steps", out.n_steps);
    manifest.kv("fold_count", curve.turning_points.len());
    manifest.kv("jump_count", trace.jumps.len());

    let mut files = vec![curve_path, trace_path];
    if out.svg {
        let path = out.dir.join("hysteresis.svg");
        svg::write_plot(
            &path,
            &Plot {
                title: "Hysteresis loop".into(),
                x_label: "input intensity I_i (gamma2^2 units)".into(),
                y_label: "output intensity I_t (gamma2^2 units)".into(),
                series: vec![
                    Series {
                        label: "upward".into(),
                        points: trace.upward.clone(),
                    },
                    Series {
                        label: "downward".into(),
                        points: trace.downward.clone(),
                    },
                ],
            },
        )?;
        files.push(path);
    }
    Ok(files)
}

fn run_scaling(
    scenario: &Scenario,
    parameter: ScaleParam,
    values: &[f64],
    exponent: f64,
    manifest: &mut Manifest,
) -> Result<Vec<PathBuf>, CliError> {
    let out = &scenario.output;
    // Signed power law of eta in the sweep factor: coupling weakens the
    // nonlinearity (eta ~ eps^-3), density strengthens it (eta ~ eps^+2).
    let signed_exponent = match parameter {
        ScaleParam::OmegaC => -exponent,
        ScaleParam::Density => exponent,
    };

    let mut variants = Vec::with_capacity(values.len());
    let mut factors = Vec::with_capacity(values.len());
    for &value in values {
        let eps = value / values[0];
        let mut medium = scenario.medium;
        match parameter {
            ScaleParam::OmegaC => medium.omega_c = value,
            ScaleParam::Density => {
                // Optical density tracks the atomic density at fixed geometry.
                medium.density = value;
                medium.alpha = scenario.medium.alpha * eps;
            }
        }
        medium.validate().map_err(CliError::from_model)?;
        variants.push(Variant {
            label: format!("{} = {}", parameter.key(), value),
            medium,
            cavity: scenario.cavity,
            eta: eta_for(&medium)?,
        });
        factors.push(eps);
    }

    let x_max_ref = resolve_x_max(out, &variants[0].eta)?;
    let mut curves: Vec<SteadyStateCurve> = Vec::with_capacity(variants.len());
    let mut files = Vec::new();
    for (idx, (v, &eps)) in variants.iter().zip(&factors).enumerate() {
        let x_max = x_max_ref * eps.powf(-signed_exponent);
        let curve =
            trace_curve(&v.eta, &v.cavity, x_max, out.n_samples).map_err(CliError::from_model)?;
        let path = indexed(&out.dir, "curve", idx, true);
        csv::write_curve(&path, &curve)?;
        curve_section(manifest, idx, v, &path);
        manifest.kv("epsilon", eps);
        manifest.kv("x_max", csv::num(x_max));
        manifest.kv("fold_count", curve.turning_points.len());
        files.push(path);
        curves.push(curve);
    }

    let deviation =
        scaling_collapse(&curves, &factors, signed_exponent).map_err(CliError::from_model)?;

    let report_path = out.dir.join("collapse_report.txt");
    let mut report = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(report, "parameter = {}", parameter.key());
    let _ = writeln!(report, "exponent = {exponent}");
    let _ = writeln!(report, "signed_exponent = {signed_exponent}");
    let _ = writeln!(report, "reference_value = {}", values[0]);
    for (v, eps) in values.iter().zip(&factors) {
        let _ = writeln!(report, "value = {v}, epsilon = {eps}");
    }
    let _ = writeln!(report, "max_relative_deviation = {}", csv::num(deviation));
    fs::write(&report_path, report).map_err(CliError::io(&report_path))?;
    files.push(report_path);

    manifest.section("collapse");
    manifest.kv("parameter", parameter.key());
    manifest.kv("exponent", exponent);
    manifest.kv("signed_exponent", signed_exponent);
    manifest.kv("max_relative_deviation", csv::num(deviation));

    if out.svg {
        let raw_path = out.dir.join("curves.svg");
        svg::write_plot(
            &raw_path,
            &Plot {
                title: "Input-output curves".into(),
                x_label: "input intensity I_i (gamma2^2 units)".into(),
                y_label: "output intensity I_t (gamma2^2 units)".into(),
                series: variants
                    .iter()
                    .zip(&curves)
                    .map(|(v, c)| Series {
                        label: v.label.clone(),
                        points: c.samples.iter().map(|s| (s.i_in, s.i_out)).collect(),
                    })
                    .collect(),
            },
        )?;
        files.push(raw_path);

        let collapse_path = out.dir.join("collapse.svg");
        svg::write_plot(
            &collapse_path,
            &Plot {
                title: "Rescaled curves (collapse)".into(),
                x_label: "rescaled input intensity".into(),
                y_label: "rescaled output intensity".into(),
                series: variants
                    .iter()
                    .zip(&curves)
                    .zip(&factors)
                    .map(|((v, c), &eps)| {
                        let scale = eps.powf(signed_exponent);
                        Series {
                            label: v.label.clone(),
                            points: c
                                .samples
                                .iter()
                                .map(|s| (s.i_in * scale, s.i_out * scale))
                                .collect(),
                        }
                    })
                    .collect(),
            },
        )?;
        files.push(collapse_path);
    }
    Ok(files)
}

fn run_eta_scan(
    scenario: &Scenario,
    delta_p_min: f64,
    delta_p_max: f64,
    n_points: usize,
    manifest: &mut Manifest,
) -> Result<Vec<PathBuf>, CliError> {
    let out = &scenario.output;
    let mut rows = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let delta_p = delta_p_min + (delta_p_max - delta_p_min) * i as f64 / (n_points - 1) as f64;
        let mut medium = scenario.medium;
        medium.delta_p = delta_p;
        medium.delta_c = -delta_p;
        medium.validate().map_err(CliError::from_model)?;
        rows.push((delta_p, eta_for(&medium)?));
    }
    let path = out.dir.join("eta_scan.csv");
    csv::write_eta_scan(&path, &rows)?;

    manifest.section("eta_scan");
    manifest.kv("delta_p_min", delta_p_min);
    manifest.kv("delta_p_max", delta_p_max);
    manifest.kv("n_points", n_points);

    let mut files = vec![path];
    if out.svg {
        let path = out.dir.join("eta.svg");
        svg::write_plot(
            &path,
            &Plot {
                title: "Nonlinear coefficient versus probe detuning".into(),
                x_label: "delta_p (gamma2 units)".into(),
                y_label: "eta components".into(),
                series: vec![
                    Series {
                        label: "Re(eta) dispersion".into(),
                        points: rows.iter().map(|(d, e)| (*d, e.a)).collect(),
                    },
                    Series {
                        label: "Im(eta) absorption".into(),
                        points: rows.iter().map(|(d, e)| (*d, e.b)).collect(),
                    },
                ],
            },
        )?;
        files.push(path);
    }
    Ok(files)
}
