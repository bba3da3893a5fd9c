//! Unidirectional ring-cavity boundary conditions and closed-form
//! transmission.
//!
//! The intracavity field at the medium entrance, taken real positive (the
//! gauge freedom of the propagation step makes all intensities independent of
//! this choice), fixes the input and transmitted intensities through the
//! mirror boundary conditions. The transmission 𝔗 = I_t/I_i can also be
//! written purely in terms of the transmitted intensity; the two routes agree
//! identically, which [`consistency_check`] exposes as a residual.

use crate::error::ModelError;
use crate::nonlinearity::NonlinearCoefficient;
use crate::propagation::damping_and_phase;

/// Mirror coefficients and round-trip detuning of the ring cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    /// Intensity transmission coefficient T of the in/out mirrors, in (0, 1).
    pub t_mirror: f64,
    /// Intensity reflection coefficient R = 1 - T.
    pub r_mirror: f64,
    /// Cavity detuning δ in radians (enters only through sin²((δ-φ)/2)).
    pub cavity_detuning: f64,
}

impl CavityConfig {
    /// Builds a config from T and δ; R is derived so T + R = 1 exactly.
    pub fn new(t_mirror: f64, cavity_detuning: f64) -> Result<Self, ModelError> {
        if !t_mirror.is_finite() || !(t_mirror > 0.0 && t_mirror < 1.0) {
            return Err(ModelError::invalid("t_mirror", "must lie in (0, 1)"));
        }
        if !cavity_detuning.is_finite() {
            return Err(ModelError::invalid("cavity_detuning", "must be finite"));
        }
        Ok(CavityConfig {
            t_mirror,
            r_mirror: 1.0 - t_mirror,
            cavity_detuning,
        })
    }
}

/// Input and transmitted intensities (I_i, I_t) for intracavity input
/// intensity `x` = |E(0)|².
///
/// I_t = T·x·e^(-Λ) and I_i = (x/T)·|1 - R e^(-iδ) e^(-Λ/2 + iφ)|² with the
/// damping and phase taken at the medium exit ζ = 1.
pub fn io_from_intracavity(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    x: f64,
) -> Result<(f64, f64), ModelError> {
    if x.is_nan() || x < 0.0 {
        return Err(ModelError::invalid("x", "must be non-negative"));
    }
    let (damping, phase_shift) = damping_and_phase(eta, x, 1.0)?;
    let attenuation = (-damping).exp();
    let i_t = cav.t_mirror * x * attenuation;

    let r = cav.r_mirror;
    let round_trip = attenuation.sqrt(); // e^(-Λ/2)
    let mismatch = cav.cavity_detuning - phase_shift;
    let denom = 1.0 - 2.0 * r * round_trip * mismatch.cos() + r * r * attenuation;
    let i_i = x / cav.t_mirror * denom;
    Ok((i_i, i_t))
}

/// Closed-form transmission 𝔗 as a function of the transmitted intensity.
///
/// The damping is reconstructed from I_t as Λ = -ln(1 - 2b·I_t/T), so values
/// of `i_t` at or beyond T/(2b) are unreachable and rejected.
pub fn transmission(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    i_t: f64,
) -> Result<f64, ModelError> {
    if i_t.is_nan() || i_t < 0.0 {
        return Err(ModelError::invalid("i_t", "must be non-negative"));
    }
    if eta.b < 0.0 {
        return Err(ModelError::invalid("eta", "Im(eta) must be >= 0"));
    }
    let t = cav.t_mirror;
    let (damping, phase_shift) = if eta.b == 0.0 {
        (0.0, eta.a * i_t / t)
    } else {
        let limit = t / (2.0 * eta.b);
        if i_t >= limit {
            return Err(ModelError::IntensityOutOfRange { i_t, limit });
        }
        let damping = -(-2.0 * eta.b * i_t / t).ln_1p();
        (damping, eta.a / (2.0 * eta.b) * damping)
    };

    let r = cav.r_mirror;
    let round_trip = (-0.5 * damping).exp();
    let half_mismatch = 0.5 * (cav.cavity_detuning - phase_shift);
    let denom = (1.0 - r * round_trip).powi(2) + 4.0 * r * round_trip * half_mismatch.sin().powi(2);
    Ok(t * t * (-damping).exp() / denom)
}

/// Residual |I_t - 𝔗·I_i| of the identity connecting the boundary-condition
/// route and the closed-form transmission at intracavity intensity `x`.
pub fn consistency_check(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    x: f64,
) -> Result<f64, ModelError> {
    let (i_i, i_t) = io_from_intracavity(eta, cav, x)?;
    let t = transmission(eta, cav, i_t)?;
    Ok((i_t - t * i_i).abs())
}

/// Analytic derivative dI_i/dx of the input intensity with respect to the
/// intracavity intensity. Sign changes of this slope locate the folds of the
/// steady-state curve.
pub fn input_intensity_slope(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    x: f64,
) -> Result<f64, ModelError> {
    if x.is_nan() || x < 0.0 {
        return Err(ModelError::invalid("x", "must be non-negative"));
    }
    if eta.b < 0.0 {
        return Err(ModelError::invalid("eta", "Im(eta) must be >= 0"));
    }
    let (a, b) = (eta.a, eta.b);
    let r = cav.r_mirror;

    // nu = e^(-Lambda/2) = (1 + 2bx)^(-1/2); phase and mismatch as in io.
    let (nu, phase_shift) = if b == 0.0 {
        (1.0, a * x)
    } else {
        let arg = 1.0 + 2.0 * b * x;
        (arg.sqrt().recip(), a / (2.0 * b) * arg.ln())
    };
    let mismatch = cav.cavity_detuning - phase_shift;
    let (sin_m, cos_m) = mismatch.sin_cos();

    let denom = 1.0 - 2.0 * r * nu * cos_m + r * r * nu * nu;
    let nu3 = nu * nu * nu;
    let denom_slope = 2.0 * r * nu3 * (b * cos_m - a * sin_m) - 2.0 * b * r * r * nu3 * nu;
    Ok((denom + x * denom_slope) / cav.t_mirror)
}
