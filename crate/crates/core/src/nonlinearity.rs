//! The complex Kerr coefficient of the blockaded Rydberg-EIT medium.
//!
//! Two algebraically equivalent closed forms of the nonlinear coefficient
//! η = a + ib are provided: [`eta_closed_form`] written in terms of the
//! blockade-sphere population, and [`eta_appendix_form`] written directly in
//! terms of C₆. Both carry the complex factor (-1+i)(1 - 2iΔ_p/Γ₂)^(-1/2)
//! evaluated on the principal branch, which is single-valued here because the
//! argument always has unit positive real part.
//!
//! [`vdw_integral_numeric`] evaluates the underlying van der Waals radial
//! integral by adaptive quadrature and is the independent numerical route the
//! closed forms are checked against. [`rho21`] assembles the steady-state
//! coherence from it.

use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::ModelError;
use crate::params::{BlockadeDerived, MediumParams};
use crate::quad;

/// Relative accuracy target for the vdW quadrature. Chosen three decades
/// below the closed-form comparison tolerance used in tests.
const VDW_QUAD_RTOL: f64 = 1e-10;

/// Probe-to-coupling Rabi ratio above which the weak-probe expansion behind
/// the coherence formula loses validity.
const EIT_VALIDITY_RATIO: f64 = 0.2;

/// The complex nonlinear coefficient η = a + ib with its polar decomposition.
///
/// For every physically constructed η the absorption `b` is strictly positive
/// and the dispersion `a` strictly negative, placing the phase `theta` in
/// (π/2, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearCoefficient {
    /// Nonlinear dispersion Re(η).
    pub a: f64,
    /// Nonlinear absorption Im(η).
    pub b: f64,
    /// |η|.
    pub magnitude: f64,
    /// Phase θ = atan2(b, a) in (-π, π].
    pub theta: f64,
}

impl NonlinearCoefficient {
    /// Builds a coefficient from its parts. `b < 0` is rejected; `b = 0` is
    /// allowed so the linear-cavity (Airy) limit can be exercised directly.
    pub fn new(a: f64, b: f64) -> Result<Self, ModelError> {
        if !a.is_finite() {
            return Err(ModelError::invalid("a", "must be finite"));
        }
        if !b.is_finite() || b < 0.0 {
            return Err(ModelError::invalid("b", "must be finite and >= 0"));
        }
        Ok(Self::from_parts(a, b))
    }

    fn from_parts(a: f64, b: f64) -> Self {
        NonlinearCoefficient {
            a,
            b,
            magnitude: a.hypot(b),
            theta: b.atan2(a),
        }
    }

    /// η as a complex number.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }
}

/// Detuning phase angle arctan(2Δ_p/Γ₂) ∈ (-π/2, π/2).
///
/// The phase of η is 3π/4 plus half this angle. Distinct from the medium
/// phase shift accumulated during propagation.
pub fn detuning_phase_angle(p: &MediumParams) -> f64 {
    (2.0 * p.delta_p / p.gamma2).atan()
}

/// Shared complex factor (-1+i)(1 - 2iΔ_p/Γ₂)^(-1/2), principal branch.
fn detuning_factor(p: &MediumParams) -> Complex64 {
    let w = Complex64::new(1.0, -2.0 * p.delta_p / p.gamma2);
    Complex64::new(-1.0, 1.0) / w.sqrt()
}

/// Nonlinear coefficient in blockade-sphere form:
/// η = (πα/2√2)(Γ₂/|Ω_c|)² N_b (-1+i)(1 - 2iΔ_p/Γ₂)^(-1/2).
pub fn eta_closed_form(
    p: &MediumParams,
    d: &BlockadeDerived,
) -> Result<NonlinearCoefficient, ModelError> {
    p.validate()?;
    let prefactor = PI * p.alpha / (2.0 * SQRT_2) * (p.gamma2 / p.omega_c).powi(2) * d.n_blockade;
    let eta = prefactor * detuning_factor(p);
    Ok(NonlinearCoefficient::from_parts(eta.re, eta.im))
}

/// Nonlinear coefficient in pre-substitution form:
/// η = (π²α/3) n (Γ₂/|Ω_c|)³ √(C₆/Γ₂) (-1+i)(1 - 2iΔ_p/Γ₂)^(-1/2).
///
/// Identical to [`eta_closed_form`] once C₆ = R_c⁶ · 2|Ω_c|²/Γ₂ is applied.
pub fn eta_appendix_form(p: &MediumParams) -> Result<NonlinearCoefficient, ModelError> {
    p.validate()?;
    let prefactor = PI * PI * p.alpha / 3.0
        * p.density
        * (p.gamma2 / p.omega_c).powi(3)
        * (p.c6 / p.gamma2).sqrt();
    let eta = prefactor * detuning_factor(p);
    Ok(NonlinearCoefficient::from_parts(eta.re, eta.im))
}

/// Numerical evaluation of the vdW radial integral
/// 4π ∫₀^∞ R² C₆ / (Ω² R⁶ + 2iΓ C₆) dR with Γ = Γ₂ - 2iΔ_p.
///
/// The substitution u = R³ turns the integrand into the rational function
/// (C₆/3)/(Ω²u² + 2iΓC₆); the half-line is split at the crossover scale
/// u₀ where the two denominator terms balance, and the tail is mapped back
/// onto a finite interval with u → u₀/t. Each piece is integrated adaptively
/// to relative accuracy well below 1e-9.
pub fn vdw_integral_numeric(
    p: &MediumParams,
    omega_sq: Complex64,
) -> Result<Complex64, ModelError> {
    let gamma = p.complex_gamma();
    if gamma.re <= 0.0 {
        return Err(ModelError::invalid("gamma2", "Re(Gamma) must be positive"));
    }
    if p.c6.is_nan() || p.c6 <= 0.0 {
        return Err(ModelError::invalid("c6", "must be positive"));
    }
    if omega_sq.norm() == 0.0 || omega_sq.re <= 0.0 {
        return Err(ModelError::invalid(
            "omega_sq",
            "must have positive real part",
        ));
    }

    let c6 = p.c6;
    let shift = Complex64::new(0.0, 2.0) * gamma * c6; // 2iGamma*C6
    let u0 = (2.0 * gamma.norm() * c6 / omega_sq.norm()).sqrt();

    let head = quad::integrate(
        |u| c6 / (omega_sq * u * u + shift),
        0.0,
        u0,
        VDW_QUAD_RTOL,
        0.0,
        2000,
    )?;
    // Tail u in [u0, inf) under u = u0/t.
    let tail = quad::integrate(
        |t| c6 * u0 / (omega_sq * u0 * u0 + shift * t * t),
        0.0,
        1.0,
        VDW_QUAD_RTOL,
        0.0,
        2000,
    )?;

    Ok(4.0 * PI / 3.0 * (head.value + tail.value))
}

/// Steady-state probe coherence split into its linear and nonlinear parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherence {
    /// Linear response 2iγ₁₃Ω_p/Ω²; zero when γ₁₃ = 0.
    pub linear: Complex64,
    /// Blockade-induced nonlinear response, local-field approximation.
    pub nonlinear: Complex64,
    /// `Some(|Ω_p|/|Ω_c|)` when the probe exceeds the weak-probe window.
    pub eit_warning: Option<f64>,
}

impl Coherence {
    /// Sum of both parts.
    pub fn total(&self) -> Complex64 {
        self.linear + self.nonlinear
    }
}

/// Steady-state coherence ρ₂₁ for a probe Rabi frequency `omega_p`.
///
/// Uses the unsimplified Ω² = |Ω_c|² + 2Γγ₁₃ and the numerically integrated
/// vdW kernel. The linear term is included only when `include_linear` is set.
/// A probe stronger than 0.2|Ω_c| does not fail — a cavity sweep may
/// transiently exceed the window — but is flagged in the result.
pub fn rho21(
    p: &MediumParams,
    omega_p: Complex64,
    include_linear: bool,
) -> Result<Coherence, ModelError> {
    p.validate()?;
    let gamma = p.complex_gamma();
    let omega_c_sq = p.omega_c * p.omega_c;
    let omega_sq = Complex64::from(omega_c_sq) + 2.0 * gamma * p.gamma13;

    let eit_warning = {
        let ratio = omega_p.norm() / p.omega_c;
        (ratio > EIT_VALIDITY_RATIO).then_some(ratio)
    };

    if omega_p.norm() == 0.0 {
        return Ok(Coherence {
            linear: Complex64::ZERO,
            nonlinear: Complex64::ZERO,
            eit_warning,
        });
    }

    let linear = if include_linear {
        Complex64::new(0.0, 2.0 * p.gamma13) * omega_p / omega_sq
    } else {
        Complex64::ZERO
    };

    let kernel = vdw_integral_numeric(p, omega_sq)?;
    let omega_norm_4 = omega_sq.norm_sqr(); // |Omega|^4
    let nonlinear = -(omega_p * omega_c_sq * omega_c_sq / (omega_sq * omega_norm_4))
        * p.density
        * 2.0
        * omega_p.norm_sqr()
        * kernel;

    Ok(Coherence {
        linear,
        nonlinear,
        eit_warning,
    })
}
