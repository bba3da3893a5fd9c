//! Physical inputs and derived blockade-sphere quantities.
//!
//! Internal unit convention: every rate and detuning is expressed in units of
//! the spontaneous emission rate Γ₂ of the intermediate state, intensities are
//! dimensionless |E|² with E = Ω_p/Γ₂, and lengths use whatever unit the vdW
//! coefficient C₆ was given in (C₆ carries Γ₂·length⁶).

use crate::error::ModelError;

/// Fractional tolerance for the optical-density consistency check.
const ALPHA_CONSISTENCY_RTOL: f64 = 1e-12;

/// Atomic and medium parameters for the cascade three-level Rydberg-EIT gas.
///
/// Constructed via [`MediumParams::new`] plus the `with_*` adjusters; each
/// construction path validates the full invariant set. Two-photon resonance
/// (Δ_p + Δ_c = 0) is enforced: the steady-state coherence used throughout is
/// only valid there, so `delta_c` is always held at `-delta_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Spontaneous emission rate Γ₂ of the intermediate state. This is the
    /// frequency unit; 1.0 unless the caller works in external units.
    pub gamma2: f64,
    /// Coherence relaxation rate γ₁₂ = Γ₂/2, in units of Γ₂.
    pub gamma12: f64,
    /// Coherence relaxation rate γ₁₃ of the Rydberg coherence, units of Γ₂.
    pub gamma13: f64,
    /// Coupling Rabi frequency Ω_c > 0, units of Γ₂.
    pub omega_c: f64,
    /// Probe one-photon detuning Δ_p, units of Γ₂ (signed).
    pub delta_p: f64,
    /// Coupling one-photon detuning Δ_c = -Δ_p (two-photon resonance).
    pub delta_c: f64,
    /// van der Waals coefficient C₆ > 0, units of Γ₂·length⁶.
    pub c6: f64,
    /// Atomic number density n > 0, units of length⁻³.
    pub density: f64,
    /// Optical density α = n·σ_abs·L > 0 (dimensionless).
    pub alpha: f64,
    /// Medium length L, used only to cross-check `alpha` when supplied.
    pub length: Option<f64>,
    /// Probe wavelength λ, sets σ_abs = 3λ²/2π for the same cross-check.
    pub lambda_probe: Option<f64>,
}

impl MediumParams {
    /// Builds a parameter set with Γ₂ = 1, γ₁₃ = 0, and Δ_c = -Δ_p.
    pub fn new(
        omega_c: f64,
        delta_p: f64,
        c6: f64,
        density: f64,
        alpha: f64,
    ) -> Result<Self, ModelError> {
        let p = MediumParams {
            gamma2: 1.0,
            gamma12: 0.5,
            gamma13: 0.0,
            omega_c,
            delta_p,
            delta_c: -delta_p,
            c6,
            density,
            alpha,
            length: None,
            lambda_probe: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Changes the frequency unit Γ₂; γ₁₂ follows as Γ₂/2.
    pub fn with_gamma2(mut self, gamma2: f64) -> Result<Self, ModelError> {
        self.gamma2 = gamma2;
        self.gamma12 = gamma2 / 2.0;
        self.validate()?;
        Ok(self)
    }

    /// Sets a nonzero Rydberg coherence relaxation rate γ₁₃.
    pub fn with_gamma13(mut self, gamma13: f64) -> Result<Self, ModelError> {
        self.gamma13 = gamma13;
        self.validate()?;
        Ok(self)
    }

    /// Supplies medium length and probe wavelength, enabling the optical
    /// density consistency check α = n·(3λ²/2π)·L.
    pub fn with_geometry(mut self, length: f64, lambda_probe: f64) -> Result<Self, ModelError> {
        self.length = Some(length);
        self.lambda_probe = Some(lambda_probe);
        self.validate()?;
        Ok(self)
    }

    /// Validates the full invariant set.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [
            ("gamma2", self.gamma2),
            ("gamma12", self.gamma12),
            ("gamma13", self.gamma13),
            ("omega_c", self.omega_c),
            ("delta_p", self.delta_p),
            ("delta_c", self.delta_c),
            ("c6", self.c6),
            ("density", self.density),
            ("alpha", self.alpha),
        ] {
            if !v.is_finite() {
                return Err(ModelError::invalid(name, "must be finite"));
            }
        }
        if self.gamma2 <= 0.0 {
            return Err(ModelError::invalid("gamma2", "must be positive"));
        }
        if self.gamma12 != self.gamma2 / 2.0 {
            return Err(ModelError::invalid(
                "gamma12",
                format!("must equal gamma2/2 = {} exactly", self.gamma2 / 2.0),
            ));
        }
        if self.gamma13 < 0.0 {
            return Err(ModelError::invalid("gamma13", "must be non-negative"));
        }
        if self.omega_c <= 0.0 {
            return Err(ModelError::invalid("omega_c", "must be positive"));
        }
        if self.delta_p + self.delta_c != 0.0 {
            return Err(ModelError::invalid(
                "delta_c",
                "two-photon resonance requires delta_p + delta_c = 0",
            ));
        }
        if self.c6 <= 0.0 {
            return Err(ModelError::invalid("c6", "must be positive"));
        }
        if self.density <= 0.0 {
            return Err(ModelError::invalid("density", "must be positive"));
        }
        if self.alpha <= 0.0 {
            return Err(ModelError::invalid("alpha", "must be positive"));
        }
        if let (Some(length), Some(lambda)) = (self.length, self.lambda_probe) {
            if length <= 0.0 || !length.is_finite() {
                return Err(ModelError::invalid("length", "must be positive"));
            }
            if lambda <= 0.0 || !lambda.is_finite() {
                return Err(ModelError::invalid("lambda_probe", "must be positive"));
            }
            let sigma_abs = 3.0 * lambda * lambda / (2.0 * std::f64::consts::PI);
            let implied = self.density * sigma_abs * length;
            if (implied - self.alpha).abs() > ALPHA_CONSISTENCY_RTOL * self.alpha.abs() {
                return Err(ModelError::invalid(
                    "alpha",
                    format!(
                        "inconsistent with density*sigma_abs*length = {implied} (given {})",
                        self.alpha
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Complex decay parameter Γ = Γ₂ - 2iΔ_p entering the vdW integral.
    pub fn complex_gamma(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.gamma2, -2.0 * self.delta_p)
    }
}

/// Blockade-sphere quantities derived from [`MediumParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeDerived {
    /// EIT linewidth δ_EIT = |Ω_c|²/γ₁₂, units of Γ₂.
    pub delta_eit: f64,
    /// Blockade radius R_c = (C₆/δ_EIT)^(1/6), length units.
    pub r_c: f64,
    /// Atoms per blockade sphere N_b = (4π/3)·R_c³·n.
    pub n_blockade: f64,
}

/// Derives the blockade-sphere quantities.
///
/// Pure: identical inputs give bit-identical outputs.
pub fn derive_blockade(p: &MediumParams) -> Result<BlockadeDerived, ModelError> {
    if p.omega_c.is_nan() || p.omega_c <= 0.0 {
        return Err(ModelError::invalid("omega_c", "must be positive"));
    }
    if p.c6.is_nan() || p.c6 <= 0.0 {
        return Err(ModelError::invalid("c6", "must be positive"));
    }
    if p.gamma12.is_nan() || p.gamma12 <= 0.0 {
        return Err(ModelError::invalid("gamma12", "must be positive"));
    }
    let delta_eit = p.omega_c * p.omega_c / p.gamma12;
    let r_c = (p.c6 / delta_eit).powf(1.0 / 6.0);
    let n_blockade = 4.0 * std::f64::consts::PI / 3.0 * r_c.powi(3) * p.density;
    Ok(BlockadeDerived {
        delta_eit,
        r_c,
        n_blockade,
    })
}
