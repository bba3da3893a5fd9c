//! Steady-state optical response of a Rydberg-EIT medium inside a
//! unidirectional ring cavity.
//!
//! The medium is a cascade three-level Rydberg-EIT gas whose van der Waals
//! interactions produce a strong complex Kerr coefficient. This crate computes
//! that coefficient from atomic parameters, propagates the dimensionless probe
//! field through the medium, closes the cavity feedback loop, and traces the
//! resulting multistable input-output curves.
//!
//! Pipeline, bottom to top:
//!
//! - [`params`]: physical inputs in Γ₂ units and the derived blockade-sphere
//!   quantities (EIT linewidth, blockade radius, atoms per blockade sphere).
//! - [`nonlinearity`]: the complex Kerr coefficient η = a + ib in two
//!   algebraically equivalent closed forms, the steady-state coherence ρ₂₁,
//!   and a numerical quadrature of the vdW radial integral that serves as an
//!   independent cross-check of the closed forms.
//! - [`propagation`]: analytic solution of ∂E/∂ζ = iη|E|²E plus a fixed-step
//!   fourth-order integrator used to validate it.
//! - [`cavity`]: ring-cavity boundary conditions, the closed-form transmission
//!   𝔗(I_t), and the exact identity I_t = 𝔗·I_i connecting the two routes.
//! - [`bistability`]: steady-state curve tracing parametrized by intracavity
//!   intensity, fold detection, hysteresis replay, transmission-peak analysis,
//!   and the coupling/density scaling collapses.
//!
//! All frequencies are in units of the spontaneous emission rate Γ₂ and all
//! intensities are dimensionless |E|² with E = Ω_p/Γ₂. Lengths are in the unit
//! implied by the vdW coefficient C₆.

pub mod bistability;
pub mod cavity;
pub mod error;
pub mod nonlinearity;
pub mod params;
pub mod propagation;
pub mod quad;

pub use bistability::{
    hysteresis, scaling_collapse, trace_curve, transmission_profile, CurveSample, FoldKind,
    HysteresisTrace, Jump, SteadyStateCurve, SweepDirection, TransmissionPeak, TransmissionProfile,
    TurningPoint,
};
pub use cavity::{consistency_check, io_from_intracavity, transmission, CavityConfig};
pub use error::ModelError;
pub use nonlinearity::{
    eta_appendix_form, eta_closed_form, rho21, vdw_integral_numeric, Coherence,
    NonlinearCoefficient,
};
pub use params::{derive_blockade, BlockadeDerived, MediumParams};
pub use propagation::{propagate_analytic, propagate_numeric, PropagationResult};
