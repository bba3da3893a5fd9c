//! Probe-field propagation through the Kerr medium.
//!
//! The field obeys ∂E/∂ζ = iη|E|²E on ζ ∈ [0, 1]. With η = a + ib and b > 0
//! the solution in damping/phase form is
//!
//! ```text
//! E(ζ) = E(0) · exp(-Λ(ζ)/2 + iφ(ζ))
//! Λ(ζ) = ln(1 + 2b|E(0)|²ζ)          (damping)
//! φ(ζ) = (a/2b) · Λ(ζ)               (phase shift)
//! ```
//!
//! which keeps the complex power of the textbook solution on a real positive
//! base and eliminates any branch ambiguity. At b = 0 the exact limit
//! Λ = 0, φ = a|E(0)|²ζ applies. A fixed-step fourth-order integrator of the
//! same equation serves as an independent check.

use num_complex::Complex64;

use crate::error::ModelError;
use crate::nonlinearity::NonlinearCoefficient;

/// Field, damping exponent, and accumulated nonlinear phase at position ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationResult {
    /// E(ζ).
    pub e_out: Complex64,
    /// Λ(ζ) ≥ 0.
    pub damping: f64,
    /// φ(ζ) in radians. This is the medium phase shift, not the detuning
    /// phase angle arctan(2Δ_p/Γ₂).
    pub phase_shift: f64,
}

/// Damping Λ and phase shift φ for input intensity `intensity_in` = |E(0)|²
/// after a fractional length `zeta`.
///
/// `b = 0` is evaluated in its exact limit; `b < 0` is rejected since the
/// damping logarithm would leave the real axis.
pub fn damping_and_phase(
    eta: &NonlinearCoefficient,
    intensity_in: f64,
    zeta: f64,
) -> Result<(f64, f64), ModelError> {
    if !(0.0..=1.0).contains(&zeta) {
        return Err(ModelError::invalid("zeta", "must lie in [0, 1]"));
    }
    if intensity_in.is_nan() || intensity_in < 0.0 {
        return Err(ModelError::invalid("intensity_in", "must be non-negative"));
    }
    if eta.b < 0.0 {
        return Err(ModelError::invalid("eta", "Im(eta) must be >= 0"));
    }
    if eta.b == 0.0 {
        return Ok((0.0, eta.a * intensity_in * zeta));
    }
    let damping = (2.0 * eta.b * intensity_in * zeta).ln_1p();
    let phase_shift = eta.a / (2.0 * eta.b) * damping;
    Ok((damping, phase_shift))
}

/// Analytic propagation to position `zeta` ∈ [0, 1].
pub fn propagate_analytic(
    eta: &NonlinearCoefficient,
    e_in: Complex64,
    zeta: f64,
) -> Result<PropagationResult, ModelError> {
    let (damping, phase_shift) = damping_and_phase(eta, e_in.norm_sqr(), zeta)?;
    let e_out = e_in * Complex64::from_polar((-0.5 * damping).exp(), phase_shift);
    Ok(PropagationResult {
        e_out,
        damping,
        phase_shift,
    })
}

/// Fixed-step fourth-order integration of ∂E/∂ζ = iη|E|²E from 0 to `zeta`.
///
/// Converges to [`propagate_analytic`] with fourth-order error decay in the
/// step count. `steps` below 1 is treated as 1.
pub fn propagate_numeric(
    eta: &NonlinearCoefficient,
    e_in: Complex64,
    zeta: f64,
    steps: usize,
) -> Complex64 {
    let eta_c = eta.as_complex();
    let rhs = |e: Complex64| Complex64::I * eta_c * e.norm_sqr() * e;

    let n = steps.max(1);
    let h = zeta / n as f64;
    let mut e = e_in;
    for _ in 0..n {
        let k1 = rhs(e);
        let k2 = rhs(e + 0.5 * h * k1);
        let k3 = rhs(e + 0.5 * h * k2);
        let k4 = rhs(e + h * k3);
        e += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta(a: f64, b: f64) -> NonlinearCoefficient {
        NonlinearCoefficient::new(a, b).unwrap()
    }

    #[test]
    fn zero_field_stays_zero() {
        let r = propagate_analytic(&eta(-1.0, 1.0), Complex64::ZERO, 1.0).unwrap();
        assert_eq!(r.e_out, Complex64::ZERO);
        assert_eq!(r.damping, 0.0);
        assert_eq!(r.phase_shift, 0.0);
        assert_eq!(
            propagate_numeric(&eta(-1.0, 1.0), Complex64::ZERO, 1.0, 100),
            Complex64::ZERO
        );
    }

    #[test]
    fn entrance_is_identity() {
        let e_in = Complex64::new(0.3, -0.2);
        let r = propagate_analytic(&eta(-2.0, 0.7), e_in, 0.0).unwrap();
        assert_eq!(r.e_out, e_in);
    }

    #[test]
    fn textbook_point() {
        // eta = -1 + i, |E0|^2 = 0.5, zeta = 1: damping ln 2, phase -ln2/2.
        let e_in = Complex64::from(0.5_f64.sqrt());
        let r = propagate_analytic(&eta(-1.0, 1.0), e_in, 1.0).unwrap();
        assert!((r.damping - 2.0_f64.ln()).abs() < 1e-15);
        assert!((r.phase_shift + 0.5 * 2.0_f64.ln()).abs() < 1e-15);
        assert!((r.e_out.norm_sqr() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn output_intensity_matches_damping() {
        let e_in = Complex64::new(0.8, 0.1);
        let r = propagate_analytic(&eta(-3.0, 0.4), e_in, 0.7).unwrap();
        let expected = e_in.norm_sqr() * (-r.damping).exp();
        assert!((r.e_out.norm_sqr() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn weak_absorption_limit() {
        // As b -> 0 the phase tends to a |E0|^2 zeta and damping to 0.
        let e_in = Complex64::from(0.6);
        let x = e_in.norm_sqr();
        let a = -2.5;
        let r = propagate_analytic(&eta(a, 1e-9), e_in, 1.0).unwrap();
        assert!(r.damping < 1e-8);
        assert!((r.phase_shift - a * x).abs() < 1e-8);
        let r0 = propagate_analytic(&eta(a, 0.0), e_in, 1.0).unwrap();
        assert_eq!(r0.damping, 0.0);
        assert!((r0.phase_shift - a * x).abs() < 1e-15);
    }

    #[test]
    fn numeric_matches_analytic() {
        let e_in = Complex64::from(0.5_f64.sqrt());
        let g = eta(-1.0, 1.0);
        let analytic = propagate_analytic(&g, e_in, 1.0).unwrap().e_out;
        let numeric = propagate_numeric(&g, e_in, 1.0, 10_000);
        assert!((numeric - analytic).norm() < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let e_in = Complex64::new(0.9, 0.2);
        let g = eta(-1.7, 0.9);
        let exact = propagate_analytic(&g, e_in, 1.0).unwrap().e_out;
        let err = |n| (propagate_numeric(&g, e_in, 1.0, n) - exact).norm();
        let ratio = err(80) / err(160);
        assert!(
            (14.0..=18.0).contains(&ratio),
            "expected ~16x error reduction, got {ratio}"
        );
    }

    #[test]
    fn semigroup_property() {
        let g = eta(-4.0, 1.3);
        let e_in = Complex64::new(0.7, -0.4);
        let mid = propagate_analytic(&g, e_in, 0.4).unwrap().e_out;
        let rest = propagate_analytic(&g, mid, 0.6).unwrap().e_out;
        let direct = propagate_analytic(&g, e_in, 1.0).unwrap().e_out;
        assert!((rest - direct).norm() < 1e-12 * direct.norm().max(1.0));
    }

    #[test]
    fn gauge_property() {
        let g = eta(-2.0, 0.8);
        let e_in = Complex64::from(0.75);
        let phase = Complex64::from_polar(1.0, 1.234);
        let plain = propagate_analytic(&g, e_in, 1.0).unwrap();
        let rotated = propagate_analytic(&g, e_in * phase, 1.0).unwrap();
        assert!((rotated.e_out - plain.e_out * phase).norm() < 1e-14);
        // |e_in * phase|^2 may differ from |e_in|^2 in the last ulp.
        assert!((plain.damping - rotated.damping).abs() < 1e-15);
        assert!((plain.phase_shift - rotated.phase_shift).abs() < 1e-14);
    }

    #[test]
    fn intensity_strictly_decreasing() {
        let g = eta(-1.0, 0.5);
        let e_in = Complex64::from(1.0);
        let mut prev = e_in.norm_sqr();
        for k in 1..=10 {
            let z = k as f64 / 10.0;
            let now = propagate_analytic(&g, e_in, z).unwrap().e_out.norm_sqr();
            assert!(now < prev);
            prev = now;
        }
    }

    #[test]
    fn negative_absorption_rejected() {
        let bad = NonlinearCoefficient {
            a: -1.0,
            b: -0.5,
            magnitude: 1.118,
            theta: -2.678,
        };
        assert!(propagate_analytic(&bad, Complex64::from(0.4), 1.0).is_err());
    }
}
