//! Shared fixtures for the benchmark targets.

use ring_ob_core::{
    derive_blockade, eta_closed_form, CavityConfig, MediumParams, NonlinearCoefficient,
};

/// Strongly multistable reference scenario used across benches.
pub fn reference_medium() -> MediumParams {
    MediumParams::new(3.0, 5.0, 1000.0, 0.24, 70.0).expect("reference parameters are valid")
}

pub fn reference_eta() -> NonlinearCoefficient {
    let p = reference_medium();
    eta_closed_form(&p, &derive_blockade(&p).expect("valid")).expect("valid")
}

pub fn reference_cavity() -> CavityConfig {
    CavityConfig::new(0.5, 0.0).expect("valid")
}
