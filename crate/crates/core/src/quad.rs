//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands on a
//! finite interval.
//!
//! A 15-point Kronrod rule with embedded 7-point Gauss rule supplies the
//! per-interval error estimate; the interval with the largest estimate is
//! bisected until the summed estimate meets the tolerance.

use num_complex::Complex64;

use crate::error::ModelError;

// 15-point Kronrod abscissae on [-1, 1] (positive half; rule is symmetric).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod weights matching XGK.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Embedded 7-point Gauss weights (odd Kronrod abscissae).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    /// Integral estimate.
    pub value: Complex64,
    /// Absolute error estimate.
    pub error: f64,
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;

    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }

    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error)
}

/// Integrates `f` over `[a, b]`, refining until the summed error estimate is
/// below `max(abs_tol, rel_tol * |value|)` or `max_intervals` is reached.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult, ModelError> {
    let (value, error) = gk15(&f, a, b);
    let mut intervals = vec![Interval { a, b, value, error }];

    loop {
        let total: Complex64 = intervals.iter().map(|s| s.value).sum();
        let total_err: f64 = intervals.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * total.norm());
        if total_err <= target {
            return Ok(QuadResult {
                value: total,
                error: total_err,
            });
        }
        if intervals.len() >= max_intervals {
            return Err(ModelError::QuadratureNonConvergence {
                achieved: total_err / total.norm().max(f64::MIN_POSITIVE),
                target: rel_tol,
            });
        }

        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| s.error.total_cmp(&t.error))
            .map(|(i, _)| i)
            .expect("interval list is never empty");
        let Interval { a, b, .. } = intervals.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = gk15(&f, lo, hi);
            intervals.push(Interval {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
}
