//! Steady-state curve tracing, fold detection, hysteresis replay,
//! transmission-peak analysis, and scaling collapses.
//!
//! The solution strategy parametrizes everything by the intracavity input
//! intensity x = |E(0)|², under which both I_i(x) and I_t(x) are smooth
//! single-valued functions. The multivalued input-output relation I_t(I_i)
//! and its hysteresis then fall out of the geometry of that parametrized
//! curve instead of a root-find on the implicit transmission relation.
//!
//! When the nonlinear absorption is positive the trace samples are placed
//! uniformly in the damping exponent Λ(x) = ln(1 + 2bx) rather than in x:
//! the interference pattern of the cavity is periodic in the accumulated
//! phase, which is proportional to Λ, so this grid resolves every fold
//! regardless of how far the sweep extends.

mod interp;

use crate::cavity::{input_intensity_slope, io_from_intracavity, transmission, CavityConfig};
use crate::error::ModelError;
use crate::nonlinearity::NonlinearCoefficient;
use interp::Pchip;

/// Damping cap e^Λ ≤ 1000 (≈30 dB of attenuation) used for the default
/// sweep extent.
const DEFAULT_ATTENUATION_CAP: f64 = 1000.0;

/// Relative x-accuracy of fold refinement.
const FOLD_RTOL: f64 = 1e-10;

/// Relative accuracy of branch solves during hysteresis replay.
const SOLVE_RTOL: f64 = 1e-14;

/// One steady-state sample, parametrized by intracavity intensity `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// Intracavity input intensity |E(0)|².
    pub x: f64,
    /// Cavity input intensity I_i.
    pub i_in: f64,
    /// Transmitted intensity I_t.
    pub i_out: f64,
    /// Transmission 𝔗 = I_t/I_i (linear-cavity value at x = 0).
    pub transmission: f64,
}

/// Orientation of a fold of the steady-state curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldKind {
    /// dI_i/dx changes + → -: a local maximum of I_i. Upward input sweeps
    /// jump here.
    Down,
    /// dI_i/dx changes - → +: a local minimum of I_i. Downward input sweeps
    /// jump here.
    Up,
}

impl FoldKind {
    /// Lower-case label used in file output.
    pub fn label(&self) -> &'static str {
        match self {
            FoldKind::Down => "down",
            FoldKind::Up => "up",
        }
    }
}

/// A refined turning point of the steady-state curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    /// Intracavity intensity at the fold.
    pub x: f64,
    /// Input intensity at the fold.
    pub i_in: f64,
    /// Transmitted intensity at the fold.
    pub i_out: f64,
    /// Fold orientation.
    pub kind: FoldKind,
}

/// A traced steady-state input-output curve with fold annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateCurve {
    /// Nonlinear coefficient the curve was traced with.
    pub eta: NonlinearCoefficient,
    /// Cavity configuration the curve was traced with.
    pub cav: CavityConfig,
    /// Ordered samples with strictly increasing `x`, starting at x = 0.
    pub samples: Vec<CurveSample>,
    /// Turning points ordered by `x`, alternating in kind.
    pub turning_points: Vec<TurningPoint>,
}

impl SteadyStateCurve {
    /// Number of bistable regions: each needs a fold pair.
    pub fn bistable_region_count(&self) -> usize {
        self.turning_points.len() / 2
    }

    /// Exact model input/output intensities at intracavity intensity `x`.
    fn io(&self, x: f64) -> (f64, f64) {
        io_from_intracavity(&self.eta, &self.cav, x)
            .expect("curve parameters were validated at trace time")
    }

    /// Monotone branches delimited by the turning points.
    fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::with_capacity(self.turning_points.len() + 1);
        let mut lo_x = 0.0;
        let mut rising = true;
        for tp in &self.turning_points {
            out.push(Branch {
                lo_x,
                hi_x: tp.x,
                rising,
            });
            lo_x = tp.x;
            rising = tp.kind == FoldKind::Up;
        }
        let end = self.samples.last().map(|s| s.x).unwrap_or(0.0);
        if end > lo_x {
            out.push(Branch {
                lo_x,
                hi_x: end,
                rising,
            });
        }
        out
    }
}

/// A maximal x-interval on which I_i(x) is monotone.
#[derive(Debug, Clone, Copy)]
struct Branch {
    lo_x: f64,
    hi_x: f64,
    rising: bool,
}

/// Largest sweep extent keeping the reconstructed damping below the default
/// attenuation cap. `None` when the absorption vanishes (no damping bound).
pub fn default_x_max(eta: &NonlinearCoefficient) -> Option<f64> {
    (eta.b > 0.0).then(|| (DEFAULT_ATTENUATION_CAP - 1.0) / (2.0 * eta.b))
}

/// x-grid for a sweep: uniform in the damping exponent when b > 0 (equal
/// samples per interference period), uniform in x otherwise.
fn sweep_grid(b: f64, x_max: f64, n_samples: usize) -> Vec<f64> {
    let n = n_samples;
    let mut xs = Vec::with_capacity(n);
    if b > 0.0 {
        let lambda_max = (2.0 * b * x_max).ln_1p();
        for i in 0..n {
            let lam = lambda_max * i as f64 / (n - 1) as f64;
            xs.push(lam.exp_m1() / (2.0 * b));
        }
    } else {
        for i in 0..n {
            xs.push(x_max * i as f64 / (n - 1) as f64);
        }
    }
    xs[0] = 0.0;
    *xs.last_mut().expect("n >= 2") = x_max;
    xs
}

/// Traces the steady-state curve for x ∈ [0, x_max].
///
/// Folds are detected by sign changes of the finite-difference dI_i/dx along
/// the sample grid and refined by bisection on the analytic slope to relative
/// x-accuracy 1e-10. `x_max = 0` yields an empty curve (the degenerate sweep
/// used by file emitters);  otherwise `n_samples >= 2` samples are produced.
pub fn trace_curve(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    x_max: f64,
    n_samples: usize,
) -> Result<SteadyStateCurve, ModelError> {
    if !x_max.is_finite() || x_max < 0.0 {
        return Err(ModelError::invalid("x_max", "must be finite and >= 0"));
    }
    if x_max == 0.0 {
        return Ok(SteadyStateCurve {
            eta: *eta,
            cav: *cav,
            samples: Vec::new(),
            turning_points: Vec::new(),
        });
    }
    if n_samples < 2 {
        return Err(ModelError::invalid("n_samples", "must be at least 2"));
    }
    if eta.b < 0.0 {
        return Err(ModelError::invalid("eta", "Im(eta) must be >= 0"));
    }

    let xs = sweep_grid(eta.b, x_max, n_samples);
    let airy = transmission(eta, cav, 0.0)?;
    let mut samples = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (i_in, i_out) = io_from_intracavity(eta, cav, x)?;
        let ratio = if i_in > 0.0 { i_out / i_in } else { airy };
        samples.push(CurveSample {
            x,
            i_in,
            i_out,
            transmission: ratio,
        });
    }

    let turning_points = locate_folds(eta, cav, &samples)?;
    Ok(SteadyStateCurve {
        eta: *eta,
        cav: *cav,
        samples,
        turning_points,
    })
}

/// Finite-difference fold detection over the samples, refined on the
/// analytic slope.
fn locate_folds(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    samples: &[CurveSample],
) -> Result<Vec<TurningPoint>, ModelError> {
    let slope = |x: f64| input_intensity_slope(eta, cav, x);
    let mut folds: Vec<TurningPoint> = Vec::new();

    for k in 0..samples.len().saturating_sub(2) {
        let d0 = samples[k + 1].i_in - samples[k].i_in;
        let d1 = samples[k + 2].i_in - samples[k + 1].i_in;
        if d0 * d1 >= 0.0 {
            continue;
        }
        // The analytic slope crosses zero inside (x_k, x_{k+2}); pick the
        // half-interval whose endpoint slopes bracket it.
        let x0 = samples[k].x;
        let x1 = samples[k + 1].x;
        let x2 = samples[k + 2].x;
        let g0 = slope(x0)?;
        let g1 = slope(x1)?;
        let g2 = slope(x2)?;
        let (mut lo, mut hi, mut g_lo) = if g0 * g1 < 0.0 {
            (x0, x1, g0)
        } else if g1 * g2 < 0.0 {
            (x1, x2, g1)
        } else {
            continue; // grid tie; the neighboring window will catch it
        };

        while hi - lo > FOLD_RTOL * hi.max(1e-300) {
            let mid = 0.5 * (lo + hi);
            let g_mid = slope(mid)?;
            if g_lo * g_mid <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                g_lo = g_mid;
            }
        }
        let x_fold = 0.5 * (lo + hi);
        if let Some(last) = folds.last() {
            if (x_fold - last.x).abs() <= 1e-9 * x_fold.max(1e-300) {
                continue;
            }
        }
        let (i_in, i_out) = io_from_intracavity(eta, cav, x_fold)?;
        let kind = if d0 > 0.0 {
            FoldKind::Down
        } else {
            FoldKind::Up
        };
        folds.push(TurningPoint {
            x: x_fold,
            i_in,
            i_out,
            kind,
        });
    }
    Ok(folds)
}

/// Direction of a hysteresis sweep segment or jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDirection {
    Up,
    Down,
}

impl SweepDirection {
    /// Lower-case label used in file output.
    pub fn label(&self) -> &'static str {
        match self {
            SweepDirection::Up => "up",
            SweepDirection::Down => "down",
        }
    }
}

/// A discontinuous branch switch during a hysteresis sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    /// Input intensity at which the switch fires (a fold's I_i).
    pub i_in: f64,
    /// Transmitted intensity just before the switch.
    pub i_out_before: f64,
    /// Transmitted intensity just after the switch.
    pub i_out_after: f64,
    /// Sweep direction in which the switch occurred.
    pub direction: SweepDirection,
}

/// Input-output pairs for an up-then-down input sweep, with jump events.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisTrace {
    /// (I_i, I_t) for increasing input, in sweep order.
    pub upward: Vec<(f64, f64)>,
    /// (I_i, I_t) for decreasing input, in sweep order.
    pub downward: Vec<(f64, f64)>,
    /// Branch switches, in occurrence order.
    pub jumps: Vec<Jump>,
}

/// Replays a quasi-static input sweep 0 → `i_i_max` → 0 over the traced
/// curve.
///
/// The state stays on its current monotone branch while a solution exists
/// (continuity in x) and otherwise jumps to the nearest-in-x branch on the
/// far side of the fold at the same input intensity. Jump events are recorded
/// at the fold's exact input level.
pub fn hysteresis(
    curve: &SteadyStateCurve,
    i_i_max: f64,
    n_steps: usize,
) -> Result<HysteresisTrace, ModelError> {
    if curve.samples.len() < 2 {
        return Err(ModelError::invalid("curve", "must contain a traced sweep"));
    }
    if !i_i_max.is_finite() || i_i_max <= 0.0 {
        return Err(ModelError::invalid("i_i_max", "must be positive"));
    }
    if n_steps < 1 {
        return Err(ModelError::invalid("n_steps", "must be at least 1"));
    }

    let branches = curve.branches();
    let mut jumps = Vec::new();

    // Upward pass.
    let mut upward = Vec::with_capacity(n_steps + 1);
    let mut x_cur = 0.0;
    let mut branch_idx = 0usize;
    for k in 0..=n_steps {
        let target = i_i_max * k as f64 / n_steps as f64;
        loop {
            let b = branches[branch_idx];
            let i_hi = curve.io(b.hi_x).0;
            if target <= i_hi {
                x_cur = solve_on_branch(curve, x_cur, b.hi_x, target);
                upward.push((target, curve.io(x_cur).1));
                break;
            }
            // Fold at the top of this branch: jump right.
            if branch_idx + 1 >= branches.len() {
                return Err(ModelError::CoverageExceeded {
                    requested: target,
                    available: i_hi,
                });
            }
            let (level, before) = curve.io(b.hi_x);
            let (land_idx, x_land) = land_right(curve, &branches, branch_idx, level).ok_or(
                ModelError::CoverageExceeded {
                    requested: target,
                    available: level,
                },
            )?;
            let after = curve.io(x_land).1;
            jumps.push(Jump {
                i_in: level,
                i_out_before: before,
                i_out_after: after,
                direction: SweepDirection::Up,
            });
            upward.push((level, before));
            upward.push((level, after));
            x_cur = x_land;
            branch_idx = land_idx;
        }
    }

    // Downward pass starts where the upward pass ended.
    let mut downward = Vec::with_capacity(n_steps + 1);
    for k in (0..=n_steps).rev() {
        let target = i_i_max * k as f64 / n_steps as f64;
        loop {
            let b = branches[branch_idx];
            let i_lo = curve.io(b.lo_x).0;
            if target >= i_lo {
                x_cur = solve_on_branch(curve, b.lo_x, x_cur, target);
                downward.push((target, curve.io(x_cur).1));
                break;
            }
            // Fold at the bottom of this branch: jump left.
            let (level, before) = curve.io(b.lo_x);
            let (land_idx, x_land) = land_left(curve, &branches, branch_idx, level).ok_or(
                ModelError::CoverageExceeded {
                    requested: target,
                    available: level,
                },
            )?;
            let after = curve.io(x_land).1;
            jumps.push(Jump {
                i_in: level,
                i_out_before: before,
                i_out_after: after,
                direction: SweepDirection::Down,
            });
            downward.push((level, before));
            downward.push((level, after));
            x_cur = x_land;
            branch_idx = land_idx;
        }
    }

    Ok(HysteresisTrace {
        upward,
        downward,
        jumps,
    })
}

/// Bisection solve of I_i(x) = target on [lo, hi] where I_i is monotone.
fn solve_on_branch(curve: &SteadyStateCurve, lo: f64, hi: f64, target: f64) -> f64 {
    let i_lo = curve.io(lo).0;
    let i_hi = curve.io(hi).0;
    if target == i_lo {
        return lo;
    }
    if target == i_hi {
        return hi;
    }
    let rising = i_hi >= i_lo;
    let (mut a, mut b) = (lo, hi);
    while b - a > SOLVE_RTOL * b.max(1e-300) {
        let mid = 0.5 * (a + b);
        let v = curve.io(mid).0;
        let go_right = if rising { v < target } else { v > target };
        if go_right {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Landing branch for an up-jump at input level `level`: the nearest branch
/// to the right containing `level` strictly inside its input range.
fn land_right(
    curve: &SteadyStateCurve,
    branches: &[Branch],
    from: usize,
    level: f64,
) -> Option<(usize, f64)> {
    for (j, b) in branches.iter().enumerate().skip(from + 1) {
        let i_lo = curve.io(b.lo_x).0;
        let i_hi = curve.io(b.hi_x).0;
        let contains = if b.rising {
            i_lo < level && level <= i_hi
        } else {
            i_hi < level && level < i_lo
        };
        if contains {
            return Some((j, solve_on_branch(curve, b.lo_x, b.hi_x, level)));
        }
    }
    None
}

/// Landing branch for a down-jump at input level `level`: the nearest branch
/// to the left containing `level` strictly inside its input range.
fn land_left(
    curve: &SteadyStateCurve,
    branches: &[Branch],
    from: usize,
    level: f64,
) -> Option<(usize, f64)> {
    for j in (0..from).rev() {
        let b = branches[j];
        let i_lo = curve.io(b.lo_x).0;
        let i_hi = curve.io(b.hi_x).0;
        let contains = if b.rising {
            i_lo <= level && level < i_hi
        } else {
            i_hi < level && level < i_lo
        };
        if contains {
            return Some((j, solve_on_branch(curve, b.lo_x, b.hi_x, level)));
        }
    }
    None
}

/// Rescales a family of curves onto the reference (`factors[0]` must be 1)
/// and returns the maximum relative deviation of the transmitted intensity,
/// compared branch-by-branch on the reference's own input grid.
///
/// `exponent` is the signed power law by which the nonlinear coefficient
/// scales with the swept factor ε: -3 for coupling sweeps (η ∝ ε⁻³), +2 for
/// density sweeps (η ∝ ε²). Each curve's intensities are multiplied by
/// ε^exponent, which maps them onto the reference exactly in this model.
///
/// Returns infinity when the fold structures do not match (no collapse).
pub fn scaling_collapse(
    curves: &[SteadyStateCurve],
    factors: &[f64],
    exponent: f64,
) -> Result<f64, ModelError> {
    if curves.is_empty() || curves.len() != factors.len() {
        return Err(ModelError::InvalidCollapse(
            "need one scale factor per curve".into(),
        ));
    }
    if factors[0] != 1.0 {
        return Err(ModelError::InvalidCollapse(
            "factors[0] must be 1 (the reference)".into(),
        ));
    }
    if factors.iter().any(|f| !f.is_finite() || *f <= 0.0) {
        return Err(ModelError::InvalidCollapse(
            "factors must be positive".into(),
        ));
    }
    if curves.iter().any(|c| c.cav != curves[0].cav) {
        return Err(ModelError::CavityMismatch);
    }
    if curves.iter().any(|c| c.samples.len() < 2) {
        return Err(ModelError::InvalidCollapse(
            "curves must be non-empty".into(),
        ));
    }

    let reference = &curves[0];
    let ref_branches = branch_nodes(reference, 1.0);

    let mut max_dev: f64 = 0.0;
    for (curve, &factor) in curves.iter().zip(factors).skip(1) {
        let scale = factor.powf(exponent);
        let cur_branches = branch_nodes(curve, scale);
        if cur_branches.len() != ref_branches.len() {
            return Ok(f64::INFINITY);
        }
        for (ref_b, cur_b) in ref_branches.iter().zip(&cur_branches) {
            let Some(interp) = Pchip::new(cur_b.0.clone(), cur_b.1.clone()) else {
                return Ok(f64::INFINITY);
            };
            for (&i_in, &i_out) in ref_b.0.iter().zip(&ref_b.1) {
                if i_in < interp.x_min() || i_in > interp.x_max() {
                    continue; // outside the overlap of the two branches
                }
                let fitted = interp.eval(i_in);
                let dev = (fitted - i_out).abs() / i_out.abs().max(f64::MIN_POSITIVE);
                if i_out == 0.0 && fitted == 0.0 {
                    continue;
                }
                max_dev = max_dev.max(dev);
            }
        }
    }
    Ok(max_dev)
}

/// Per-branch (I_i, I_t) node lists, scaled by `scale`, ordered by
/// increasing I_i and including the refined fold endpoints.
#[allow(clippy::type_complexity)]
fn branch_nodes(curve: &SteadyStateCurve, scale: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let branches = curve.branches();
    let mut out = Vec::with_capacity(branches.len());
    for b in &branches {
        let (lo_i, lo_t) = curve.io(b.lo_x);
        let (hi_i, hi_t) = curve.io(b.hi_x);
        let mut nodes: Vec<(f64, f64)> = Vec::new();
        nodes.push((lo_i, lo_t));
        for s in &curve.samples {
            if s.x > b.lo_x && s.x < b.hi_x {
                nodes.push((s.i_in, s.i_out));
            }
        }
        nodes.push((hi_i, hi_t));
        if !b.rising {
            nodes.reverse();
        }
        // Strictly increasing I_i; drop fp-degenerate neighbors near folds.
        let mut xs = Vec::with_capacity(nodes.len());
        let mut ys = Vec::with_capacity(nodes.len());
        for (i_in, i_out) in nodes {
            if xs.last().is_some_and(|&last| i_in * scale <= last) {
                continue;
            }
            xs.push(i_in * scale);
            ys.push(i_out * scale);
        }
        out.push((xs, ys));
    }
    out
}

/// A refined transmission peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionPeak {
    /// Transmitted intensity at the peak.
    pub i_out: f64,
    /// Peak transmission.
    pub height: f64,
}

/// Dense transmission-versus-output sweep with extracted peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionProfile {
    /// (I_t, 𝔗) samples in increasing I_t order.
    pub samples: Vec<(f64, f64)>,
    /// Interior local maxima, refined parabolically, in increasing I_t order.
    pub peaks: Vec<TransmissionPeak>,
}

/// Evaluates 𝔗(I_t) densely over [0, i_t_max] and extracts the interference
/// peaks by local-maximum scan with parabolic refinement.
pub fn transmission_profile(
    eta: &NonlinearCoefficient,
    cav: &CavityConfig,
    i_t_max: f64,
    n_samples: usize,
) -> Result<TransmissionProfile, ModelError> {
    if !i_t_max.is_finite() || i_t_max <= 0.0 {
        return Err(ModelError::invalid("i_t_max", "must be positive"));
    }
    if n_samples < 3 {
        return Err(ModelError::invalid("n_samples", "must be at least 3"));
    }
    if eta.b < 0.0 {
        return Err(ModelError::invalid("eta", "Im(eta) must be >= 0"));
    }
    if eta.b > 0.0 {
        let limit = cav.t_mirror / (2.0 * eta.b);
        if i_t_max >= limit {
            return Err(ModelError::IntensityOutOfRange {
                i_t: i_t_max,
                limit,
            });
        }
    }

    // Same grid logic as curve tracing: uniform in the reconstructed damping
    // when absorption is present.
    let mut grid = Vec::with_capacity(n_samples);
    if eta.b > 0.0 {
        let t = cav.t_mirror;
        let lambda_end = -(-2.0 * eta.b * i_t_max / t).ln_1p();
        for i in 0..n_samples {
            let lam = lambda_end * i as f64 / (n_samples - 1) as f64;
            grid.push(t / (2.0 * eta.b) * (-(-lam).exp_m1()));
        }
    } else {
        for i in 0..n_samples {
            grid.push(i_t_max * i as f64 / (n_samples - 1) as f64);
        }
    }
    grid[0] = 0.0;
    *grid.last_mut().expect("n >= 3") = i_t_max;

    let mut samples = Vec::with_capacity(n_samples);
    for &i_t in &grid {
        samples.push((i_t, transmission(eta, cav, i_t)?));
    }

    let mut peaks = Vec::new();
    for i in 1..samples.len() - 1 {
        let (x0, y0) = samples[i - 1];
        let (x1, y1) = samples[i];
        let (x2, y2) = samples[i + 1];
        if !(y1 > y0 && y1 > y2) {
            continue;
        }
        let vertex = parabolic_vertex(x0, y0, x1, y1, x2, y2).clamp(x0, x2);
        let height = transmission(eta, cav, vertex)?;
        peaks.push(TransmissionPeak {
            i_out: vertex,
            height: height.max(y1),
        });
    }
    Ok(TransmissionProfile { samples, peaks })
}

/// Vertex abscissa of the parabola through three (possibly unevenly spaced)
/// points; falls back to the middle point when degenerate.
fn parabolic_vertex(x0: f64, y0: f64, x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        x1
    } else {
        x1 - 0.5 * num / den
    }
}
