//! Monotone piecewise-cubic (Fritsch-Carlson) interpolation.
//!
//! Used to resample steady-state branches onto a common input-intensity grid
//! when comparing rescaled curves. The shape-preserving slope limiter keeps
//! the interpolant free of overshoot between samples of a monotone branch.

/// Shape-preserving cubic Hermite interpolant over strictly increasing nodes.
pub(crate) struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    /// Builds the interpolant; returns `None` for fewer than two nodes or
    /// non-increasing abscissae.
    pub(crate) fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        let n = xs.len();
        if n < 2 || xs.len() != ys.len() {
            return None;
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return None;
        }

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut slopes = vec![0.0; n];
        for i in 1..n - 1 {
            let (s0, s1) = (secants[i - 1], secants[i]);
            if s0 * s1 <= 0.0 {
                slopes[i] = 0.0;
            } else {
                // Weighted harmonic mean of adjacent secants.
                let w0 = 2.0 * h[i] + h[i - 1];
                let w1 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w0 + w1) / (w0 / s0 + w1 / s1);
            }
        }
        slopes[0] = end_slope(h[0], secants[0], h.get(1).copied(), secants.get(1).copied());
        slopes[n - 1] = end_slope(
            h[n - 2],
            secants[n - 2],
            (n >= 3).then(|| h[n - 3]),
            (n >= 3).then(|| secants[n - 3]),
        );

        Some(Pchip { xs, ys, slopes })
    }

    /// Evaluates at `x`, which must lie within the node range.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        // partition_point gives the first node > x; interval is to its left.
        let idx = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let h = self.xs[idx + 1] - self.xs[idx];
        let t = (x - self.xs[idx]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[idx]
            + h10 * h * self.slopes[idx]
            + h01 * self.ys[idx + 1]
            + h11 * h * self.slopes[idx + 1]
    }

    pub(crate) fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub(crate) fn x_max(&self) -> f64 {
        *self.xs.last().expect("non-empty by construction")
    }
}

/// One-sided three-point end slope with the usual monotonicity clamps.
fn end_slope(h0: f64, s0: f64, h1: Option<f64>, s1: Option<f64>) -> f64 {
    let (h1, s1) = match (h1, s1) {
        (Some(h1), Some(s1)) => (h1, s1),
        _ => return s0,
    };
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 < 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_exactly() {
        let xs = vec![0.0, 0.5, 1.3, 2.0];
        let ys = vec![1.0, 1.8, 2.1, 4.0];
        let p = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(p.eval(*x), *y);
        }
    }

    #[test]
    fn preserves_monotonicity() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x / (1.0 + x)).collect();
        let p = Pchip::new(xs.clone(), ys).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=400 {
            let x = 0.3 * 19.0 * k as f64 / 400.0;
            let y = p.eval(x);
            assert!(y >= prev - 1e-12, "non-monotone at x={x}");
            prev = y;
        }
    }

    #[test]
    fn accurate_on_smooth_data() {
        let n = 200;
        let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 * 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 1.7).sin() + 2.0 * x).collect();
        let p = Pchip::new(xs, ys).unwrap();
        for k in 0..300 {
            let x = 0.005 + k as f64 / 100.0;
            let err = (p.eval(x) - ((x * 1.7).sin() + 2.0 * x)).abs();
            assert!(err < 2e-6, "error {err} at x={x}");
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(Pchip::new(vec![0.0], vec![1.0]).is_none());
        assert!(Pchip::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_none());
    }
}
