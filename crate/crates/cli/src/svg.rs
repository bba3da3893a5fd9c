//! Minimal hand-rolled SVG line plots: axes, ticks, polylines, legend.
//! No external renderer; the output is a standalone static file.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::CliError;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 86.0;
const MARGIN_RIGHT: f64 = 28.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 64.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#e377c2", "#9467bd", "#ff7f0e", "#17becf", "#8c564b",
];

/// One labeled polyline.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A complete plot description.
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Round `span / 5` to a 1-2-5 decade step.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.abs().log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let decimals = (-step.log10().floor() as i32).max(0) as usize;
    if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        format!("{v:.decimals$}")
    }
}

/// Writes the plot. Single-point series are drawn as a circle marker.
pub fn write_plot(path: &Path, plot: &Plot) -> Result<(), CliError> {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in &plot.series {
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                xs.push(x);
                ys.push(y);
            }
        }
    }
    if xs.is_empty() {
        return Err(CliError::validation("svg", "no finite data to plot"));
    }
    let (mut x_lo, mut x_hi) = bounds(&xs);
    let (mut y_lo, mut y_hi) = bounds(&ys);
    pad(&mut x_lo, &mut x_hi);
    pad(&mut y_lo, &mut y_hi);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w,
            MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"##
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"##
    );

    // Gridlines and ticks.
    let x_step = nice_step(x_hi - x_lo);
    let y_step = nice_step(y_hi - y_lo);
    let mut tick = (x_lo / x_step).ceil() * x_step;
    while tick <= x_hi {
        let (px, _) = to_px(tick, y_lo);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{top:.2}" x2="{px:.2}" y2="{bot:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            top = MARGIN_TOP,
            bot = MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r##"<text x="{px:.2}" y="{y:.2}" font-size="13" text-anchor="middle" fill="#333333">{}</text>"##,
            escape(&tick_label(tick, x_step)),
            y = MARGIN_TOP + plot_h + 20.0
        );
        tick += x_step;
    }
    let mut tick = (y_lo / y_step).ceil() * y_step;
    while tick <= y_hi {
        let (_, py) = to_px(x_lo, tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{left:.2}" y1="{py:.2}" x2="{right:.2}" y2="{py:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            left = MARGIN_LEFT,
            right = MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x:.2}" y="{py:.2}" font-size="13" text-anchor="end" dominant-baseline="middle" fill="#333333">{}</text>"##,
            escape(&tick_label(tick, y_step)),
            x = MARGIN_LEFT - 8.0
        );
        tick += y_step;
    }

    // Axes frame.
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1.5"/>"##
    );

    // Series.
    for (idx, series) in plot.series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if series.points.len() == 1 {
            let (px, py) = to_px(series.points[0].0, series.points[0].1);
            let _ = writeln!(
                svg,
                r##"<circle cx="{px:.2}" cy="{py:.2}" r="4" fill="{color}"/>"##
            );
            continue;
        }
        let mut coords = String::new();
        for &(x, y) in &series.points {
            let (px, py) = to_px(x, y);
            let _ = write!(coords, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"##,
            coords.trim_end()
        );
    }

    // Legend (only when labels are informative).
    if plot.series.len() > 1 {
        let x0 = MARGIN_LEFT + plot_w - 200.0;
        let y0 = MARGIN_TOP + 12.0;
        let h = plot.series.len() as f64 * 19.0 + 10.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="192" height="{h:.2}" fill="white" fill-opacity="0.85" stroke="#999999"/>"##
        );
        for (idx, series) in plot.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let ly = y0 + 18.0 + idx as f64 * 19.0;
            let _ = writeln!(
                svg,
                r##"<line x1="{x1}" y1="{ly:.2}" x2="{x2}" y2="{ly:.2}" stroke="{color}" stroke-width="2.5"/>"##,
                x1 = x0 + 8.0,
                x2 = x0 + 34.0
            );
            let _ = writeln!(
                svg,
                r##"<text x="{x:.2}" y="{ly:.2}" font-size="13" dominant-baseline="middle" fill="#111111">{}</text>"##,
                escape(&series.label),
                x = x0 + 42.0
            );
        }
    }

    // Title and axis labels.
    let _ = writeln!(
        svg,
        r##"<text x="{x:.2}" y="28" font-size="17" text-anchor="middle" fill="#111111">{}</text>"##,
        escape(&plot.title),
        x = WIDTH / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<text x="{x:.2}" y="{y:.2}" font-size="15" text-anchor="middle" fill="#111111">{}</text>"##,
        escape(&plot.x_label),
        x = MARGIN_LEFT + plot_w / 2.0,
        y = HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r##"<text x="20" y="{y:.2}" font-size="15" text-anchor="middle" transform="rotate(-90 20 {y:.2})" fill="#111111">{}</text>"##,
        escape(&plot.y_label),
        y = MARGIN_TOP + plot_h / 2.0
    );

    let _ = writeln!(svg, "</svg>");
    fs::write(path, svg).map_err(CliError::io(path))
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn pad(lo: &mut f64, hi: &mut f64) {
    if *hi == *lo {
        let bump = lo.abs().max(1.0) * 0.05;
        *lo -= bump;
        *hi += bump;
    } else {
        let span = *hi - *lo;
        *lo -= 0.04 * span;
        *hi += 0.04 * span;
    }
}
