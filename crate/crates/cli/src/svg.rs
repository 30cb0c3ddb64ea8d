//! SVG heatmaps of phase grids with analytic phase-boundary overlays.
//!
//! Output depends only on the grid and its configuration: no timestamps,
//! fixed number formatting, deterministic element order.

use crate::format::fmt_sig;
use fqc_core::{DriveConfig, ModelId, ModelSpec};
use fqc_observables::{m4_boundaries, mobility_edge_m5, Phase};
use fqc_scan::{CellRecord, PhaseGrid, ScanConfig};
use std::fmt::Write;

/// Quantities that can be rendered.
pub const QUANTITIES: [&str; 10] = [
    "max_abs_im",
    "min_ipr",
    "max_ipr",
    "min_re",
    "max_re",
    "lyapunov_sign",
    "phase",
    "sign_sum",
    "w1",
    "w2",
];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Samples per axis of the analytic boundary functions.
const CONTOUR_SAMPLES: usize = 241;

/// Viridis control points, interpolated linearly.
const RAMP: [(u8, u8, u8); 9] = [
    (68, 1, 84),
    (71, 44, 122),
    (59, 81, 139),
    (44, 113, 142),
    (33, 144, 141),
    (39, 173, 129),
    (92, 200, 99),
    (170, 220, 50),
    (253, 231, 37),
];

/// Value of `quantity` in a cell, if defined there.
pub fn quantity_value(cell: &CellRecord, quantity: &str) -> Option<f64> {
    match quantity {
        "max_abs_im" => cell.max_abs_im,
        "min_ipr" => cell.min_ipr,
        "max_ipr" => cell.max_ipr,
        "min_re" => cell.min_re,
        "max_re" => cell.max_re,
        "lyapunov_sign" => cell.lyapunov_sign.map(f64::from),
        "phase" => cell.phase_label.map(|p| match p {
            Phase::Extended => 0.0,
            Phase::MobilityEdge => 1.0,
            Phase::Localized => 2.0,
        }),
        "sign_sum" => cell.sign_sum.map(f64::from),
        "w1" => cell.windings.as_ref().and_then(|w| w.first()).map(|&w| w as f64),
        "w2" => cell.windings.as_ref().and_then(|w| w.get(1)).map(|&w| w as f64),
        _ => None,
    }
}

fn color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (RAMP.len() - 1) as f64;
    let i = (x.floor() as usize).min(RAMP.len() - 2);
    let f = x - i as f64;
    let mix = |a: u8, b: u8| (f64::from(a) + f * (f64::from(b) - f64::from(a))).round() as u8;
    let (a, b) = (RAMP[i], RAMP[i + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn num(x: f64) -> String {
    format!("{x:.2}")
}

/// A labelled set of line segments in parameter coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub label: String,
    pub dashed: bool,
    pub segments: Vec<[(f64, f64); 2]>,
}

/// Zero-level line segments of `values` sampled on the grid `xs x ys`
/// (row-major, `values[i * ys.len() + j]` at `(xs[i], ys[j])`). Cells with a
/// non-finite corner are skipped.
pub fn contour_segments(xs: &[f64], ys: &[f64], values: &[f64]) -> Vec<[(f64, f64); 2]> {
    let ny = ys.len();
    let mut segments = Vec::new();
    if xs.len() < 2 || ny < 2 {
        return segments;
    }
    for i in 0..xs.len() - 1 {
        for j in 0..ny - 1 {
            let corners = [
                (xs[i], ys[j], values[i * ny + j]),
                (xs[i + 1], ys[j], values[(i + 1) * ny + j]),
                (xs[i + 1], ys[j + 1], values[(i + 1) * ny + j + 1]),
                (xs[i], ys[j + 1], values[i * ny + j + 1]),
            ];
            if corners.iter().any(|c| !c.2.is_finite()) {
                continue;
            }
            let mut crossings = Vec::with_capacity(4);
            for k in 0..4 {
                let (x0, y0, f0) = corners[k];
                let (x1, y1, f1) = corners[(k + 1) % 4];
                if (f0 < 0.0) != (f1 < 0.0) {
                    let s = f0 / (f0 - f1);
                    crossings.push((x0 + s * (x1 - x0), y0 + s * (y1 - y0)));
                }
            }
            for pair in crossings.chunks_exact(2) {
                segments.push([pair[0], pair[1]]);
            }
        }
    }
    segments
}

/// Analytic phase-boundary functions of the model, each zero on a boundary.
fn boundary_functions(model: ModelId) -> Vec<(&'static str, bool, fn(&ModelSpec, &DriveConfig) -> f64)> {
    fn t(spec: &ModelSpec, drive: &DriveConfig) -> f64 {
        spec.dressed_hopping(drive.k_over_omega).abs()
    }
    match model {
        ModelId::M1 => vec![("|V| = |J J0(K/w)|", false, |s, d| s.v.abs() - t(s, d))],
        ModelId::M2 => vec![("|V| e^|gamma| = 2|J J0(K/w)|", false, |s, d| s.v.abs() * s.gamma.abs().exp() - 2.0 * t(s, d))],
        ModelId::M3 => vec![("|V| = 2|J J0(K/w)| e^|gamma|", false, |s, d| s.v.abs() - 2.0 * t(s, d) * s.gamma.abs().exp())],
        ModelId::M4 => vec![
            ("gamma = gamma1", true, |s, d| m4_boundaries(s, d).map_or(f64::NAN, |b| s.gamma.abs() - b.gamma1)),
            ("gamma = gamma2", false, |s, d| m4_boundaries(s, d).map_or(f64::NAN, |b| s.gamma.abs() - b.gamma2)),
        ],
        ModelId::M5 => Vec::new(),
    }
}

/// Boundary overlays for a scan: analytic curves for M1–M4 and, for M5,
/// the curves where the mobility edge `E_c` meets the computed spectral
/// edges `min Re E` and `max Re E`.
pub fn boundary_overlays(grid: &PhaseGrid) -> Vec<Overlay> {
    let cfg: &ScanConfig = &grid.config;
    if cfg.spec.model == ModelId::M5 {
        let xs = cfg.axis1.values();
        let ys = cfg.axis2.values();
        let edge = |pick: fn(&CellRecord) -> Option<f64>| -> Vec<f64> {
            grid.cells
                .iter()
                .map(|c| {
                    let (spec, drive) = cfg.parameters_at(c.param1, c.param2);
                    match (mobility_edge_m5(&spec, &drive), pick(c)) {
                        (Ok(e_c), Some(e)) => e_c - e,
                        _ => f64::NAN,
                    }
                })
                .collect()
        };
        return vec![
            Overlay { label: "E_c = max Re E".into(), dashed: false, segments: contour_segments(&xs, &ys, &edge(|c| c.max_re)) },
            Overlay { label: "E_c = min Re E".into(), dashed: true, segments: contour_segments(&xs, &ys, &edge(|c| c.min_re)) },
        ];
    }
    let sample = |a: &fqc_scan::Axis| -> Vec<f64> {
        if a.n_points <= 1 {
            vec![a.min]
        } else {
            (0..CONTOUR_SAMPLES).map(|k| a.min + (a.max - a.min) * k as f64 / (CONTOUR_SAMPLES - 1) as f64).collect()
        }
    };
    let xs = sample(&cfg.axis1);
    let ys = sample(&cfg.axis2);
    boundary_functions(cfg.spec.model)
        .into_iter()
        .map(|(label, dashed, f)| {
            let values: Vec<f64> = xs
                .iter()
                .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
                .map(|(x, y)| {
                    let (spec, drive) = cfg.parameters_at(x, y);
                    f(&spec, &drive)
                })
                .collect();
            Overlay { label: label.into(), dashed, segments: contour_segments(&xs, &ys, &values) }
        })
        .collect()
}

/// Renders `quantity` over the grid as a standalone SVG document.
pub fn render_heatmap(grid: &PhaseGrid, quantity: &str, overlays: &[Overlay]) -> String {
    let cfg = &grid.config;
    let values: Vec<Option<f64>> = grid.cells.iter().map(|c| quantity_value(c, quantity).filter(|v| v.is_finite())).collect();
    let (mut lo, mut hi) = values.iter().flatten().fold((0.0_f64, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if !hi.is_finite() {
        hi = 1.0;
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    lo = lo.min(hi);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let extent = |a: &fqc_scan::Axis| {
        let step = if a.n_points > 1 { (a.max - a.min) / (a.n_points - 1) as f64 } else { 1.0 };
        let step = if step == 0.0 { 1.0 } else { step };
        (a.min - 0.5 * step, a.max + 0.5 * step, step)
    };
    let (x0, x1, dx) = extent(&cfg.axis1);
    let (y0, y1, dy) = extent(&cfg.axis2);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = format!("{} {} (L = {})", cfg.spec.model, quantity, cfg.lattice.l);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, num(LEFT + plot_w / 2.0), escape(&title));

    let _ = writeln!(s, r#"<g id="cells" shape-rendering="crispEdges">"#);
    for (cell, value) in grid.cells.iter().zip(&values) {
        let cx = px(cell.param1 - 0.5 * dx);
        let cy = py(cell.param2 + 0.5 * dy);
        let w = px(cell.param1 + 0.5 * dx) - cx;
        let h = py(cell.param2 - 0.5 * dy) - cy;
        let fill = match value {
            Some(v) => color((v - lo) / (hi - lo)),
            None => String::from("#bbbbbb"),
        };
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#, num(cx), num(cy), num(w + 0.3), num(h + 0.3), fill);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="boundaries" fill="none" stroke="#e31a1c" stroke-width="1.5">"##);
    for overlay in overlays {
        let mut d = String::new();
        for [(ax, ay), (bx, by)] in &overlay.segments {
            let _ = write!(d, "M{} {}L{} {}", num(px(*ax)), num(py(*ay)), num(px(*bx)), num(py(*by)));
        }
        if d.is_empty() {
            continue;
        }
        let dash = if overlay.dashed { r#" stroke-dasharray="5 3""# } else { "" };
        let _ = writeln!(s, r#"<path d="{d}"{dash}><title>{}</title></path>"#, escape(&overlay.label));
    }
    let _ = writeln!(s, "</g>");

    // Frame, ticks and axis labels.
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        num(plot_w),
        num(plot_h)
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = cfg.axis1.min + f * (cfg.axis1.max - cfg.axis1.min);
        let yv = cfg.axis2.min + f * (cfg.axis2.max - cfg.axis2.min);
        let (tx, ty) = (px(xv), py(yv));
        let bottom = TOP + plot_h;
        let _ = writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>"#, num(tx), num(bottom), num(bottom + 5.0));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, num(tx), num(bottom + 18.0), fmt_sig(xv, 3));
        let _ = writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>"#, num(LEFT - 5.0), num(ty), num(LEFT));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, num(LEFT - 8.0), num(ty + 4.0), fmt_sig(yv, 3));
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        num(LEFT + plot_w / 2.0),
        num(HEIGHT - 15.0),
        escape(cfg.axis1.parameter.name())
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
        num(TOP + plot_h / 2.0),
        escape(cfg.axis2.parameter.name())
    );

    // Colour bar.
    let bar_x = WIDTH - RIGHT + 30.0;
    let steps = 64;
    for k in 0..steps {
        let f0 = k as f64 / steps as f64;
        let y = TOP + plot_h * (1.0 - f0 - 1.0 / steps as f64);
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="18" height="{}" fill="{}"/>"#,
            num(bar_x),
            num(y),
            num(plot_h / steps as f64 + 0.3),
            color(f0 + 0.5 / steps as f64)
        );
    }
    let _ = writeln!(s, r#"<rect x="{}" y="{TOP}" width="18" height="{}" fill="none" stroke="black"/>"#, num(bar_x), num(plot_h));
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, num(bar_x + 22.0), num(TOP + 10.0), fmt_sig(hi, 3));
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, num(bar_x + 22.0), num(TOP + plot_h), fmt_sig(lo, 3));
    let _ = writeln!(s, "</svg>");
    s
}
