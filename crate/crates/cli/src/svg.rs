//! Minimal SVG plot of a loop.

use std::fmt::Write as _;

use memsim_core::Loop;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 530.0;

/// Data range padded by 5% and widened to include zero.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if span > 0.0 {
        (lo - 0.05 * span, hi + 0.05 * span)
    } else {
        (-1.0, 1.0)
    }
}

/// Tick spacing of the form 1, 2 or 5 times a power of ten giving about
/// six intervals.
fn tick_step(lo: f64, hi: f64) -> f64 {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    mag * if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let step = tick_step(lo, hi);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), step)
}

fn label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    if decimals > 3 || v.abs() >= 1e4 {
        format!("{v:.1e}")
    } else {
        format!("{v:.decimals$}")
    }
}

/// Renders `lp` as an 800x600 SVG with labelled axes and a cross-hair at
/// the origin.
pub fn loop_svg(lp: &Loop, u_label: &str, y_label: &str, title: &str) -> String {
    let (u0, u1) = range(lp.points.iter().map(|p| p.0));
    let (y0, y1) = range(lp.points.iter().map(|p| p.1));
    let px = |u: f64| LEFT + (u - u0) / (u1 - u0) * (RIGHT - LEFT);
    let py = |y: f64| BOTTOM - (y - y0) / (y1 - y0) * (BOTTOM - TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let (uticks, ustep) = ticks(u0, u1);
    for u in uticks {
        let x = px(u);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            BOTTOM + 6.0,
            BOTTOM + 20.0,
            label(u, ustep)
        );
    }
    let (yticks, ystep) = ticks(y0, y1);
    for y in yticks {
        let v = py(y);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{v:.2}" x2="{LEFT}" y2="{v:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            LEFT - 9.0,
            v + 4.0,
            label(y, ystep)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{u_label}</text>"#,
        0.5 * (LEFT + RIGHT),
        HEIGHT - 25.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{y_label}</text>"#,
        0.5 * (TOP + BOTTOM)
    );
    let _ = writeln!(s, r#"<text x="{}" y="25" text-anchor="middle">{title}</text>"#, 0.5 * (LEFT + RIGHT));

    let (ox, oy) = (px(0.0), py(0.0));
    let _ = writeln!(
        s,
        r##"<g stroke="#c00"><line x1="{:.2}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="{:.2}" x2="{ox:.2}" y2="{:.2}"/></g>"##,
        ox - 8.0,
        ox + 8.0,
        oy - 8.0,
        oy + 8.0
    );
    let pts: Vec<String> = lp.points.iter().map(|&(u, y)| format!("{:.2},{:.2}", px(u), py(y))).collect();
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
        pts.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
