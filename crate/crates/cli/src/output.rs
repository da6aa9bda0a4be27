//! CSV files and text reports.

use std::fmt::Write as _;
use std::path::Path;

use memsim_core::{Classification, Loop, Series, Verdict};

use crate::config::{Plane, RunConfig};
use crate::run::{Outcome, SweepRow};
use crate::CliError;

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "none".into())
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::input(format!("{}: {e}", path.display()))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::input(format!("{}: {e}", path.display()))
}

pub fn write_timeseries(path: &Path, ts: &Series) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["t".to_string(), "u".into(), "y".into()];
    header.extend((0..ts.state_dim()).map(|k| format!("x{k}")));
    w.write_record(&header).map_err(csv_err(path))?;
    for k in 0..ts.len() {
        let mut row = vec![num(ts.t[k]), num(ts.u[k]), num(ts.y[k])];
        row.extend(ts.x[k].iter().map(|&v| num(v)));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_loop(path: &Path, lp: &Loop) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["u", "y"]).map_err(csv_err(path))?;
    for &(u, y) in &lp.points {
        w.write_record([num(u), num(y)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads the named numeric columns of a headed CSV file.
pub fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let idx = names
        .iter()
        .map(|n| {
            header.iter().position(|h| h.trim() == *n).ok_or_else(|| {
                CliError::input(format!(
                    "{}: no column `{n}` (have: {})",
                    path.display(),
                    header.iter().collect::<Vec<_>>().join(", ")
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        for (c, &i) in idx.iter().enumerate() {
            let field = rec.get(i).unwrap_or("").trim();
            let v: f64 = field.parse().map_err(|_| {
                CliError::input(format!(
                    "{}: row {}: `{field}` in column `{}` is not a number",
                    path.display(),
                    line + 2,
                    names[c]
                ))
            })?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

/// Plain-language account of a classification.
pub fn classification_text(c: &Classification) -> String {
    let t = &c.tolerances;
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", c.verdict);
    match c.origin_gap {
        Some(g) if g <= t.gap_tol => {
            let _ = writeln!(s, "  both branches pass through the origin (gap {g:.3e} <= {})", t.gap_tol);
        }
        Some(g) => {
            let _ = writeln!(s, "  a branch misses the origin (gap {g:.3e} > {})", t.gap_tol);
        }
        None => {
            let _ = writeln!(s, "  the loop does not reach u = 0");
        }
    }
    if let (Some(a), Some(d)) = (c.slope_asc, c.slope_desc) {
        let rel = (a - d).abs() / a.abs().max(d.abs()).max(f64::MIN_POSITIVE);
        let _ = writeln!(
            s,
            "  branch slopes at u = 0: {a:.4e} rising, {d:.4e} falling ({:.2}% apart, tangent below {}%)",
            100.0 * rel,
            100.0 * t.slope_tol
        );
    }
    let _ = writeln!(
        s,
        "  enclosed area {:.4e} in {} lobe(s), signed total {:.4e}",
        c.enclosed_area,
        c.lobe_areas.len(),
        c.total_area
    );
    if c.verdict == Verdict::NoHysteresis {
        let _ = writeln!(s, "  area below {} of the loop's bounding scale", t.area_tol);
    }
    for n in &c.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

/// Machine-readable `key = value` block.
pub fn classification_block(c: &Classification) -> String {
    let mut s = String::from("[classification]\n");
    let lobes: Vec<String> = c.lobe_areas.iter().map(|&a| num(a)).collect();
    for (k, v) in [
        ("verdict", c.verdict.to_string()),
        ("origin_gap", opt(c.origin_gap)),
        ("gap_asc", opt(c.gap_asc)),
        ("gap_desc", opt(c.gap_desc)),
        ("slope_asc", opt(c.slope_asc)),
        ("slope_desc", opt(c.slope_desc)),
        ("total_area", num(c.total_area)),
        ("enclosed_area", num(c.enclosed_area)),
        ("lobe_areas", lobes.join(";")),
        ("crossings", c.crossings.to_string()),
        ("gap_tol", num(c.tolerances.gap_tol)),
        ("slope_tol", num(c.tolerances.slope_tol)),
        ("area_tol", num(c.tolerances.area_tol)),
    ] {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

/// Axis labels for the loop plane.
pub fn axis_labels(cfg: &RunConfig) -> (&'static str, &'static str) {
    use memsim_core::ElementKind::*;
    match (cfg.device.kind(), cfg.plane) {
        (MemristiveCurrentControlled, _) => ("I (A)", "V (V)"),
        (MemristiveVoltageControlled, _) => ("V (V)", "I (A)"),
        (Memcapacitive, Plane::Response) => ("V (V)", "q (C)"),
        (Memcapacitive, Plane::Current) => ("V (V)", "I (A)"),
        (Meminductive, _) => ("I (A)", "flux (Wb)"),
    }
}

pub fn report(cfg: &RunConfig, o: &Outcome) -> String {
    let mut s = String::from("memsim simulation report\n\n");
    let (u, y) = axis_labels(cfg);
    let _ = writeln!(s, "device: {}", cfg.device.name());
    match cfg.c_std {
        Some(c) => {
            let _ = writeln!(s, "circuit: series with {c:e} F standard capacitor");
        }
        None => {
            let _ = writeln!(s, "circuit: driven directly");
        }
    }
    let _ = writeln!(s, "loop plane: {y} against {u}");
    let _ = writeln!(s, "samples: {}\n", o.series.len());
    s.push_str(&classification_text(&o.classification));
    if let Some(scan) = &o.scan {
        let _ = writeln!(
            s,
            "small-signal ratio |y/u| ~ |u|^{:.4} over {} amplitudes (r^2 {:.5}); max|y| {} with amplitude",
            scan.exponent,
            scan.points.len(),
            scan.r_squared,
            if scan.response_vanishes { "shrinks" } else { "does NOT shrink" }
        );
    }
    if let Some(p) = &o.peaks {
        let _ = writeln!(
            s,
            "current over the last period: {} peak(s) above {} x median |I| ({:.4e} A), max |I| {:.4e} A",
            p.peaks.len(),
            p.factor,
            p.median_abs,
            p.max_abs
        );
    }
    if let Some(k) = o.kirchhoff {
        let _ = writeln!(s, "series loop residual: {k:.3e} of peak source voltage");
    }
    s.push('\n');
    s.push_str(&classification_block(&o.classification));
    if let Some(scan) = &o.scan {
        s.push_str("\n[limit_scan]\n");
        let _ = writeln!(s, "exponent = {}", num(scan.exponent));
        let _ = writeln!(s, "intercept = {}", num(scan.intercept));
        let _ = writeln!(s, "r_squared = {}", num(scan.r_squared));
        let _ = writeln!(s, "amplitudes = {}", scan.points.len());
        let _ = writeln!(s, "response_vanishes = {}", scan.response_vanishes);
    }
    if let Some(p) = &o.peaks {
        s.push_str("\n[current]\n");
        let _ = writeln!(s, "peak_count = {}", p.peaks.len());
        let values: Vec<String> = p.peaks.iter().map(|k| num(k.value)).collect();
        let _ = writeln!(s, "peak_values = {}", values.join(";"));
        let _ = writeln!(s, "median_abs = {}", num(p.median_abs));
        let _ = writeln!(s, "max_abs = {}", num(p.max_abs));
        let _ = writeln!(s, "peak_factor = {}", num(p.factor));
    }
    if let Some(k) = o.kirchhoff {
        s.push_str("\n[circuit]\n");
        let _ = writeln!(s, "c_std = {}", num(cfg.c_std.unwrap_or(f64::NAN)));
        let _ = writeln!(s, "kirchhoff_residual = {}", num(k));
    }
    s.push_str("\n[config]\n");
    for (k, v) in &cfg.entries {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

pub fn summary_csv(param: &str, rows: &[SweepRow]) -> String {
    let mut s = String::from("param,value,verdict,origin_gap,total_area,enclosed_area,exponent\n");
    for r in rows {
        let c = &r.classification;
        let _ = writeln!(
            s,
            "{param},{},{},{},{},{},{}",
            r.value,
            c.verdict,
            c.origin_gap.map(num).unwrap_or_default(),
            num(c.total_area),
            num(c.enclosed_area),
            r.exponent.map(num).unwrap_or_default()
        );
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}
