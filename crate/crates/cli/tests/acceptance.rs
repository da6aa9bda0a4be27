//! Acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines are always shown;
//! exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use memsim::{simulate, Outcome, RawConfig, RunConfig};
use memsim_core::{
    classify_loop, integrate, loop_area, Config, Drive, Loop, Quantity, TangentPinch, Tolerances,
    Verdict, WaveShape,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_preset(name: &str) -> Result<(RunConfig, Outcome), String> {
    let cfg = RawConfig::load(name)
        .and_then(|r| r.interpret())
        .map_err(|e| format!("{name}: {e}"))?;
    let o = simulate(&cfg).map_err(|e| format!("{name}: {e}"))?;
    Ok((cfg, o))
}

fn divergent(name: &str, plane: &str) -> Check {
    let (cfg, o) = run_preset(name)?;
    let c = &o.classification;
    let gap = c.origin_gap.ok_or("loop never crosses u = 0")?;
    ensure(gap < 0.02, format!("origin_gap {gap:.3e} >= 0.02"))?;
    ensure(c.verdict.is_pinched(), format!("verdict {}", c.verdict))?;
    let scan = o.scan.as_ref().ok_or("preset does not run a limit scan")?;
    ensure(cfg.scan_decades >= 2, "fewer than 2 decades")?;
    ensure(
        (scan.exponent + 0.5).abs() <= 0.05,
        format!("{plane} exponent {:.4} outside -0.50 +- 0.05", scan.exponent),
    )?;
    ensure(scan.response_vanishes, "max|y| does not shrink with amplitude")?;
    Ok(format!(
        "{}, origin_gap {gap:.2e}, {plane} exponent {:.4} over {} decades (r^2 {:.4})",
        c.verdict, scan.exponent, cfg.scan_decades, scan.r_squared
    ))
}

/// Charges interpolated at the `u = 0` crossings, split by direction.
fn zero_crossing_charges(lp: &Loop) -> (Vec<f64>, Vec<f64>) {
    let (mut rising, mut falling) = (Vec::new(), Vec::new());
    for w in lp.points.windows(2) {
        let ((ua, ya), (ub, yb)) = (w[0], w[1]);
        if (ua <= 0.0 && ub > 0.0) || (ua >= 0.0 && ub < 0.0) {
            let q = ya + (yb - ya) * ua / (ua - ub);
            if ub > ua {
                rising.push(q);
            } else {
                falling.push(q);
            }
        }
    }
    (rising, falling)
}

fn ferro_preset_is_faithful(cfg: &RunConfig) -> Result<(), String> {
    ensure(cfg.c_std == Some(33e-9), "c_std is not 33 nF")?;
    ensure(cfg.drive.shape == WaveShape::Triangular, "drive is not triangular")?;
    match cfg.device {
        memsim::DeviceSpec::Ferroelectric { params, .. } => {
            ensure(params.thickness == 255e-9, "thickness is not 255 nm")?;
            ensure(params.area == 1e-7, "area is not 1e5 um^2")
        }
        _ => Err("ferro-series is not a ferroelectric device".into()),
    }
}

fn criterion_3() -> Check {
    let (cfg, o) = run_preset("ferro-series")?;
    ferro_preset_is_faithful(&cfg)?;
    let c = &o.classification;
    ensure(c.verdict == Verdict::NonPinched, format!("verdict {}", c.verdict))?;
    let gap = c.origin_gap.ok_or("no u = 0 crossing")?;
    ensure(gap >= 0.1, format!("origin_gap {gap:.3} < 0.1"))?;
    let (rising, falling) = zero_crossing_charges(&o.steady);
    ensure(rising.len() == 1 && falling.len() == 1, format!("{} + {} zero crossings", rising.len(), falling.len()))?;
    ensure(
        rising[0] * falling[0] < 0.0,
        format!("charges {:.3e} and {:.3e} share a sign", rising[0], falling[0]),
    )?;
    ensure(o.kirchhoff.unwrap_or(1.0) < 1e-9, "series loop residual above 1e-9")?;
    Ok(format!(
        "NonPinched, origin_gap {gap:.3}, q(v=0) = {:.3e} C rising / {:.3e} C falling",
        rising[0], falling[0]
    ))
}

fn criterion_4() -> Check {
    let (cfg, o) = run_preset("ferro-series")?;
    ferro_preset_is_faithful(&cfg)?;
    let p = o.peaks.as_ref().ok_or("no current computed")?;
    ensure(p.factor == 5.0, "peak threshold is not 5x median")?;
    let threshold = 5.0 * p.median_abs;
    ensure(p.peaks.iter().all(|k| k.value.abs() > threshold), "peak below threshold")?;
    ensure(
        p.peaks.len() == 2,
        format!(
            "{} peaks (max|I| / median|I| = {:.2})",
            p.peaks.len(),
            p.max_abs / p.median_abs
        ),
    )?;
    ensure(p.peaks[0].value * p.peaks[1].value < 0.0, "both peaks share a polarity")?;
    Ok(format!(
        "2 peaks ({:+.3e} A, {:+.3e} A), median |I| {:.3e} A, ratio {:.1}",
        p.peaks[0].value,
        p.peaks[1].value,
        p.median_abs,
        p.max_abs / p.median_abs
    ))
}

fn synthetic(n: usize, f: impl Fn(f64) -> (f64, f64)) -> Loop {
    Loop::closing((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
}

fn criterion_5() -> Check {
    let tol = Tolerances::default();
    let cases = [
        ("figure-eight", synthetic(1000, |t| (t.sin(), (2.0 * t).sin())), Verdict::PinchedCrossing),
        ("offset ellipse", synthetic(1000, |t| (t.cos() + 0.3, 0.5 * t.sin() + 0.4)), Verdict::NonPinched),
        ("line through origin", synthetic(1000, |t| (t.sin(), 2.0 * t.sin())), Verdict::NoHysteresis),
    ];
    for (name, lp, want) in &cases {
        let got = classify_loop(lp, &tol).map_err(|e| format!("{name}: {e}"))?.verdict;
        ensure(got == *want, format!("{name}: {got}, expected {want}"))?;
    }
    let (_, o) = run_preset("tangent-pinch")?;
    let c = &o.classification;
    ensure(c.verdict == Verdict::PinchedTangent, format!("tangent-pinch: {}", c.verdict))?;
    let (a, d) = (c.slope_asc.ok_or("no slope")?, c.slope_desc.ok_or("no slope")?);
    let rel = (a - d).abs() / a.abs().max(d.abs());
    ensure(rel < 0.05, format!("tangent-pinch slopes differ by {:.2}%", 100.0 * rel))?;
    Ok(format!(
        "figure-eight, offset ellipse, line exact; tangent-pinch slopes differ by {:.2e}",
        rel
    ))
}

fn relaxation_error(dt: f64) -> Result<f64, String> {
    let beta = 3.0;
    let el = TangentPinch::new(100.0, 100.0, beta, 1e-3).map_err(|e| e.to_string())?;
    let drive = Drive::constant(Quantity::Current, 2e-3, 1.0);
    let ts = integrate(&el, &drive, &Config::rk4(dt, 2)).map_err(|e| e.to_string())?;
    let t = *ts.t.last().unwrap();
    let exact = 2.0 * (1.0 - (-beta * t).exp());
    Ok((ts.x.last().unwrap()[0] - exact).abs() / exact)
}

fn criterion_6() -> Check {
    let mut raw = RawConfig::load("linear-cap").map_err(|e| e.to_string())?;
    raw.set("analysis.plane", "current");
    let cfg = raw.interpret().map_err(|e| e.to_string())?;
    let o = simulate(&cfg).map_err(|e| e.to_string())?;
    let area = loop_area(&o.steady).map_err(|e| e.to_string())?.total.abs();
    let expected = PI * TAU * 1e3 * 33e-9 * 1.0 * 1.0;
    ensure((expected - 6.514e-4).abs() < 5e-8, format!("closed form gives {expected:.4e}"))?;
    let rel = (area - expected).abs() / expected;
    ensure(rel < 1e-3, format!("area {area:.6e} vs {expected:.6e} ({:.3}%)", 100.0 * rel))?;

    let dts = [0.2_f64, 0.1, 0.05, 0.025];
    let mut pts = Vec::new();
    for dt in dts {
        pts.push((dt.ln(), relaxation_error(dt)?.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let order = sxy / sxx;
    ensure((order - 4.0).abs() <= 0.3, format!("RK4 order {order:.3}"))?;
    Ok(format!(
        "I-V area {area:.6e} vs pi*w*C*A^2 = {expected:.6e} ({:.4}%), RK4 order {order:.3}",
        100.0 * rel
    ))
}

fn memsim(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_memsim"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn block(text: &str) -> Option<&str> {
    let start = text.find("[classification]")?;
    let rest = &text[start..];
    Some(rest.split("\n\n").next().unwrap_or(rest).trim_end())
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [dir.path().join("a"), dir.path().join("b")];
    for d in &runs {
        let (code, _) = memsim(&["simulate", "divergent-r", "--out-dir", d.to_str().unwrap()])?;
        ensure(code == 0, format!("simulate exited {code}"))?;
    }
    for f in ["timeseries.csv", "loop.csv", "report.txt"] {
        let a = std::fs::read(runs[0].join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(runs[1].join(f)).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{f} differs between runs"))?;
    }
    let (cfg, o) = run_preset("divergent-r")?;
    let report = std::fs::read_to_string(runs[0].join("report.txt")).map_err(|e| e.to_string())?;
    let in_process = memsim::output::classification_block(&o.classification);
    ensure(block(&report) == block(&in_process), "report block differs from in-process run")?;

    let loop_csv = |d: &Path| d.join("loop.csv").to_str().unwrap().to_string();
    let (c1, out1) = memsim(&["classify", &loop_csv(&runs[0])])?;
    let (c2, out2) = memsim(&["classify", &loop_csv(&runs[1])])?;
    ensure(c1 == 0 && c2 == 0, "classify failed")?;
    ensure(out1 == out2, "classify output differs between runs")?;
    let out1 = String::from_utf8(out1).map_err(|e| e.to_string())?;
    ensure(block(&out1) == block(&in_process), "classify block differs from in-process run")?;

    let ts = runs[0].join("timeseries.csv");
    let period = format!("{}", cfg.drive.period());
    let (c3, out3) = memsim(&["classify", ts.to_str().unwrap(), "--period", &period])?;
    ensure(c3 == 0, "classify --period failed")?;
    let out3 = String::from_utf8(out3).map_err(|e| e.to_string())?;
    ensure(block(&out3) == block(&in_process), "time-series classify differs from in-process run")?;
    Ok(format!(
        "{} reproduced byte-for-byte from loop.csv and timeseries.csv across 2 runs",
        o.classification.verdict
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 7] = [
        ("1 divergent-R pinch with divergent resistance", Duration::from_secs(10), || divergent("divergent-r", "|V/I|")),
        ("2 divergent-G dual", Duration::from_secs(10), || divergent("divergent-g", "|I/V|")),
        ("3 non-pinched memcapacitor", Duration::from_secs(30), criterion_3),
        ("4 two-peak current", Duration::from_secs(30), criterion_4),
        ("5 taxonomy exactness", Duration::from_secs(5), criterion_5),
        ("6 analytic oracles", Duration::from_secs(30), criterion_6),
        ("7 round-trip determinism", Duration::from_secs(60), criterion_7),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {took:.2?} > {limit:?}"))
            }
        });
        match result {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
