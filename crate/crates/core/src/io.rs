//! Curve, path, diagnostics and SVG serialization.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly. Output uses LF newlines only.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::curve::PolyCurve;
use crate::diagnostics::DiagnosticsRecord;
use crate::distance::{CurvePath, PathMode};
use crate::error::{FlowError, Result};
use crate::flow::{Termination, Trajectory};
use crate::scalar::{Scalar, Vec2};

pub const DIAGNOSTICS_HEADER: &str =
    "t,length,area,iso_ratio,deficit,linf,l2ds,xu_l2,min_edge,chord_arc_min,max_abs_k,rescaled_max_k,grad_sq_h1ds,embeddedness_ok";

/// Decimal form with 17 significant digits.
pub fn fmt_float<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn point_list<T: Scalar>(out: &mut String, pts: &[Vec2<T>]) {
    out.push('[');
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", fmt_float(p.x), fmt_float(p.y));
    }
    out.push(']');
}

fn to_curve<T: Scalar>(pts: &[[f64; 2]]) -> Result<PolyCurve<T>> {
    PolyCurve::new(pts.iter().map(|p| Vec2::new(T::lit(p[0]), T::lit(p[1]))).collect())
}

pub fn curve_to_csv<T: Scalar>(curve: &PolyCurve<T>) -> String {
    let mut out = String::from("x,y\n");
    for v in curve.vertices() {
        let _ = writeln!(out, "{},{}", fmt_float(v.x), fmt_float(v.y));
    }
    out
}

/// Reads `x,y` rows. Blank lines, `#` comments and a non-numeric header line are skipped.
pub fn curve_from_csv<T: Scalar>(text: &str) -> Result<PolyCurve<T>> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(FlowError::Parse(format!("line {}: expected 2 columns", lineno + 1)));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => pts.push([x, y]),
            _ if pts.is_empty() && lineno == 0 => continue,
            _ => return Err(FlowError::Parse(format!("line {}: not a number pair", lineno + 1))),
        }
    }
    to_curve(&pts)
}

pub fn curve_to_json<T: Scalar>(curve: &PolyCurve<T>) -> String {
    let mut out = String::from("{\"vertices\":");
    point_list(&mut out, curve.vertices());
    out.push_str("}\n");
    out
}

#[derive(Deserialize)]
struct CurveJson {
    vertices: Vec<[f64; 2]>,
}

pub fn curve_from_json<T: Scalar>(text: &str) -> Result<PolyCurve<T>> {
    let doc: CurveJson = serde_json::from_str(text).map_err(|e| FlowError::Parse(e.to_string()))?;
    to_curve(&doc.vertices)
}

/// Reads a curve file, JSON if the extension is `.json`, CSV otherwise.
pub fn read_curve<T: Scalar>(path: &Path) -> Result<PolyCurve<T>> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        curve_from_json(&text)
    } else {
        curve_from_csv(&text)
    }
}

pub fn write_curve<T: Scalar>(path: &Path, curve: &PolyCurve<T>) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        curve_to_json(curve)
    } else {
        curve_to_csv(curve)
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn diagnostics_row<T: Scalar>(r: &DiagnosticsRecord<T>) -> String {
    let cols = [
        r.t,
        r.length,
        r.area,
        r.iso_ratio,
        r.deficit,
        r.linf,
        r.l2ds,
        r.xu_l2,
        r.min_edge,
        r.chord_arc_min,
        r.max_abs_k,
        r.rescaled_max_k,
        r.grad_sq_h1ds,
    ];
    let mut out = cols.iter().map(|&c| fmt_float(c)).collect::<Vec<_>>().join(",");
    out.push(',');
    out.push_str(if r.embeddedness_ok { "true" } else { "false" });
    out
}

pub fn write_diagnostics_csv<T: Scalar, W: Write>(mut w: W, records: &[DiagnosticsRecord<T>]) -> Result<()> {
    let mut out = String::with_capacity(256 * (records.len() + 1));
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&diagnostics_row(r));
        out.push('\n');
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

pub fn path_to_json<T: Scalar>(path: &CurvePath<T>) -> String {
    let mut out = String::from("{\"mode\":\"");
    out.push_str(path.mode.as_str());
    out.push_str("\",\"frames\":[");
    for (k, f) in path.frames().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        point_list(&mut out, f.vertices());
    }
    out.push_str("]}\n");
    out
}

#[derive(Deserialize)]
struct PathJson {
    mode: String,
    frames: Vec<Vec<[f64; 2]>>,
}

pub fn path_from_json<T: Scalar>(text: &str) -> Result<CurvePath<T>> {
    let doc: PathJson = serde_json::from_str(text).map_err(|e| FlowError::Parse(e.to_string()))?;
    let mode: PathMode = doc.mode.parse()?;
    let frames = doc.frames.iter().map(|f| to_curve(f)).collect::<Result<Vec<_>>>()?;
    CurvePath::new(frames, mode)
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Completed => "completed",
        Termination::LengthGuard => "length_guard",
        Termination::NumericalFailure => "numerical_failure",
    }
}

/// Recorded states as `{"termination":..,"times":[..],"states":[[[x,y],..],..]}`.
pub fn trajectory_to_json<T: Scalar>(traj: &Trajectory<T>) -> String {
    let mut out = String::from("{\"termination\":\"");
    out.push_str(termination_name(traj.termination));
    out.push_str("\",\"times\":[");
    out.push_str(&traj.times.iter().map(|&t| fmt_float(t)).collect::<Vec<_>>().join(","));
    out.push_str("],\"states\":[");
    for (k, s) in traj.states.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        point_list(&mut out, s.vertices());
    }
    out.push_str("]}\n");
    out
}

/// One closed polygon per frame, stroke running from blue at the first time
/// to red at the last. The y axis points up.
pub fn frames_to_svg<T: Scalar>(times: &[T], frames: &[PolyCurve<T>]) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in frames.iter().flat_map(|f| f.vertices()) {
        let (x, y) = (v.x.as_f64(), v.y.as_f64());
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if frames.is_empty() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let (w, h) = ((x1 - x0).max(span * 1e-3), (y1 - y0).max(span * 1e-3));
    let (px, py) = (0.05 * w, 0.05 * h);
    let (vx, vy, vw, vh) = (x0 - px, -(y1 + py), w + 2.0 * px, h + 2.0 * py);
    let stroke = 0.003 * vw.max(vh);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        fmt_float(vx),
        fmt_float(vy),
        fmt_float(vw),
        fmt_float(vh)
    );
    let (t_first, t_last) = match (times.first(), times.last()) {
        (Some(a), Some(b)) => (a.as_f64(), b.as_f64()),
        _ => (0.0, 0.0),
    };
    for (k, f) in frames.iter().enumerate() {
        let u = match times.get(k) {
            Some(t) if t_last != t_first => ((t.as_f64() - t_first) / (t_last - t_first)).clamp(0.0, 1.0),
            _ if frames.len() > 1 => k as f64 / (frames.len() - 1) as f64,
            _ => 0.0,
        };
        let red = (255.0 * u).round() as u8;
        let points = f
            .vertices()
            .iter()
            .map(|v| format!("{},{}", fmt_float(v.x), fmt_float(-v.y)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            "<polygon points=\"{points}\" fill=\"none\" stroke=\"rgb({red},0,{})\" stroke-width=\"{}\"/>",
            255 - red,
            fmt_float(stroke)
        );
    }
    out.push_str("</svg>\n");
    out
}
