//! Report serialization: JSON, RFC 4180 CSV and a hand-built SVG 1.1 plot.

use std::fmt::Write;

use morrey_core::hilbert::SweepPoint;
use serde::Serialize;

use crate::LabError;

/// Pretty JSON with a trailing newline. Non-finite floats become `null`.
pub fn to_json(value: &impl Serialize) -> Result<String, LabError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| LabError::Validation(format!("report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV with a header row and CRLF line endings.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, LabError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let err = |e: csv::Error| LabError::Validation(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Validation(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > 1e-12 {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// `log10(opnorm_lb)` against `ν`, one polyline per family step, with dashed
/// vertical guides at the ends of `interval`. Points that could not be
/// evaluated break the polyline.
pub fn sweep_svg(points: &[SweepPoint], steps: usize, interval: (f64, f64)) -> String {
    let logs: Vec<f64> = points.iter().flat_map(|s| s.bounds.iter()).filter(|v| **v > 0.0).map(|v| v.log10()).collect();
    let (ylo, yhi) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    let (ylo, yhi) = if ylo.is_finite() { (ylo, yhi) } else { (0.0, 1.0) };
    let (xlo, xhi) = points.iter().fold((interval.0, interval.1), |(a, b), s| (a.min(s.nu), b.max(s.nu)));
    let ax = Axes { x: widen(xlo, xhi), y: widen(ylo, yhi) };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);

    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = ax.x.0 + t * (ax.x.1 - ax.x.0);
        let yv = ax.y.0 + t * (ax.y.1 - ax.y.0);
        let (px, py) = (ax.px(xv), ax.py(yv));
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{y1}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#, y1 + 18.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.2}</text>"#, x0 - 8.0, py + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">nu</text>"#, 0.5 * (x0 + x1), HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">log10 operator-norm lower bound</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );

    for g in [interval.0, interval.1] {
        let px = ax.px(g);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{y1}" stroke="gray" stroke-dasharray="4 3"/>"#
        );
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" fill="gray">{g}</text>"#, y0 - 8.0);
    }

    for k in 0..steps {
        let color = COLORS[k % COLORS.len()];
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for p in points {
            match p.bounds.get(k) {
                Some(&v) if v > 0.0 && v.is_finite() => {
                    runs.last_mut().expect("non-empty").push((ax.px(p.nu), ax.py(v.log10())))
                }
                _ => runs.push(Vec::new()),
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        let ly = y0 + 14.0 * k as f64 + 6.0;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            x1 - 90.0,
            x1 - 70.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">step {k}</text>"#, x1 - 65.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_uses_crlf() {
        let s = csv_string(&["a", "b"], vec![vec!["1".into(), "x,y".into()]]).unwrap();
        assert_eq!(s, "a,b\r\n1,\"x,y\"\r\n");
    }

    #[test]
    fn svg_breaks_lines_at_missing_points() {
        let pt = |nu: f64, bounds: Vec<f64>| SweepPoint { nu, growth: 1.0, diverging: false, error: None, bounds };
        let pts = vec![pt(-1.0, vec![]), pt(0.0, vec![1.0, 2.0]), pt(0.5, vec![1.5, 3.0])];
        let svg = sweep_svg(&pts, 2, (-0.7, 1.3));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
    }
}
