//! Minimal SVG charts: scatter panels with error bars and line plots.

use std::fmt::Write as _;

const PANEL_W: f64 = 280.0;
const PANEL_H: f64 = 230.0;
const MARGIN: f64 = 42.0;
const COLUMNS: usize = 3;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// `(x, y, half-width of the y error bar)`.
pub type Point = (f64, f64, f64);

pub struct Series {
    pub name: String,
    pub points: Vec<Point>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Join consecutive points with lines.
    pub lines: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { (hi - lo) * 0.08 } else { lo.abs().max(1.0) * 0.1 };
    (lo - pad, hi + pad)
}

fn panel(out: &mut String, p: &Panel, ox: f64, oy: f64) {
    let pts = || p.series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(pts().map(|q| q.0));
    let (y0, y1) = range(pts().flat_map(|q| [q.1 - q.2, q.1 + q.2]));
    let (w, h) = (PANEL_W - MARGIN - 10.0, PANEL_H - MARGIN - 24.0);
    let (left, top) = (ox + MARGIN, oy + 24.0);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| top + h - (y - y0) / (y1 - y0) * h;

    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        oy + 15.0,
        escape(&p.title)
    )
    .unwrap();
    writeln!(out, r##"<rect x="{left:.1}" y="{top:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="#444"/>"##)
        .unwrap();
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="9" text-anchor="{anchor}">{v:.3}</text>"#,
            sx(v),
            top + h + 11.0
        )
        .unwrap();
    }
    for v in [y0, y1] {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="9" text-anchor="end">{v:.2}</text>"#,
            left - 3.0,
            sy(v) + 3.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        top + h + 24.0,
        escape(&p.x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        ox + 12.0, top + h / 2.0, ox + 12.0, top + h / 2.0, escape(&p.y_label)
    )
    .unwrap();

    for (k, s) in p.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if p.lines && s.points.len() > 1 {
            let path: Vec<String> = s.points.iter().map(|q| format!("{:.1},{:.1}", sx(q.0), sy(q.1))).collect();
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}"/>"#, path.join(" ")).unwrap();
        }
        for &(x, y, e) in &s.points {
            if e > 0.0 {
                writeln!(
                    out,
                    r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="{color}" stroke-width="0.8"/>"#,
                    sx(x),
                    sy(y - e),
                    sy(y + e)
                )
                .unwrap();
            }
            writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#, sx(x), sy(y)).unwrap();
        }
        if p.series.len() > 1 {
            writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="9" fill="{color}">{}</text>"#,
                left + 4.0,
                top + 11.0 + 11.0 * k as f64,
                escape(&s.name)
            )
            .unwrap();
        }
    }
}

pub fn render(title: &str, panels: &[Panel]) -> String {
    let cols = panels.len().clamp(1, COLUMNS);
    let rows = panels.len().div_ceil(cols).max(1);
    let (width, height) = (cols as f64 * PANEL_W, rows as f64 * PANEL_H + 30.0);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.1}" y="20" font-size="14" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    )
    .unwrap();
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, p, (i % cols) as f64 * PANEL_W, 30.0 + (i / cols) as f64 * PANEL_H);
    }
    out.push_str("</svg>\n");
    out
}
