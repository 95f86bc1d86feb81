//! Minimal native SVG line plots; no plotting dependency so sweep artifacts
//! stay diffable byte-for-byte.

use std::io::{self, Write};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 56.0;

pub struct Curve<'a> {
    pub points: &'a [(f64, f64)],
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub title: &'a str,
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn render_curve<W: Write>(mut out: W, curve: &Curve) -> io::Result<()> {
    let pts = curve.points;
    if pts.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "empty curve"));
    }
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if y_lo == y_hi {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.04 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="18" font-family="monospace" font-size="13" text-anchor="middle">{}</text>"#,
        0.5 * WIDTH,
        curve.title
    )?;

    // frame
    writeln!(
        out,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    )?;

    for tick in nice_ticks(x_lo, x_hi, 6) {
        let x = px(tick);
        writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#,
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        )?;
        writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="middle">{tick:.3}</text>"#,
            HEIGHT - MARGIN_B + 18.0
        )?;
    }
    for tick in nice_ticks(y_lo, y_hi, 6) {
        let y = py(tick);
        writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{MARGIN_L}" y2="{y:.1}" stroke="black"/>"#,
            MARGIN_L - 5.0
        )?;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="end">{tick:.3e}</text>"#,
            MARGIN_L - 8.0,
            y + 4.0
        )?;
    }

    let path: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        path.join(" ")
    )?;

    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
        MARGIN_L + 0.5 * (WIDTH - MARGIN_L - MARGIN_R),
        HEIGHT - 12.0,
        curve.x_label
    )?;
    writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        0.5 * HEIGHT,
        0.5 * HEIGHT,
        curve.y_label
    )?;
    writeln!(out, "</svg>")
}
