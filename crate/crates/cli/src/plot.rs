//! Deterministic log-log SVG plots of growth series with fitted lines.

use std::fmt::Write;

use anyhow::{bail, Result};
use nilgrowth::growth::{ln_big, ExponentFit, GrowthSeries};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct PlotSeries<'a> {
    pub series: &'a GrowthSeries,
    pub fit: Option<&'a ExponentFit>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the series on shared log-log axes. Every series needs at least two points.
pub fn render_svg(title: &str, series: &[PlotSeries<'_>]) -> Result<String> {
    if series.is_empty() {
        bail!("a plot needs at least one series");
    }
    for s in series {
        if s.series.len() < 2 {
            bail!("series '{}' has {} point(s); a plot needs at least 2", s.series.label, s.series.len());
        }
    }
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.series
                .points()
                .iter()
                .filter(|(n, _)| *n >= 1)
                .map(|(n, v)| ((*n as f64).ln(), ln_big(v)))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##)?;
    writeln!(out, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title))?;
    writeln!(
        out,
        r##"<path d="M{m:.1},{t:.1} L{m:.1},{b:.1} L{r:.1},{b:.1}" stroke="#000000" fill="none"/>"##,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">log n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    )?;
    writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">log value</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )?;
    for x in [x0, x1] {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n={:.0}</text>"#,
            sx(x),
            HEIGHT - MARGIN + 16.0,
            x.exp()
        )?;
    }
    for (i, (s, p)) in series.iter().zip(&pts).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let d: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(out, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-opacity="0.4"/>"#, d.join(" "))?;
        for &(x, y) in p {
            writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(x), sy(y))?;
        }
        let mut legend = escape(&s.series.label);
        if let Some(f) = s.fit {
            let (a, b) = ((f.range.0 as f64).ln(), (f.range.1 as f64).ln());
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="6 4"/>"#,
                sx(a),
                sy(f.slope * a + f.intercept),
                sx(b),
                sy(f.slope * b + f.intercept)
            )?;
            write!(legend, " (slope {:.3}, R² {:.4})", f.slope, f.r2)?;
        }
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{legend}</text>"#,
            MARGIN + 10.0,
            MARGIN + 16.0 * i as f64
        )?;
    }
    out.push_str("</svg>\n");
    Ok(out)
}
