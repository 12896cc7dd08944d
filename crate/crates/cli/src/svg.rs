//! Minimal SVG rendering: heatmaps as rect grids, curves as polylines.

use std::fmt::Write;

use trendwave_core::logwave::Scalogram;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub struct Curve<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

/// Blue below zero, red above, white at zero; `v` in `[-1, 1]`.
fn diverging(v: f64) -> (u8, u8, u8) {
    let v = v.clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - v.abs())).round() as u8;
    if v >= 0.0 {
        (255, fade, fade)
    } else {
        (fade, fade, 255)
    }
}

pub fn heatmap(sc: &Scalogram, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let (nr, nc) = (sc.scales.len(), sc.shifts.len());
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let (cw, ch) = (pw / nc as f64, ph / nr as f64);
    let peak = sc.max_abs();
    let norm = if peak > 0.0 { peak } else { 1.0 };
    out.push_str("<g shape-rendering=\"crispEdges\">\n");
    for i in 0..nr {
        // largest scale at the top
        let y = MARGIN + (nr - 1 - i) as f64 * ch;
        for j in 0..nc {
            let (r, g, b) = diverging(sc.get(i, j) / norm);
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                MARGIN + j as f64 * cw,
                y,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let (b0, b1) = (sc.shifts[0], sc.shifts[nc - 1]);
    let (a0, a1) = (sc.scales[0], sc.scales[nr - 1]);
    let base = HEIGHT - MARGIN;
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}">{b0}</text>"#, base + 16.0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{b1}</text>"#,
        WIDTH - MARGIN,
        base + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">shift (week)</text>"#,
        WIDTH / 2.0,
        base + 32.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{a0:.3}</text>"#,
        MARGIN - 4.0,
        base
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{a1:.3}</text>"#,
        MARGIN - 4.0,
        MARGIN + 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">scale</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">|Index| max {:.4e}</text>"#,
        WIDTH - MARGIN,
        MARGIN - 8.0,
        peak
    );
    out.push_str("</svg>\n");
    out
}

/// Curves on shared axes, with optional vertical markers.
pub fn line_chart(title: &str, curves: &[Curve], markers: &[f64]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let pts = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for &m in markers.iter().filter(|m| **m >= x0 && **m <= x1) {
        let _ = writeln!(
            out,
            r#"<line x1="{0:.2}" y1="{MARGIN}" x2="{0:.2}" y2="{1}" stroke="gray" stroke-dasharray="3,3"/>"#,
            sx(m),
            HEIGHT - MARGIN
        );
    }
    for (k, c) in curves.iter().enumerate() {
        let mut path = String::new();
        for &(x, y) in c.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            path.trim_end(),
            c.color
        );
        let ly = MARGIN + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{3}" stroke-width="2"/><text x="{4}" y="{5}">{6}</text>"#,
            MARGIN + 10.0,
            ly,
            MARGIN + 34.0,
            c.color,
            MARGIN + 40.0,
            ly + 4.0,
            escape(c.label)
        );
    }
    let base = HEIGHT - MARGIN;
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}">{x0}</text>"#, base + 16.0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{x1}</text>"#,
        WIDTH - MARGIN,
        base + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{base}" text-anchor="end">{y0:.4}</text>"#,
        MARGIN - 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{y1:.4}</text>"#,
        MARGIN - 4.0,
        MARGIN + 10.0
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use trendwave_core::logwave::scalogram;

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let d2y: Vec<f64> = (0..30).map(|i| (i as f64 * 0.4).sin()).collect();
        let sc = scalogram(&d2y, 1.0, &[1.0, 2.0, 3.0], &[5.0, 10.0, 15.0, 20.0]).unwrap();
        let svg = heatmap(&sc, "test <1>");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<rect x=").count(), 12 + 1);
        assert!(svg.contains("test &lt;1&gt;"));
    }

    #[test]
    fn colors_are_diverging() {
        assert_eq!(diverging(0.0), (255, 255, 255));
        assert_eq!(diverging(1.0), (255, 0, 0));
        assert_eq!(diverging(-1.0), (0, 0, 255));
    }

    #[test]
    fn chart_survives_flat_and_empty_input() {
        let flat = Curve {
            label: "flat",
            color: "black",
            points: vec![(0.0, 1.0), (1.0, 1.0)],
        };
        let svg = line_chart("t", &[flat], &[0.5]);
        assert!(!svg.contains("NaN"));
        assert!(!line_chart("t", &[], &[]).contains("NaN"));
    }
}
