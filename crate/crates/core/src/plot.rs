//! Static SVG scatter of `1 - F` against `N` on a logarithmic `y` axis.
//!
//! Output depends only on the input points, so identical input gives
//! identical bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// Closed circles.
    Filled,
    /// Open circles.
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotPoint {
    pub n: i64,
    pub y: f64,
    /// Text used for the `data-y` attribute, usually the CSV cell verbatim.
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub marker: Marker,
    pub points: Vec<PlotPoint>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

fn nice_step(span: i64) -> i64 {
    let raw = (span as f64 / 10.0).max(1.0);
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag);
    step as i64
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(series: &[Series]) -> Result<String> {
    let points = series.iter().flat_map(|s| &s.points);
    if points.clone().next().is_none() {
        return Err(Error::InvalidArgument("nothing to plot".into()));
    }
    if let Some(p) = points.clone().find(|p| !p.y.is_finite() || p.y <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "1 - F must be positive for a log axis (N = {}, value {})",
            p.n, p.label
        )));
    }
    let n_max = points.clone().map(|p| p.n).max().unwrap_or(1).max(1);
    let y_min = points.clone().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y_max = points.map(|p| p.y).fold(0.0, f64::max);
    let dec_lo = y_min.log10().floor() as i32;
    let mut dec_hi = y_max.log10().ceil() as i32;
    if dec_hi <= dec_lo {
        dec_hi = dec_lo + 1;
    }

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_of = |n: i64| LEFT + plot_w * n as f64 / (n_max + 1) as f64;
    let y_of = |v: f64| TOP + plot_h * (f64::from(dec_hi) - v.log10()) / f64::from(dec_hi - dec_lo);

    let mut svg = String::new();
    let w = &mut svg;
    // writes to a String cannot fail
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">1 - F as a function of N</text>"#,
        LEFT + plot_w / 2.0
    );

    // axes and decade grid
    let _ = writeln!(
        w,
        r#"<g class="axes" stroke="black" stroke-width="1" fill="none">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}"/>"#
    );
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<g class="y-ticks" font-family="sans-serif" font-size="11">"#
    );
    for d in dec_lo..=dec_hi {
        let y = y_of(10f64.powi(d));
        let _ = writeln!(
            w,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#cccccc" stroke-width="0.5"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(w, "</g>");
    let step = nice_step(n_max);
    let _ = writeln!(
        w,
        r#"<g class="x-ticks" font-family="sans-serif" font-size="11">"#
    );
    let mut n = 0;
    while n <= n_max {
        let x = x_of(n);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 4.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            TOP + plot_h + 18.0
        );
        n += step;
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">N</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">1 - F</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let (fill, class) = match s.marker {
            Marker::Filled => ("black", "filled"),
            Marker::Open => ("white", "open"),
        };
        let _ = writeln!(
            w,
            r#"<g class="series {class}" data-name="{}" data-points="{}" fill="{fill}" stroke="black" stroke-width="1">"#,
            escape(&s.name),
            s.points.len()
        );
        for p in &s.points {
            let _ = writeln!(
                w,
                r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3.5" data-n="{}" data-y="{}"/>"#,
                x_of(p.n),
                y_of(p.y),
                p.n,
                escape(&p.label)
            );
        }
        let _ = writeln!(w, "</g>");

        // legend entry
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w - 190.0;
        let _ = writeln!(
            w,
            r#"<circle cx="{lx:.2}" cy="{ly:.2}" r="3.5" fill="{fill}" stroke="black"/>"#
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 10.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
