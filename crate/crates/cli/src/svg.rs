//! SVG figures: a row of curves along a geodesic and the matching warp.

use std::fmt::Write;

use num_complex::Complex64;

use elastica::{PlaneCurve, Reparameterization};

const CELL: f64 = 140.0;
const PAD: f64 = 10.0;

fn polyline(points: impl Iterator<Item = (f64, f64)>, style: &str) -> String {
    let coords: Vec<String> = points.map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    format!(r#"<polyline points="{}" {style}/>"#, coords.join(" "))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Curves side by side on a shared scale, each centered in its own cell,
/// followed by the warp `gamma` (blue) against the identity (red).
pub fn geodesic_figure(curves: &[PlaneCurve], gamma: &Reparameterization, caption: &str) -> String {
    let centered: Vec<Vec<Complex64>> = curves
        .iter()
        .map(|c| {
            let v = c.vertices();
            let (lo, hi) = bounds(v);
            let mid = (lo + hi) / 2.0;
            v.iter().map(|z| z - mid).collect()
        })
        .collect();
    let extent = centered
        .iter()
        .flatten()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max)
        .max(1e-12);
    let scale = (CELL / 2.0 - PAD) / extent;
    let width = CELL * (curves.len() + 1) as f64;
    let height = CELL + 30.0;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (k, pts) in centered.iter().enumerate() {
        let cx = CELL * (k as f64 + 0.5);
        let cy = CELL / 2.0;
        writeln!(svg, r#"<g class="curve" id="step-{k}">"#).unwrap();
        let line = polyline(
            pts.iter().map(|z| (cx + scale * z.re, cy - scale * z.im)),
            r#"fill="none" stroke="black" stroke-width="1.5""#,
        );
        writeln!(svg, "{line}\n</g>").unwrap();
    }

    let x0 = CELL * curves.len() as f64 + PAD;
    let side = CELL - 2.0 * PAD;
    let map = |t: f64, g: f64| (x0 + side * t, PAD + side * (1.0 - g));
    writeln!(svg, r#"<g class="warp">"#).unwrap();
    writeln!(
        svg,
        r#"<rect x="{x0}" y="{PAD}" width="{side}" height="{side}" fill="none" stroke="gray"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        "{}",
        polyline(
            [map(0.0, 0.0), map(1.0, 1.0)].into_iter(),
            r#"fill="none" stroke="red""#
        )
    )
    .unwrap();
    let warp = gamma.breakpoints().iter().zip(gamma.values()).map(|(&t, &g)| map(t, g));
    writeln!(
        svg,
        "{}\n</g>",
        polyline(warp, r#"fill="none" stroke="blue" stroke-width="1.5""#)
    )
    .unwrap();

    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        width / 2.0,
        CELL + 20.0,
        escape(caption)
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

fn bounds(v: &[Complex64]) -> (Complex64, Complex64) {
    v.iter().fold(
        (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), z| {
            (
                Complex64::new(lo.re.min(z.re), lo.im.min(z.im)),
                Complex64::new(hi.re.max(z.re), hi.im.max(z.im)),
            )
        },
    )
}
