//! SVG scatter plots of spiral point sets, optionally overlaid with annulus rings.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spiral::Planar;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Only points with `|z| <= view_radius` are drawn and the frame is sized
    /// to this radius. `None` draws everything and uses the largest point
    /// radius.
    pub view_radius: Option<f64>,
    /// Dot radius in user units.
    pub point_radius: f64,
    /// Draw rings at radii `1, 1 + h, 1 + 2h, …` out to the view radius.
    pub annulus_width: Option<f64>,
    /// Output width and height in pixels.
    pub pixel_size: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            view_radius: None,
            point_radius: 0.3,
            annulus_width: None,
            pixel_size: 800,
        }
    }
}

/// Fixed 4-decimal coordinate with the sign of zero dropped.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.0000".to_string()
    } else {
        s
    }
}

/// Radii `1 + k·h` for `k = 0, …, ceil((v − 1)/h)`.
pub fn ring_radii(view_radius: f64, h: f64) -> Vec<f64> {
    let steps = ((view_radius - 1.0) / h).ceil().max(0.0) as u64;
    (0..=steps).map(|k| 1.0 + k as f64 * h).collect()
}

/// One `<circle>` per drawn point, in input order; y grows upwards.
pub fn render_spiral<P: Planar>(points: &[P], options: &RenderOptions) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(options.point_radius > 0.0) {
        return Err(Error::InvalidArgument("point radius must be positive".into()));
    }
    if let Some(h) = options.annulus_width {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("annulus width must be positive, got {h}")));
        }
    }
    let drawn: Vec<&P> = match options.view_radius {
        Some(v) if v.is_finite() && v >= 0.0 => points.iter().filter(|p| p.within(v)).collect(),
        Some(v) => return Err(Error::InvalidArgument(format!("view radius must be >= 0, got {v}"))),
        None => points.iter().collect(),
    };
    let data_extent = drawn.iter().map(|p| p.radius()).fold(0.0, f64::max);
    let extent = options.view_radius.unwrap_or(data_extent).max(1.0);
    let half = extent * 1.05;

    let mut svg = String::new();
    let size = options.pixel_size;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="{} {} {} {}">"#,
        num(-half),
        num(-half),
        num(2.0 * half),
        num(2.0 * half)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        num(-half),
        num(-half),
        num(2.0 * half),
        num(2.0 * half)
    );
    if let Some(h) = options.annulus_width {
        let stroke = (extent / 400.0).max(0.02);
        let _ = writeln!(svg, r##"<g class="annuli" fill="none" stroke="#d04040" stroke-width="{}">"##, num(stroke));
        for r in ring_radii(extent, h) {
            let _ = writeln!(svg, r#"<circle class="annulus" cx="0" cy="0" r="{}"/>"#, num(r));
        }
        svg.push_str("</g>\n");
    }
    let _ = writeln!(svg, r##"<g class="points" fill="#202060">"##);
    let pr = num(options.point_radius);
    for p in &drawn {
        let [x, y] = p.xy();
        let _ = writeln!(svg, r#"<circle cx="{}" cy="{}" r="{pr}"/>"#, num(x), num(-y));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// Number of point circles (ring circles excluded) in a document from [`render_spiral`].
pub fn count_point_circles(svg: &str) -> usize {
    svg.lines().filter(|l| l.starts_with("<circle cx=")).count()
}

/// Number of annulus rings in a document from [`render_spiral`].
pub fn count_rings(svg: &str) -> usize {
    svg.lines().filter(|l| l.starts_with(r#"<circle class="annulus""#)).count()
}
