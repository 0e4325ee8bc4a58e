//! SVG scatter of communities: NA on the x axis, SC on the y axis, disk
//! radius growing with the logarithm of the community size `z`.

use std::fmt::Write;

use diachron_core::CommunityReport;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;
const PLOT: f64 = SIZE - 2.0 * MARGIN;
const R_MIN: f64 = 2.0;
const R_SCALE: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    pub community: usize,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl ProfilePoint {
    pub fn from_report(r: &CommunityReport) -> Self {
        Self {
            community: r.community,
            x: r.na,
            y: r.sc,
            radius: radius(r.z),
        }
    }

    /// Pixel coordinates of the disk center.
    pub fn center(&self) -> (f64, f64) {
        (
            MARGIN + self.x.clamp(0.0, 1.0) * PLOT,
            MARGIN + (1.0 - self.y.clamp(0.0, 1.0)) * PLOT,
        )
    }
}

pub fn radius(z: usize) -> f64 {
    R_MIN + R_SCALE * (1.0 + z as f64).ln()
}

pub fn render(reports: &[CommunityReport]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    axes(&mut svg);
    let _ = writeln!(svg, r#"<g id="communities" fill="steelblue" fill-opacity="0.45" stroke="navy" stroke-width="0.8">"#);
    for r in reports {
        let p = ProfilePoint::from_report(r);
        let (cx, cy) = p.center();
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}"><title>community {} (z={}, NA={:.3}, SC={:.3})</title></circle>"#,
            p.radius, r.community, r.z, r.na, r.sc
        );
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

fn axes(svg: &mut String) {
    let (x0, y0, end) = (MARGIN, MARGIN + PLOT, MARGIN + PLOT);
    let _ = writeln!(svg, r#"<g id="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{end}" y2="{y0}"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}"/>"#);
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let x = MARGIN + v * PLOT;
        let y = MARGIN + (1.0 - v) * PLOT;
        let _ = writeln!(svg, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}"/>"#, y0 + 5.0);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}"/>"#, x0 - 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle" stroke="none">{v:.1}</text>"#,
            y0 + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" stroke="none">{v:.1}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" stroke="none">NA</text>"#,
        MARGIN + PLOT / 2.0,
        SIZE - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" stroke="none" transform="rotate(-90 16 {})">SC</text>"#,
        MARGIN + PLOT / 2.0,
        MARGIN + PLOT / 2.0
    );
    svg.push_str("</g>\n");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(na: f64, sc: f64, z: usize) -> CommunityReport {
        CommunityReport {
            community: 0,
            z,
            temporal_size: 10,
            na,
            sc,
            hi: 1.0,
            internal_links: 9,
            hi_degenerate: false,
        }
    }

    #[test]
    fn radius_grows_with_z() {
        assert!((radius(0) - R_MIN).abs() < 1e-12);
        assert!((1..50).all(|z| radius(z) > radius(z - 1)));
    }

    #[test]
    fn recurrent_self_citing_community_sits_top_right() {
        let p = ProfilePoint::from_report(&report(0.9, 1.0, 1));
        let (cx, cy) = p.center();
        assert!(cx > MARGIN + 0.8 * PLOT);
        assert!((cy - MARGIN).abs() < 1e-9);
        let svg = render(&[report(0.9, 1.0, 1)]);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn empty_input_draws_axes_only() {
        let svg = render(&[]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"<g id="axes""#));
        assert_eq!(svg.matches("<circle").count(), 0);
    }
}
