//! Minimal deterministic SVG writer on a fixed 800x800 canvas.

use std::fmt::Write;

use nrange_core::{Region, C64};

pub const SIZE: f64 = 800.0;
const MID: f64 = SIZE / 2.0;
const ELLIPSE_POINTS: usize = 720;

#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub stroke: &'static str,
    pub fill: &'static str,
    pub fill_opacity: f64,
    pub dashed: bool,
}

impl Style {
    pub const fn outline(stroke: &'static str) -> Self {
        Style { stroke, fill: "none", fill_opacity: 0.0, dashed: false }
    }

    pub const fn filled(stroke: &'static str, fill: &'static str, fill_opacity: f64) -> Self {
        Style { stroke, fill, fill_opacity, dashed: false }
    }

    pub const fn dashed(stroke: &'static str) -> Self {
        Style { stroke, fill: "none", fill_opacity: 0.0, dashed: true }
    }

    fn attrs(&self) -> String {
        let mut s = format!(r#"stroke="{}" stroke-width="1.5" fill="{}""#, self.stroke, self.fill);
        if self.fill != "none" {
            let _ = write!(s, r#" fill-opacity="{:.2}""#, self.fill_opacity);
        }
        if self.dashed {
            s.push_str(r#" stroke-dasharray="8 5""#);
        }
        s
    }
}

/// Plot of the complex plane with both axes spanning `±1.1·extent`.
pub struct Svg {
    half: f64,
    body: String,
}

impl Svg {
    pub fn new(extent: f64) -> Self {
        let extent = if extent.is_finite() && extent > 0.0 { extent } else { 1.0 };
        let mut svg = Svg { half: 1.1 * extent, body: String::new() };
        svg.axes(extent);
        svg
    }

    fn px(&self, z: C64) -> (f64, f64) {
        (MID + z.re * MID / self.half, MID - z.im * MID / self.half)
    }

    fn len(&self, r: f64) -> f64 {
        r * MID / self.half
    }

    fn axes(&mut self, extent: f64) {
        let _ = writeln!(self.body, r##"<line x1="0" y1="400" x2="800" y2="400" stroke="#888" stroke-width="1"/>"##);
        let _ = writeln!(self.body, r##"<line x1="400" y1="0" x2="400" y2="800" stroke="#888" stroke-width="1"/>"##);
        for s in [-1.0, 1.0] {
            let (x, _) = self.px(C64::new(s * extent, 0.0));
            let (_, y) = self.px(C64::new(0.0, s * extent));
            let _ = writeln!(
                self.body,
                r##"<line x1="{x:.3}" y1="395" x2="{x:.3}" y2="405" stroke="#888" stroke-width="1"/>"##
            );
            let _ = writeln!(
                self.body,
                r##"<line x1="395" y1="{y:.3}" x2="405" y2="{y:.3}" stroke="#888" stroke-width="1"/>"##
            );
            self.text(x, 420.0, &format!("{:.4}", s * extent), "middle");
            self.text(410.0, y + 4.0, &format!("{:.4}", s * extent), "start");
        }
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, anchor: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="monospace" font-size="13" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    }

    /// Annotation lines stacked in the top-left corner.
    pub fn notes(&mut self, lines: &[String]) {
        for (i, l) in lines.iter().enumerate() {
            self.text(12.0, 22.0 + 18.0 * i as f64, l, "start");
        }
    }

    pub fn polygon(&mut self, pts: &[C64], style: Style) {
        let mut p = String::new();
        for (i, z) in pts.iter().enumerate() {
            let (x, y) = self.px(*z);
            let _ = write!(p, "{}{x:.3},{y:.3}", if i == 0 { "" } else { " " });
        }
        let _ = writeln!(self.body, r#"<polygon points="{p}" {}/>"#, style.attrs());
    }

    pub fn circle(&mut self, center: C64, r: f64, style: Style) {
        let (x, y) = self.px(center);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" {}/>"#, self.len(r), style.attrs());
    }

    pub fn segment(&mut self, a: C64, b: C64, style: Style) {
        let (x1, y1) = self.px(a);
        let (x2, y2) = self.px(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {}/>"#,
            style.attrs()
        );
    }

    pub fn marker(&mut self, z: C64, color: &'static str, label: &str) {
        let (x, y) = self.px(z);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{color}" stroke="none"/>"#);
        if !label.is_empty() {
            self.text(x + 8.0, y - 8.0, label, "start");
        }
    }

    /// Ring marker used to highlight corners.
    pub fn halo(&mut self, z: C64, color: &'static str) {
        let (x, y) = self.px(z);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="9" fill="none" stroke="{color}" stroke-width="2"/>"#
        );
    }

    pub fn region(&mut self, r: &Region, style: Style) {
        match r {
            Region::Empty => {}
            Region::Point { z } => self.marker(*z, style.stroke, ""),
            Region::Segment { a, b } => self.segment(*a, *b, style),
            Region::Disc { center, radius } => self.circle(*center, *radius, style),
            Region::Circle { center, radius } => self.circle(*center, *radius, Style { fill: "none", ..style }),
            Region::Annulus { center, inner, outer } => {
                let (x, y) = self.px(*center);
                let (ro, ri) = (self.len(*outer), self.len(*inner));
                let d = format!(
                    "M {:.3} {y:.3} a {ro:.3} {ro:.3} 0 1 0 {:.3} 0 a {ro:.3} {ro:.3} 0 1 0 {:.3} 0 Z \
                     M {:.3} {y:.3} a {ri:.3} {ri:.3} 0 1 0 {:.3} 0 a {ri:.3} {ri:.3} 0 1 0 {:.3} 0 Z",
                    x - ro,
                    2.0 * ro,
                    -2.0 * ro,
                    x - ri,
                    2.0 * ri,
                    -2.0 * ri
                );
                let _ = writeln!(self.body, r#"<path d="{d}" fill-rule="evenodd" {}/>"#, style.attrs());
            }
            Region::Ellipse { .. } => {
                if let Some(c) = r.hull_curve(ELLIPSE_POINTS) {
                    self.polygon(&c.points, style);
                }
            }
            Region::ConvexBoundary(c) => self.polygon(&c.points, style),
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n\
             <rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
