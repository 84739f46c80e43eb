//! SVG 1.1 pictures of laminations and mixed tags.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::lamination::Lamination;
use crate::polygon::Polygon;
use crate::tags::MixedTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GeodesicStyle {
    Straight,
    /// Arcs of circles orthogonal to the unit circle.
    #[default]
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// Side of one disk's square, in pixels.
    pub size: u32,
    pub style: GeodesicStyle,
    pub stroke: String,
    pub stroke_width: f64,
    pub fill_opacity: f64,
    pub labels: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            size: 600,
            style: GeodesicStyle::Hyperbolic,
            stroke: "#1f3b73".into(),
            stroke_width: 1.0,
            fill_opacity: 0.45,
            labels: false,
        }
    }
}

/// Maps the unit disk into a `size x size` square offset by `dx`.
#[derive(Clone, Copy)]
struct Frame {
    cx: f64,
    cy: f64,
    r: f64,
}

impl Frame {
    fn new(size: u32, dx: f64) -> Frame {
        let s = size as f64;
        Frame {
            cx: dx + s / 2.0,
            cy: s / 2.0,
            r: s / 2.0 - 4.0,
        }
    }

    fn pt(&self, t: &Angle) -> (f64, f64) {
        let x = t.to_f64() * TAU;
        (self.cx + self.r * x.cos(), self.cy - self.r * x.sin())
    }

    fn circle(&self, out: &mut String, stroke: &str) {
        writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{stroke}" stroke-width="1"/>"#,
            self.cx, self.cy, self.r
        )
        .unwrap();
    }

    /// Path commands from the current point at `from` to `to`.
    fn edge(&self, from: &Angle, to: &Angle, style: GeodesicStyle) -> String {
        let (x, y) = self.pt(to);
        let gap = from.ccw_to(to).to_f64();
        let half = gap.min(1.0 - gap) * TAU / 2.0;
        if style == GeodesicStyle::Straight || (FRAC_PI_2 - half).abs() < 1e-9 {
            return format!("L {x:.3} {y:.3}");
        }
        let radius = self.r * half.tan();
        // screen y points down: the inward arc of a short counter-clockwise
        // step is drawn clockwise on screen
        let sweep = if gap <= 0.5 { 1 } else { 0 };
        format!("A {radius:.3} {radius:.3} 0 0 {sweep} {x:.3} {y:.3}")
    }

    fn chord_path(&self, c: &Chord, style: GeodesicStyle) -> String {
        let (x, y) = self.pt(c.a());
        format!("M {x:.3} {y:.3} {}", self.edge(c.a(), c.b(), style))
    }

    fn polygon_path(&self, p: &Polygon, style: GeodesicStyle) -> String {
        let v = p.vertices();
        let (x, y) = self.pt(&v[0]);
        let mut d = format!("M {x:.3} {y:.3}");
        for i in 0..v.len() {
            d.push(' ');
            d.push_str(&self.edge(&v[i], &v[(i + 1) % v.len()], style));
        }
        d.push_str(" Z");
        d
    }
}

fn header(out: &mut String, w: u32, h: u32) {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
}

/// The unit circle plus one `<path>` per leaf, leaves in generation order.
pub fn render_lamination_svg(l: &Lamination, spec: &RenderSpec) -> String {
    let mut out = String::new();
    header(&mut out, spec.size, spec.size);
    let f = Frame::new(spec.size, 0.0);
    f.circle(&mut out, &spec.stroke);
    for (c, _) in l.sorted_leaves() {
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            f.chord_path(c, spec.style),
            spec.stroke,
            spec.stroke_width
        )
        .unwrap();
    }
    if spec.labels {
        for (c, _) in l.sorted_leaves() {
            for t in c.endpoints() {
                let (x, y) = f.pt(t);
                writeln!(
                    out,
                    r#"<text x="{x:.3}" y="{y:.3}" font-size="9">{t}</text>"#
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// FNV-1a of the left polygon's text, as an HSL hue.
pub fn tag_color(tag: &MixedTag) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in tag.left.to_string().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("hsl({},70%,45%)", h % 360)
}

fn piece(out: &mut String, f: &Frame, p: &Polygon, color: &str, spec: &RenderSpec) {
    match p.len() {
        0 => {}
        1 => {
            let (x, y) = f.pt(&p.vertices()[0]);
            writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{color}"/>"#
            )
            .unwrap();
        }
        2 => {
            let c = p.as_chord().expect("two vertices");
            writeln!(
                out,
                r#"<path d="{}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
                f.chord_path(&c, spec.style),
                spec.stroke_width * 2.0
            )
            .unwrap();
        }
        _ => {
            writeln!(
                out,
                r#"<path d="{}" fill="{color}" fill-opacity="{}" stroke="{color}" stroke-width="{}"/>"#,
                f.polygon_path(p, spec.style),
                spec.fill_opacity,
                spec.stroke_width
            )
            .unwrap();
        }
    }
}

/// Two disks side by side: `co(C¹)` on the left, `σ₃(C²)` on the right,
/// each tag in its own color.
pub fn render_tag_svg(tags: &[MixedTag], spec: &RenderSpec) -> String {
    let mut out = String::new();
    header(&mut out, spec.size * 2, spec.size);
    let left = Frame::new(spec.size, 0.0);
    let right = Frame::new(spec.size, spec.size as f64);
    left.circle(&mut out, &spec.stroke);
    right.circle(&mut out, &spec.stroke);
    for t in tags {
        let color = tag_color(t);
        writeln!(out, "<g>").unwrap();
        piece(&mut out, &left, &t.left, &color, spec);
        piece(&mut out, &right, &t.right, &color, spec);
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}
