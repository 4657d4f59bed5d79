//! SVG figures in the Poincaré disk.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::hypgeom::{coincident, to_disk, Geodesic, Point};

/// Arcs flatter than this are drawn as straight segments.
pub const CURVATURE_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
struct Stroke {
    from: Complex64,
    to: Complex64,
    class: &'static str,
}

/// A figure: geodesic strokes, labelled vertices, annotation lines and an
/// optional warning layer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Figure {
    title: String,
    strokes: Vec<Stroke>,
    vertices: Vec<Complex64>,
    annotations: Vec<String>,
    warnings: Vec<String>,
}

impl Figure {
    pub fn new(title: impl Into<String>) -> Figure {
        Figure { title: title.into(), ..Figure::default() }
    }

    /// A closed geodesic polygon with vertices labelled `p0, p1, ...`.
    /// Coincident consecutive vertices add a warning.
    pub fn polygon(title: impl Into<String>, vertices: &[Point]) -> Figure {
        let mut f = Figure::new(title);
        let n = vertices.len();
        for k in 0..n {
            let (p, q) = (vertices[k], vertices[(k + 1) % n]);
            if n > 1 && coincident(p, q) {
                f.warn(format!("degenerate polygon: p{k} and p{} coincide", (k + 1) % n));
            } else if n > 1 {
                f.strokes.push(Stroke { from: to_disk(p), to: to_disk(q), class: "side" });
            }
        }
        if n < 3 {
            f.warn(format!("degenerate polygon: {n} vertices"));
        }
        f.vertices = vertices.iter().map(|p| to_disk(*p)).collect();
        f
    }

    pub fn geodesic(&mut self, g: &Geodesic) {
        let from = to_disk(Point::Ideal(g.start));
        let to = to_disk(Point::Ideal(g.end));
        self.strokes.push(Stroke { from, to, class: "axis" });
    }

    pub fn annotate(&mut self, line: impl Into<String>) {
        self.annotations.push(line.into());
    }

    pub fn warn(&mut self, line: impl Into<String>) {
        self.warnings.push(line.into());
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        s.push_str(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" \
             viewBox=\"-1.05 -1.05 2.1 2.1\">\n",
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.004\"/>\n");
        s.push_str("<g id=\"geodesics\" fill=\"none\" stroke-width=\"0.006\">\n");
        for st in &self.strokes {
            let colour = if st.class == "axis" { "#b03030" } else { "#1f4e9e" };
            let _ =
                writeln!(s, "<path class=\"{}\" stroke=\"{colour}\" d=\"{}\"/>", st.class, arc_path(st.from, st.to));
        }
        s.push_str("</g>\n<g id=\"vertices\" font-family=\"sans-serif\" font-size=\"0.05\">\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let (x, y) = (v.re, -v.im);
            let _ = writeln!(s, "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"0.012\" fill=\"black\"/>");
            let _ = writeln!(s, "<text x=\"{:.6}\" y=\"{:.6}\">p{k}</text>", x + 0.02, y - 0.02);
        }
        s.push_str("</g>\n<g id=\"annotations\" font-family=\"sans-serif\" font-size=\"0.045\">\n");
        for (k, a) in self.annotations.iter().enumerate() {
            let _ = writeln!(s, "<text x=\"-1.03\" y=\"{:.6}\">{}</text>", -0.98 + 0.05 * k as f64, escape(a));
        }
        s.push_str("</g>\n");
        if !self.warnings.is_empty() {
            s.push_str("<g id=\"warnings\" font-family=\"sans-serif\" font-size=\"0.045\" fill=\"#c00000\">\n");
            for (k, w) in self.warnings.iter().enumerate() {
                let _ = writeln!(s, "<text x=\"-1.03\" y=\"{:.6}\">{}</text>", 1.02 - 0.05 * k as f64, escape(w));
            }
            s.push_str("</g>\n");
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The centre of the circle through `u` and `v` orthogonal to the unit
/// circle, or `None` when the geodesic is (nearly) a diameter.
fn orthogonal_centre(u: Complex64, v: Complex64) -> Option<(Complex64, f64)> {
    // 2 Re(c conj(w)) = 1 + |w|² for w = u, v
    let det = 2.0 * (u.re * v.im - u.im * v.re);
    if det.abs() < 1e-15 {
        return None;
    }
    let (ru, rv) = (1.0 + u.norm_sqr(), 1.0 + v.norm_sqr());
    let c = Complex64::new((ru * v.im - rv * u.im) / det, (u.re * rv - v.re * ru) / det);
    let r = (c.norm_sqr() - 1.0).max(0.0).sqrt();
    if !r.is_finite() || r == 0.0 || 1.0 / r < CURVATURE_CUTOFF {
        return None;
    }
    Some((c, r))
}

fn arc_path(u: Complex64, v: Complex64) -> String {
    let (ux, uy, vx, vy) = (u.re, -u.im, v.re, -v.im);
    match orthogonal_centre(u, v) {
        None => format!("M {ux:.6} {uy:.6} L {vx:.6} {vy:.6}"),
        Some((c, r)) => {
            let (cx, cy) = (c.re, -c.im);
            let cross = (ux - cx) * (vy - cy) - (uy - cy) * (vx - cx);
            let sweep = u8::from(cross > 0.0);
            format!("M {ux:.6} {uy:.6} A {r:.6} {r:.6} 0 0 {sweep} {vx:.6} {vy:.6}")
        }
    }
}
