//! SVG drawing of one configuration: bodies as dots, certified symmetry
//! lines in red.

use std::fmt::Write;

use planar_cc::classify::SymmetryFindings;
use planar_cc::BodyBox;

const SIZE: f64 = 400.0;

pub fn render_svg(bodies: &[BodyBox], findings: &SymmetryFindings) -> String {
    let pts: Vec<(f64, f64)> = bodies.iter().map(|b| b.mid()).collect();
    let extent = pts
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.2;
    let scale = SIZE / (2.0 * extent);
    let map = |x: f64, y: f64| (SIZE / 2.0 + x * scale, SIZE / 2.0 - y * scale);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut line = |dx: f64, dy: f64| {
        let (x1, y1) = map(-dx * extent * 2.0, -dy * extent * 2.0);
        let (x2, y2) = map(dx * extent * 2.0, dy * extent * 2.0);
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="red" stroke-width="1"/>"#
        );
    };
    if findings.ox.is_some() {
        line(1.0, 0.0);
    }
    if let Some(l) = &findings.line {
        line(l.direction.0.mid(), l.direction.1.mid());
    }
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = map(x, y);
        let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="4" fill="black"><title>{i}</title></circle>"#);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dots_and_lines() {
        let bodies = [BodyBox::point(-1.0, 0.0), BodyBox::point(1.0, 0.0), BodyBox::point(0.0, 0.0)];
        let f = SymmetryFindings {
            ox: Some(vec![0, 1, 2]),
            line: None,
            asymmetric: false,
        };
        let s = render_svg(&bodies, &f);
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s.matches("stroke=\"red\"").count(), 1);
        assert!(s.starts_with("<svg"));
    }
}
