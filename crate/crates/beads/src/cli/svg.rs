//! Particle picture with the limit-shape boundary overlaid. Lines sit one
//! unit apart horizontally; positions use the unit interval vertically with
//! 1 at the top.

use std::fmt::Write;

use super::format::g17;
use crate::model::{BeadConfiguration, HexagonSpec};
use crate::scaling::support_interval;

pub const BOUNDARY_POINTS: usize = 256;

/// Scale from model units to SVG user units.
const UNIT: f64 = 40.0;

pub fn render(spec: &HexagonSpec, configs: &[BeadConfiguration]) -> String {
    let width = (spec.p() + spec.q()) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} 1" preserveAspectRatio="none">"#,
        g17(width * UNIT),
        g17(UNIT * 8.0),
        g17(width)
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{}" height="1" fill="white"/>"#, g17(width));
    let _ = writeln!(s, r##"<g stroke="#bbbbbb" stroke-width="0.01">"##);
    for t in 1..=spec.lines() {
        let _ = writeln!(s, r#"<line x1="{t}" y1="0" x2="{t}" y2="1"/>"#);
    }
    s.push_str("</g>\n");
    for (name, pts) in boundary(spec) {
        let _ = writeln!(
            s,
            r##"<polyline class="{name}" fill="none" stroke="#d62728" stroke-width="0.03" points="{}"/>"##,
            pts.iter().map(|(x, y)| format!("{},{}", g17(*x), g17(1.0 - y))).collect::<Vec<_>>().join(" ")
        );
    }
    let r = 0.06f64.min(0.3 / spec.p() as f64);
    let _ = writeln!(s, r##"<g fill="#1f77b4">"##);
    for c in configs {
        for (i, line) in c.lines().iter().enumerate() {
            for &x in line {
                let _ = writeln!(
                    s,
                    r#"<ellipse cx="{}" cy="{}" rx="{}" ry="{}"/>"#,
                    i + 1,
                    g17(1.0 - x),
                    g17(r),
                    g17(r / 8.0)
                );
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Lower and upper support curves `t = pS ↦ (c_S, d_S)` at
/// [`BOUNDARY_POINTS`] values of `S`.
pub fn boundary(spec: &HexagonSpec) -> [(&'static str, Vec<(f64, f64)>); 2] {
    let p = spec.p() as f64;
    let k = (spec.q() as f64 - p) / p;
    let mut lower = Vec::with_capacity(BOUNDARY_POINTS);
    let mut upper = Vec::with_capacity(BOUNDARY_POINTS);
    for i in 0..BOUNDARY_POINTS {
        let sv = (2.0 + k) * i as f64 / (BOUNDARY_POINTS - 1) as f64;
        let (c, d) = support_interval(k, sv.min(2.0 + k)).expect("S in range");
        lower.push((p * sv, c));
        upper.push((p * sv, d));
    }
    [("lower", lower), ("upper", upper)]
}
