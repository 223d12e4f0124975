//! SVG 1.1 rendering of an atlas: the two disks side by side. Output depends
//! only on the document, with every coordinate printed to three decimals.
//! The two disk boundaries are the only `<circle>` elements; dots are paths.

use std::fmt::Write;

use super::{AtlasDocument, CycleShape, DiskChart};
use crate::analyze::EquilibriumClass;

const MARGIN: f64 = 20.0;
const LABEL_BAND: f64 = 24.0;
const DOT_RADIUS: f64 = 4.0;
const ARROW_LENGTH: f64 = 9.0;
const ARROW_HALF_WIDTH: f64 = 3.5;
/// Polyline vertices closer than this (in pixels) to the last kept one are
/// dropped.
const MIN_PIXEL_STEP: f64 = 0.25;
const CYCLE_SAMPLES: usize = 720;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

struct Panel {
    cx: f64,
    cy: f64,
    scale: f64,
    radius: f64,
}

impl Panel {
    fn px(&self, p: [f64; 2]) -> [f64; 2] {
        [self.cx + p[0] * self.scale, self.cy - p[1] * self.scale]
    }

    fn polyline(&self, out: &mut String, points: &[[f64; 2]], style: &str) {
        let mut kept: Vec<[f64; 2]> = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let q = self.px(*p);
            let last = i + 1 == points.len();
            match kept.last() {
                Some(k) if !last && (q[0] - k[0]).hypot(q[1] - k[1]) < MIN_PIXEL_STEP => {}
                _ => kept.push(q),
            }
        }
        if kept.len() < 2 {
            return;
        }
        let pts: Vec<String> = kept.iter().map(|q| format!("{},{}", num(q[0]), num(q[1]))).collect();
        let _ = writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, pts.join(" "));
    }
}

fn class_color(class: Option<EquilibriumClass>) -> &'static str {
    match class {
        Some(EquilibriumClass::Saddle) => "#2a7d2a",
        Some(EquilibriumClass::Node { stable: true, .. } | EquilibriumClass::Focus { stable: true }) => "#1f4fbf",
        Some(EquilibriumClass::Node { stable: false, .. } | EquilibriumClass::Focus { stable: false }) => "#c0392b",
        Some(EquilibriumClass::CenterLinear) => "#7d3c98",
        Some(EquilibriumClass::Degenerate) | None => "#000000",
    }
}

/// Runs of consecutive points inside the disk.
fn clip_runs(points: &[[f64; 2]], radius: f64) -> Vec<Vec<[f64; 2]>> {
    let mut runs = vec![Vec::new()];
    for p in points {
        if p[0].hypot(p[1]) <= radius {
            runs.last_mut().expect("nonempty").push(*p);
        } else if !runs.last().expect("nonempty").is_empty() {
            runs.push(Vec::new());
        }
    }
    runs.retain(|r| r.len() > 1);
    runs
}

fn cycle_polylines(shape: &CycleShape, radius: f64) -> Vec<Vec<[f64; 2]>> {
    match *shape {
        CycleShape::Circle { center, radius: r } => {
            let pts: Vec<[f64; 2]> = (0..=CYCLE_SAMPLES)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / CYCLE_SAMPLES as f64;
                    [center[0] + r * a.cos(), center[1] + r * a.sin()]
                })
                .collect();
            clip_runs(&pts, radius)
        }
        CycleShape::Line { a, b, c } => {
            let n2 = a * a + b * b;
            let dist = c.abs() / n2.sqrt();
            if dist >= radius {
                return Vec::new();
            }
            let foot = [-c * a / n2, -c * b / n2];
            let half = (radius * radius - dist * dist).sqrt();
            let dir = [-b / n2.sqrt(), a / n2.sqrt()];
            vec![vec![
                [foot[0] - half * dir[0], foot[1] - half * dir[1]],
                [foot[0] + half * dir[0], foot[1] + half * dir[1]],
            ]]
        }
    }
}

fn render_disk(out: &mut String, disk: &DiskChart, panel: &Panel) {
    let _ = writeln!(out, r#"<g id="disk-{}">"#, disk.chart.name());
    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
        num(panel.cx),
        num(panel.cy),
        num(panel.radius * panel.scale)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="serif" font-size="16">{}</text>"#,
        num(panel.cx),
        num(MARGIN),
        disk.label()
    );
    for traj in &disk.trajectories {
        panel.polyline(out, &traj.points, r##"stroke="#333333" stroke-width="1""##);
    }
    for cycle in &disk.cycles {
        for run in cycle_polylines(&cycle.shape, disk.radius) {
            panel.polyline(out, &run, r##"stroke="#d35400" stroke-width="2" stroke-dasharray="6,3""##);
        }
    }
    for arrow in &disk.arrows {
        let p = panel.px(arrow.at);
        // screen y points down
        let d = [arrow.dir[0], -arrow.dir[1]];
        let n = [-d[1], d[0]];
        let tip = [p[0] + 0.5 * ARROW_LENGTH * d[0], p[1] + 0.5 * ARROW_LENGTH * d[1]];
        let base = [p[0] - 0.5 * ARROW_LENGTH * d[0], p[1] - 0.5 * ARROW_LENGTH * d[1]];
        let _ = writeln!(
            out,
            r##"<path d="M {} {} L {} {} L {} {} Z" fill="#333333"/>"##,
            num(tip[0]),
            num(tip[1]),
            num(base[0] + ARROW_HALF_WIDTH * n[0]),
            num(base[1] + ARROW_HALF_WIDTH * n[1]),
            num(base[0] - ARROW_HALF_WIDTH * n[0]),
            num(base[1] - ARROW_HALF_WIDTH * n[1]),
        );
    }
    for eq in &disk.equilibria {
        let p = panel.px(eq.point);
        let r = num(DOT_RADIUS);
        let title = eq.class.map_or_else(|| "regular point".to_string(), |c| c.name());
        let _ = writeln!(
            out,
            r#"<path d="M {} {} a {r} {r} 0 1 0 {} 0 a {r} {r} 0 1 0 {} 0 Z" fill="{}"><title>{title}</title></path>"#,
            num(p[0] - DOT_RADIUS),
            num(p[1]),
            num(2.0 * DOT_RADIUS),
            num(-2.0 * DOT_RADIUS),
            class_color(eq.class),
        );
    }
    out.push_str("</g>\n");
}

pub fn render_svg(doc: &AtlasDocument) -> String {
    let size = f64::from(doc.size.max(1));
    let width = 2.0 * size + 3.0 * MARGIN;
    let height = size + 2.0 * MARGIN + LABEL_BAND;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, num(width), num(height));
    for (i, disk) in doc.disks.iter().enumerate() {
        let panel = Panel {
            cx: MARGIN + 0.5 * size + i as f64 * (size + MARGIN),
            cy: LABEL_BAND + MARGIN + 0.5 * size,
            scale: 0.5 * size / disk.radius,
            radius: disk.radius,
        };
        render_disk(&mut out, disk, &panel);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_fixed_precision() {
        assert_eq!(num(1.0), "1.000");
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(2.34567), "2.346");
    }

    #[test]
    fn clipping() {
        let runs = cycle_polylines(&CycleShape::Circle { center: [3.0, 0.0], radius: 2.0 }, 4.0);
        assert!(!runs.is_empty());
        for run in &runs {
            assert!(run.iter().all(|p| p[0].hypot(p[1]) <= 4.0));
        }
        let seg = cycle_polylines(&CycleShape::Line { a: 1.0, b: 0.0, c: -1.0 }, 2.0);
        let s = &seg[0];
        assert!((s[0][0] - 1.0).abs() < 1e-12 && (s[1][1].abs() - 3f64.sqrt()).abs() < 1e-12);
        assert!(cycle_polylines(&CycleShape::Line { a: 1.0, b: 0.0, c: -5.0 }, 2.0).is_empty());
    }
}
