//! Symmetric Hausdorff distance between polylines, with a uniform grid of
//! segments so each point query only looks at nearby cells.

use std::collections::HashMap;

fn point_segment_distance(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

struct SegmentGrid<'a> {
    line: &'a [[f64; 2]],
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    extent: i64,
}

impl<'a> SegmentGrid<'a> {
    fn new(line: &'a [[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in line {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let mut lens: Vec<f64> = line
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .collect();
        lens.sort_by(f64::total_cmp);
        let median = lens.get(lens.len() / 2).copied().unwrap_or(span);
        let cell = median.max(span / 512.0).max(1e-12);
        let key = |p: &[f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let segments = line.len().saturating_sub(1).max(usize::from(!line.is_empty()));
        for i in 0..segments {
            let a = &line[i];
            let b = &line[(i + 1).min(line.len() - 1)];
            let (ka, kb) = (key(a), key(b));
            for cx in ka.0.min(kb.0)..=ka.0.max(kb.0) {
                for cy in ka.1.min(kb.1)..=ka.1.max(kb.1) {
                    cells.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        let extent = (span / cell).ceil() as i64 + 2;
        Self {
            line,
            cell,
            cells,
            extent,
        }
    }

    fn segment_distance(&self, p: &[f64; 2], i: usize) -> f64 {
        let b = (i + 1).min(self.line.len() - 1);
        point_segment_distance(p, &self.line[i], &self.line[b])
    }

    /// Distance from `p` to the polyline, searching square rings of cells
    /// outward until no closer segment can exist.
    fn distance(&self, p: &[f64; 2]) -> f64 {
        let c = ((p[0] / self.cell).floor() as i64, (p[1] / self.cell).floor() as i64);
        let mut best = f64::INFINITY;
        let max_ring = self.extent + (p[0].abs().max(p[1].abs()) / self.cell) as i64 + 2;
        for ring in 0..=max_ring {
            if ring > 64 {
                // far from the polyline: a linear scan is cheaper than more rings
                return (0..self.line.len().saturating_sub(1).max(1))
                    .map(|i| self.segment_distance(p, i))
                    .fold(best, f64::min);
            }
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(segs) = self.cells.get(&(c.0 + dx, c.1 + dy)) {
                        for &i in segs {
                            best = best.min(self.segment_distance(p, i));
                        }
                    }
                }
            }
            // everything in rings beyond this one is at least `ring * cell` away
            if best <= ring as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// Polyline through the cubic Hermite curve of the samples, refined until
/// every chord is within `tol` of the curve at its midpoint.
pub fn densify(times: &[f64], points: &[[f64; 2]], velocities: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(points.len());
    if let Some(first) = points.first() {
        out.push(*first);
    }
    for i in 1..points.len() {
        let h = times[i] - times[i - 1];
        let seg = |th: f64| {
            let (t2, t3) = (th * th, th * th * th);
            let (h00, h10, h01, h11) = (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + th, -2.0 * t3 + 3.0 * t2, t3 - t2);
            let (a, b, va, vb) = (points[i - 1], points[i], velocities[i - 1], velocities[i]);
            [
                h00 * a[0] + h10 * h * va[0] + h01 * b[0] + h11 * h * vb[0],
                h00 * a[1] + h10 * h * va[1] + h01 * b[1] + h11 * h * vb[1],
            ]
        };
        refine(&seg, 0.0, 1.0, seg(0.0), seg(1.0), tol, 0, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn refine(
    seg: &impl Fn(f64) -> [f64; 2],
    lo: f64,
    hi: f64,
    a: [f64; 2],
    b: [f64; 2],
    tol: f64,
    depth: u32,
    out: &mut Vec<[f64; 2]>,
) {
    let mid = 0.5 * (lo + hi);
    let m = seg(mid);
    let chord_mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    if depth < 16 && (m[0] - chord_mid[0]).hypot(m[1] - chord_mid[1]) > tol {
        refine(seg, lo, mid, a, m, tol, depth + 1, out);
        refine(seg, mid, hi, m, b, tol, depth + 1, out);
    } else {
        out.push(b);
    }
}

fn directed(from: &[[f64; 2]], to: &SegmentGrid) -> f64 {
    from.iter().map(|p| to.distance(p)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines; `inf` if either is
/// empty.
pub fn hausdorff_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let (ga, gb) = (SegmentGrid::new(a), SegmentGrid::new(b));
    directed(a, &gb).max(directed(b, &ga))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
        let d = |p: &[f64; 2], line: &[[f64; 2]]| {
            if line.len() == 1 {
                return (p[0] - line[0][0]).hypot(p[1] - line[0][1]);
            }
            line.windows(2)
                .map(|w| point_segment_distance(p, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min)
        };
        let ab = a.iter().map(|p| d(p, b)).fold(0.0, f64::max);
        let ba = b.iter().map(|p| d(p, a)).fold(0.0, f64::max);
        ab.max(ba)
    }

    #[test]
    fn matches_brute_force() {
        let circle = |r: f64, n: usize, phase: f64| -> Vec<[f64; 2]> {
            (0..=n)
                .map(|i| {
                    let t = phase + i as f64 / n as f64 * std::f64::consts::TAU;
                    [r * t.cos(), r * t.sin()]
                })
                .collect()
        };
        let a = circle(1.0, 200, 0.0);
        let b = circle(1.01, 77, 0.3);
        assert!((hausdorff_distance(&a, &b) - brute(&a, &b)).abs() < 1e-12);
        let far = vec![[10.0, 10.0]];
        assert!((hausdorff_distance(&a, &far) - brute(&a, &far)).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
    }
}
