//! The two-disk atlas of trajectories: the system drawn in the disk `K(x,y)`
//! of the north chart and its conjugate in the disk `K(u,v)` of the south
//! chart, radii chosen so that the two caps cover the sphere. Both disks
//! get the same integration budget in the original system's time.

mod svg;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analyze::{infinite_point_status, point_status, EquilibriumClass};
use crate::charts::{map_curve, stereo_project, transition, ChartTag, CurveDescriptor, CurveImage, SpherePoint};
use crate::conjugate::{conjugate, ConjugateError, ConjugationResult, DiffSystem};
use crate::dynamics::{integrate_conjugate_on, integrate_on, Direction, DynamicsError, IntegratorConfig, Trajectory};
use crate::poly::{fmt_rational, int, rat, Rational};
pub use svg::render_svg;

pub const SCHEMA_VERSION: u32 = 1;

/// Samples may overshoot the disk boundary by this relative amount, the
/// accuracy with which boundary exits are located.
pub const CLIP_TOLERANCE: f64 = 1e-9;

/// Relative offset of the seeds placed on either side of a cycle marker.
const CYCLE_SEED_OFFSET: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("epsilon {0} must lie in (0, 1]")]
    OutOfRange(String),
    #[error("disk radii {0} and {1} do not cover the sphere (product below 4)")]
    Coverage(f64, f64),
    #[error("invalid atlas configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Conjugate(#[from] ConjugateError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// `4(2 - eps)/eps`, the squared radius of the chart disk whose image is the
/// cap cut off by the plane `z* = 1 - eps`.
pub fn disk_radius_sq(eps: &Rational) -> Result<Rational, AtlasError> {
    if !eps.is_positive() || *eps > int(1) {
        return Err(AtlasError::OutOfRange(fmt_rational(eps)));
    }
    Ok(int(4) * (int(2) - eps) / eps)
}

pub fn disk_radius(eps: &Rational) -> Result<f64, AtlasError> {
    Ok(disk_radius_sq(eps)?.to_f64().unwrap_or(f64::NAN).sqrt())
}

/// Transition image of the boundary of the disk of squared radius `r2`:
/// the concentric circle of squared radius `16/r2`.
pub fn boundary_image(r2: &Rational) -> Result<CurveImage, AtlasError> {
    let boundary = CurveDescriptor::circle((Rational::zero(), Rational::zero()), r2.clone())
        .map_err(|e| AtlasError::InvalidConfig(e.to_string()))?;
    map_curve(&boundary).map_err(|e| AtlasError::InvalidConfig(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedGrid {
    pub rays: usize,
    pub radii: usize,
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self { rays: 8, radii: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    pub chart: ChartTag,
    pub point: [f64; 2],
}

/// Known features to annotate. Equilibria and cycles are drawn in the chart
/// they are given in and, through the transition map, in the other one.
#[derive(Debug, Clone, PartialEq)]
pub enum Marker {
    Equilibrium { chart: ChartTag, point: (Rational, Rational) },
    Cycle { chart: ChartTag, curve: CurveDescriptor },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtlasConfig {
    pub eps1: Rational,
    pub eps2: Rational,
    /// Explicit disk radii, overriding the ones derived from `eps1, eps2`.
    pub radii: Option<[f64; 2]>,
    /// Polar seed grid used in each disk; `None` for explicit seeds only.
    pub grid: Option<SeedGrid>,
    pub seeds: Vec<Seed>,
    pub integrator: IntegratorConfig,
    pub markers: Vec<Marker>,
    /// Pixel size of each rendered disk.
    pub size: u32,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        Self {
            eps1: rat(1, 5),
            eps2: rat(1, 5),
            radii: None,
            grid: Some(SeedGrid::default()),
            seeds: Vec::new(),
            integrator: IntegratorConfig {
                closure_tol: Some(1e-5),
                ..IntegratorConfig::default()
            },
            markers: Vec::new(),
            size: 400,
        }
    }
}

impl AtlasConfig {
    /// No seeds and no markers.
    pub fn empty() -> Self {
        Self {
            grid: None,
            ..Self::default()
        }
    }

    /// `[r, rho]`, checked to cover the sphere.
    pub fn disk_radii(&self) -> Result<[f64; 2], AtlasError> {
        let radii = match self.radii {
            Some(r) => {
                if !(r[0] > 0.0 && r[1] > 0.0 && r[0].is_finite() && r[1].is_finite()) {
                    return Err(AtlasError::InvalidConfig("radii must be positive".into()));
                }
                r
            }
            None => [disk_radius(&self.eps1)?, disk_radius(&self.eps2)?],
        };
        // the derived radii satisfy r^2 rho^2 >= 16 exactly; allow for rounding
        if radii[0] * radii[1] < 4.0 * (1.0 - 1e-12) {
            return Err(AtlasError::Coverage(radii[0], radii[1]));
        }
        Ok(radii)
    }

    pub fn validate(&self) -> Result<[f64; 2], AtlasError> {
        let radii = self.disk_radii()?;
        self.integrator.validate()?;
        if self.size == 0 {
            return Err(AtlasError::InvalidConfig("render size must be positive".into()));
        }
        for seed in &self.seeds {
            let r = radii[chart_index(seed.chart)];
            if !(seed.point[0].hypot(seed.point[1]) <= r) {
                return Err(AtlasError::InvalidConfig(format!(
                    "seed {:?} lies outside the {} disk",
                    seed.point,
                    seed.chart.name()
                )));
            }
        }
        for marker in &self.markers {
            if let Marker::Cycle { curve, .. } = marker {
                if !matches!(curve, CurveDescriptor::Circle { .. }) {
                    return Err(AtlasError::InvalidConfig("cycle markers must be circles".into()));
                }
            }
        }
        Ok(radii)
    }

    pub fn to_json(&self) -> Value {
        let i = &self.integrator;
        json!({
            "eps1": fmt_rational(&self.eps1),
            "eps2": fmt_rational(&self.eps2),
            "radii": self.radii,
            "grid": self.grid.map(|g| json!({"rays": g.rays, "radii": g.radii})),
            "seeds": self.seeds.iter().map(|s| json!({"chart": s.chart.name(), "point": s.point})).collect::<Vec<_>>(),
            "integrator": {
                "rtol": i.rtol, "atol": i.atol, "h0": i.h0, "hmax": i.hmax, "t_max": i.t_max,
                "inner_radius": i.inner_radius, "equilibrium_tol": i.equilibrium_tol,
                "closure_tol": i.closure_tol, "max_steps": i.max_steps,
            },
            "markers": self.markers.iter().map(marker_json).collect::<Vec<_>>(),
            "size": self.size,
        })
    }
}

fn marker_json(m: &Marker) -> Value {
    match m {
        Marker::Equilibrium { chart, point } => json!({
            "kind": "equilibrium",
            "chart": chart.name(),
            "point": [fmt_rational(&point.0), fmt_rational(&point.1)],
        }),
        Marker::Cycle { chart, curve } => json!({"kind": "cycle", "chart": chart.name(), "curve": curve.to_json()}),
    }
}

fn chart_index(chart: ChartTag) -> usize {
    match chart {
        ChartTag::North => 0,
        ChartTag::South => 1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumMarker {
    pub point: [f64; 2],
    /// Exact coordinates, when known.
    pub exact: Option<(Rational, Rational)>,
    /// `None` when the marked point turns out not to be an equilibrium.
    pub class: Option<EquilibriumClass>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CycleShape {
    Circle { center: [f64; 2], radius: f64 },
    /// `a x + b y + c = 0`: the image of a cycle through the other chart's
    /// origin.
    Line { a: f64, b: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleMarker {
    pub shape: CycleShape,
    pub equation: String,
}

/// A direction marker: unit vector of the forward-time flow at `at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrow {
    pub at: [f64; 2],
    pub dir: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskChart {
    pub chart: ChartTag,
    pub vars: [String; 2],
    pub radius: f64,
    pub trajectories: Vec<Trajectory>,
    pub equilibria: Vec<EquilibriumMarker>,
    pub cycles: Vec<CycleMarker>,
    pub arrows: Vec<Arrow>,
}

impl DiskChart {
    pub fn label(&self) -> String {
        format!("K({},{})", self.vars[0], self.vars[1])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "chart": self.chart.name(),
            "label": self.label(),
            "radius": self.radius,
            "trajectories": self.trajectories.iter().map(Trajectory::to_json).collect::<Vec<_>>(),
            "equilibria": self.equilibria.iter().map(|e| json!({
                "point": e.point,
                "exact": e.exact.as_ref().map(|(a, b)| [fmt_rational(a), fmt_rational(b)]),
                "class": e.class.map(|c| c.name()),
            })).collect::<Vec<_>>(),
            "cycles": self.cycles.iter().map(|c| {
                let shape = match c.shape {
                    CycleShape::Circle { center, radius } => json!({"kind": "circle", "center": center, "radius": radius}),
                    CycleShape::Line { a, b, c } => json!({"kind": "line", "a": a, "b": b, "c": c}),
                };
                json!({"shape": shape, "equation": c.equation})
            }).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|a| json!({"at": a.at, "dir": a.dir})).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub system: [String; 2],
    pub system_vars: [String; 2],
    pub conjugate: [String; 2],
    pub conjugate_vars: [String; 2],
    pub k: u32,
    pub m: u32,
    pub time_relation: String,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtlasDocument {
    /// The disk of the described system first, its conjugate second.
    pub disks: [DiskChart; 2],
    pub provenance: Provenance,
    /// Pixel size of each rendered disk.
    pub size: u32,
}

impl AtlasDocument {
    /// The same atlas read as the atlas of the conjugate system.
    pub fn reversed(&self) -> Self {
        let [a, b] = self.disks.clone();
        Self {
            disks: [b, a],
            provenance: self.provenance.clone(),
            size: self.size,
        }
    }

    pub fn trajectory_count(&self) -> usize {
        self.disks.iter().map(|d| d.trajectories.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let p = &self.provenance;
        json!({
            "schema_version": SCHEMA_VERSION,
            "provenance": {
                "system": {"vars": p.system_vars, "rhs": p.system},
                "conjugate": {"vars": p.conjugate_vars, "rhs": p.conjugate, "k": p.k, "m": p.m,
                              "time_relation": p.time_relation},
                "config_hash": p.config_hash,
                "tool_version": env!("CARGO_PKG_VERSION"),
            },
            "size": self.size,
            "disks": self.disks.iter().map(DiskChart::to_json).collect::<Vec<_>>(),
        })
    }
}

/// SHA-256 of the canonical JSON of the system and the configuration.
pub fn config_hash(sys: &DiffSystem, cfg: &AtlasConfig) -> String {
    let spec = sys.to_spec();
    let canonical = json!({"system": {"vars": spec.vars, "rhs": spec.rhs}, "config": cfg.to_json()});
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

fn vars_of(sys: &DiffSystem) -> [String; 2] {
    [sys.vars().first().to_string(), sys.vars().second().to_string()]
}

fn grid_seeds(grid: SeedGrid, chart: ChartTag, radius: f64) -> Vec<Seed> {
    let mut out = Vec::with_capacity(grid.rays * grid.radii);
    for j in 0..grid.radii {
        let r = radius * (j + 1) as f64 / (grid.radii + 1) as f64;
        for i in 0..grid.rays {
            let angle = std::f64::consts::TAU * i as f64 / grid.rays as f64;
            out.push(Seed {
                chart,
                point: [r * angle.cos(), r * angle.sin()],
            });
        }
    }
    out
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Cycle marker shapes in both charts: the configured circle and its image.
fn cycle_shapes(chart: ChartTag, curve: &CurveDescriptor) -> Result<[(ChartTag, CurveDescriptor); 2], AtlasError> {
    let image = match map_curve(curve).map_err(|e| AtlasError::InvalidConfig(e.to_string()))? {
        CurveImage::Curve(c) => c,
        CurveImage::Infinity => return Err(AtlasError::InvalidConfig("cycle marker is a point".into())),
    };
    Ok([(chart, curve.clone()), (chart.other(), image)])
}

fn cycle_marker(curve: &CurveDescriptor, vars: &crate::poly::VarPair) -> CycleMarker {
    let shape = match curve {
        CurveDescriptor::Circle { center, r2 } => CycleShape::Circle {
            center: [to_f64(&center.0), to_f64(&center.1)],
            radius: to_f64(r2).sqrt(),
        },
        CurveDescriptor::Line { a, b, c } => CycleShape::Line {
            a: to_f64(a),
            b: to_f64(b),
            c: to_f64(c),
        },
        CurveDescriptor::Point(a, b) => CycleShape::Circle {
            center: [to_f64(a), to_f64(b)],
            radius: 0.0,
        },
    };
    CycleMarker {
        shape,
        equation: curve.equation_text(vars),
    }
}

/// Seeds just inside and just outside a circular cycle, on its rightmost
/// and leftmost points.
fn cycle_seeds(chart: ChartTag, curve: &CurveDescriptor, radius: f64) -> Vec<Seed> {
    let CurveDescriptor::Circle { center, r2 } = curve else {
        return Vec::new();
    };
    let (cx, cy, r) = (to_f64(&center.0), to_f64(&center.1), to_f64(r2).sqrt());
    let mut out = Vec::new();
    for side in [1.0, -1.0] {
        for scale in [1.0 - CYCLE_SEED_OFFSET, 1.0 + CYCLE_SEED_OFFSET] {
            let p = [cx + side * scale * r, cy];
            if p[0].hypot(p[1]) < radius {
                out.push(Seed { chart, point: p });
            }
        }
    }
    out
}

fn arrow_for(traj: &Trajectory) -> Option<Arrow> {
    if traj.len() < 2 {
        return None;
    }
    let mut arc = Vec::with_capacity(traj.len());
    let mut total = 0.0;
    arc.push(0.0);
    for w in traj.points.windows(2) {
        total += (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        arc.push(total);
    }
    if !(total > 0.0) {
        return None;
    }
    let half = 0.5 * total;
    let i = (0..arc.len())
        .min_by(|&a, &b| (arc[a] - half).abs().total_cmp(&(arc[b] - half).abs()))
        .expect("nonempty");
    let sign = match traj.direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let v = traj.velocities[i];
    let n = v[0].hypot(v[1]);
    (n > 0.0 && n.is_finite()).then(|| Arrow {
        at: traj.points[i],
        dir: [sign * v[0] / n, sign * v[1] / n],
    })
}

fn marker_at(
    sys: &DiffSystem,
    point: (Rational, Rational),
    radius: f64,
    existing: &[EquilibriumMarker],
) -> Option<EquilibriumMarker> {
    let f = [to_f64(&point.0), to_f64(&point.1)];
    if f[0].hypot(f[1]) > radius || existing.iter().any(|e| e.exact.as_ref() == Some(&point)) {
        return None;
    }
    Some(EquilibriumMarker {
        point: f,
        class: point_status(sys, (&point.0, &point.1)),
        exact: Some(point),
    })
}

/// Builds the atlas of `sys`: its trajectories in `K(x,y)` and those of its
/// conjugate in `K(u,v)`.
pub fn build_atlas(sys: &DiffSystem, cfg: &AtlasConfig) -> Result<AtlasDocument, AtlasError> {
    let radii = cfg.validate()?;
    let result = conjugate(sys)?;
    build_with(sys, &result, cfg, radii)
}

fn build_with(
    sys: &DiffSystem,
    result: &ConjugationResult,
    cfg: &AtlasConfig,
    radii: [f64; 2],
) -> Result<AtlasDocument, AtlasError> {
    let systems = [sys, &result.conjugate];
    let charts = [ChartTag::North, ChartTag::South];

    let mut cycle_curves: Vec<(ChartTag, CurveDescriptor)> = Vec::new();
    for marker in &cfg.markers {
        if let Marker::Cycle { chart, curve } = marker {
            cycle_curves.extend(cycle_shapes(*chart, curve)?);
        }
    }

    let mut seeds: Vec<Seed> = Vec::new();
    for (d, &chart) in charts.iter().enumerate() {
        if let Some(grid) = cfg.grid {
            seeds.extend(grid_seeds(grid, chart, radii[d]));
        }
        seeds.extend(cfg.seeds.iter().filter(|s| s.chart == chart));
        for (c, curve) in &cycle_curves {
            if *c == chart {
                seeds.extend(cycle_seeds(chart, curve, radii[d]));
            }
        }
    }

    let runs: Vec<Vec<Trajectory>> = seeds
        .par_iter()
        .map(|seed| {
            let d = chart_index(seed.chart);
            let icfg = IntegratorConfig {
                outer_radius: radii[d],
                ..cfg.integrator
            };
            [Direction::Forward, Direction::Backward]
                .into_iter()
                .map(|dir| match seed.chart {
                    ChartTag::North => integrate_on(sys, seed.chart, seed.point, &icfg, dir),
                    ChartTag::South => integrate_conjugate_on(result, seed.chart, seed.point, &icfg, dir),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut disks: Vec<DiskChart> = charts
        .iter()
        .enumerate()
        .map(|(d, &chart)| DiskChart {
            chart,
            vars: vars_of(systems[d]),
            radius: radii[d],
            trajectories: Vec::new(),
            equilibria: Vec::new(),
            cycles: Vec::new(),
            arrows: Vec::new(),
        })
        .collect();
    for traj in runs.into_iter().flatten() {
        let disk = &mut disks[chart_index(traj.chart)];
        if let Some(arrow) = arrow_for(&traj) {
            disk.arrows.push(arrow);
        }
        disk.trajectories.push(traj);
    }

    // chart origins: the origin of K(x,y) and the infinitely remote point
    let origin = (Rational::zero(), Rational::zero());
    if let Some(class) = point_status(sys, (&origin.0, &origin.1)) {
        disks[0].equilibria.push(EquilibriumMarker {
            point: [0.0, 0.0],
            exact: Some(origin.clone()),
            class: Some(class),
        });
    }
    if let Some(class) = infinite_point_status(sys)?.class {
        disks[1].equilibria.push(EquilibriumMarker {
            point: [0.0, 0.0],
            exact: Some(origin.clone()),
            class: Some(class),
        });
    }

    for marker in &cfg.markers {
        if let Marker::Equilibrium { chart, point } = marker {
            let d = chart_index(*chart);
            if let Some(m) = marker_at(systems[d], point.clone(), radii[d], &disks[d].equilibria) {
                disks[d].equilibria.push(m);
            }
            if let Ok(image) = transition((&point.0, &point.1)) {
                let o = 1 - d;
                if let Some(m) = marker_at(systems[o], image, radii[o], &disks[o].equilibria) {
                    disks[o].equilibria.push(m);
                }
            }
        }
    }
    for (chart, curve) in &cycle_curves {
        let d = chart_index(*chart);
        disks[d].cycles.push(cycle_marker(curve, systems[d].vars()));
    }

    let provenance = Provenance {
        system: [sys.p().to_string(), sys.q().to_string()],
        system_vars: vars_of(sys),
        conjugate: [result.conjugate.p().to_string(), result.conjugate.q().to_string()],
        conjugate_vars: vars_of(&result.conjugate),
        k: result.k,
        m: result.m,
        time_relation: result.time_relation(),
        config_hash: config_hash(sys, cfg),
    };
    let [n, s]: [DiskChart; 2] = disks.try_into().expect("two disks");
    Ok(AtlasDocument {
        disks: [n, s],
        provenance,
        size: cfg.size,
    })
}

/// The trajectory on the unit sphere, through its chart's projection.
pub fn lift_to_sphere(traj: &Trajectory) -> Vec<SpherePoint<f64>> {
    traj.points
        .iter()
        .map(|p| stereo_project(traj.chart, (&p[0], &p[1])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::NodeKind;
    use crate::dynamics::Termination;
    use crate::parse::{parse_system, SystemSpec};

    fn sys(p: &str, q: &str) -> DiffSystem {
        parse_system(&SystemSpec::new(["x", "y"], [p, q])).unwrap()
    }

    #[test]
    fn radii() {
        assert_eq!(disk_radius(&int(1)).unwrap(), 2.0);
        assert!((disk_radius(&rat(1, 5)).unwrap() - 6.0).abs() < 1e-15);
        assert_eq!(disk_radius_sq(&rat(1, 5)).unwrap(), int(36));
        assert!(matches!(disk_radius(&rat(8, 5)), Err(AtlasError::OutOfRange(_))));
        assert!(matches!(disk_radius(&int(0)), Err(AtlasError::OutOfRange(_))));
    }

    #[test]
    fn boundary_maps_to_concentric_circle() {
        let r2 = disk_radius_sq(&rat(1, 5)).unwrap();
        let expected = CurveDescriptor::circle((int(0), int(0)), rat(16, 36)).unwrap();
        assert_eq!(boundary_image(&r2).unwrap(), CurveImage::Curve(expected));
    }

    #[test]
    fn radii_override_must_cover() {
        let cfg = AtlasConfig {
            radii: Some([1.0, 3.0]),
            ..AtlasConfig::empty()
        };
        assert!(matches!(cfg.disk_radii(), Err(AtlasError::Coverage(..))));
    }

    #[test]
    fn empty_config() {
        let doc = build_atlas(&sys("x", "y"), &AtlasConfig::empty()).unwrap();
        assert_eq!(doc.trajectory_count(), 0);
        assert!(doc.disks.iter().all(|d| (d.radius - 6.0).abs() < 1e-12));
        assert_eq!(doc.to_json()["schema_version"], 1);
    }

    #[test]
    fn radial_system_markers_and_rays() {
        let doc = build_atlas(&sys("x", "y"), &AtlasConfig::default()).unwrap();
        let [n, s] = &doc.disks;
        assert_eq!(n.equilibria[0].class, Some(EquilibriumClass::Node { stable: false, kind: NodeKind::Dicritical }));
        assert_eq!(s.equilibria[0].class, Some(EquilibriumClass::Node { stable: true, kind: NodeKind::Dicritical }));
        for disk in [n, s] {
            assert_eq!(disk.trajectories.len(), 48);
            for t in &disk.trajectories {
                // straight rays: the polar angle is constant
                let a0 = t.points[0][1].atan2(t.points[0][0]);
                for p in &t.points {
                    assert!((p[1].atan2(p[0]) - a0).abs() < 1e-9);
                    assert!(p[0].hypot(p[1]) <= disk.radius * (1.0 + CLIP_TOLERANCE));
                }
            }
        }
        assert_eq!(n.label(), "K(x,y)");
        assert_eq!(s.label(), "K(u,v)");
    }

    #[test]
    fn cycle_marker_image() {
        // x(s-1) - y(s+1), x(s+1) + y(s-1): the unit circle is a cycle
        let sys = sys("x^3 + x*y^2 - x - x^2*y - y^3 - y", "x^3 + x*y^2 + x + x^2*y + y^3 - y");
        let cfg = AtlasConfig {
            grid: None,
            markers: vec![Marker::Cycle {
                chart: ChartTag::North,
                curve: CurveDescriptor::circle((int(0), int(0)), int(1)).unwrap(),
            }],
            ..AtlasConfig::default()
        };
        let doc = build_atlas(&sys, &cfg).unwrap();
        let s = &doc.disks[1];
        assert_eq!(s.cycles[0].shape, CycleShape::Circle { center: [0.0, 0.0], radius: 4.0 });
        assert_eq!(s.cycles[0].equation, "u^2 + v^2 - 16 = 0");
        assert_eq!(doc.disks[0].trajectories.len(), 8);
    }

    #[test]
    fn equilibrium_marker_transfers() {
        let sys = sys("x - y", "x + y");
        let cfg = AtlasConfig {
            markers: vec![Marker::Equilibrium {
                chart: ChartTag::North,
                point: (int(1), int(1)),
            }],
            ..AtlasConfig::empty()
        };
        let doc = build_atlas(&sys, &cfg).unwrap();
        let s = &doc.disks[1];
        let m = s.equilibria.iter().find(|e| e.exact == Some((int(2), int(2)))).unwrap();
        assert_eq!(m.point, [2.0, 2.0]);
    }

    #[test]
    fn deterministic_and_reversible() {
        let sys = sys("-y", "x");
        let a = build_atlas(&sys, &AtlasConfig::default()).unwrap();
        let b = build_atlas(&sys, &AtlasConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert_eq!(a.reversed().disks[0].chart, ChartTag::South);
        let ends: Vec<_> = a.disks[0].trajectories.iter().map(|t| (t.termination, t.end_time(), t.points[0])).collect();
        assert!(a.disks[0].trajectories.iter().all(|t| t.termination == Termination::Closed), "{ends:?}");
    }

    #[test]
    fn lifted_points_are_on_the_sphere() {
        let doc = build_atlas(&sys("-y", "x"), &AtlasConfig::default()).unwrap();
        for disk in &doc.disks {
            for t in &disk.trajectories {
                for sp in lift_to_sphere(t) {
                    assert!((sp.norm_sq() - 1.0).abs() < 1e-12);
                }
            }
        }
        let circle = Trajectory {
            chart: ChartTag::North,
            direction: Direction::Forward,
            times: vec![0.0, 1.0],
            points: vec![[1.0, 0.0], [0.0, 1.0]],
            velocities: vec![[0.0, 1.0], [-1.0, 0.0]],
            termination: Termination::TimeLimit,
        };
        for sp in lift_to_sphere(&circle) {
            assert!((sp.z + 0.6).abs() < 1e-15);
        }
    }
}
