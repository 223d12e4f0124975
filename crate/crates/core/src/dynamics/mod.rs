//! Numerical trajectories of polynomial fields, closed-orbit detection, and
//! the numeric check that a system and its conjugate share trajectories.

pub mod dopri;
mod hausdorff;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::charts::{transition, transition_jacobian, ChartTag};
use crate::conjugate::{ConjugationResult, DiffSystem};
use crate::poly::BiPoly;
use dopri::{locate_crossing, run, Control, Step, StepFailure, StepperSettings};
pub use hausdorff::{densify, hausdorff_distance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("step size underflow (stiff or singular field)")]
    StepUnderflow,
    #[error("non-finite field value")]
    NumericOverflow,
    #[error("step limit reached before any stop condition")]
    StepLimit,
    #[error("start point {0:?} lies outside the outer radius")]
    StartOutside([f64; 2]),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
}

impl From<StepFailure> for DynamicsError {
    fn from(f: StepFailure) -> Self {
        match f {
            StepFailure::Underflow => Self::StepUnderflow,
            StepFailure::NonFinite => Self::NumericOverflow,
            StepFailure::StepLimit => Self::StepLimit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub hmax: f64,
    pub t_max: f64,
    /// Stop when leaving the disk of this radius.
    pub outer_radius: f64,
    /// Stop when entering the disk of this radius around the origin.
    pub inner_radius: f64,
    /// Stop when the field norm drops below this value.
    pub equilibrium_tol: f64,
    /// Stop when the orbit closes up to this distance.
    pub closure_tol: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            h0: 1e-3,
            hmax: 0.05,
            t_max: 50.0,
            outer_radius: 1e3,
            inner_radius: 1e-6,
            equilibrium_tol: 1e-9,
            closure_tol: None,
            max_steps: 200_000,
        }
    }
}

impl IntegratorConfig {
    /// Tight tolerances for verification runs.
    pub fn precise() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: &str| Err(DynamicsError::InvalidConfig(msg.into()));
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.h0 > 0.0 && self.hmax > 0.0) {
            return bad("step sizes must be positive");
        }
        if !(self.t_max > 0.0) {
            return bad("max time must be positive");
        }
        if !(self.inner_radius >= 0.0 && self.inner_radius < self.outer_radius) {
            return bad("inner guard must be smaller than the outer radius");
        }
        Ok(())
    }

    fn stepper(&self) -> StepperSettings {
        StepperSettings {
            rtol: self.rtol,
            atol: self.atol,
            h0: self.h0,
            hmax: self.hmax,
            t_max: self.t_max,
            max_steps: self.max_steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    TimeLimit,
    ExitedOuterDisk,
    EnteredOriginGuard,
    ConvergedToEquilibrium,
    Closed,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Self::TimeLimit => "time-limit",
            Self::ExitedOuterDisk => "exited-outer-disk",
            Self::EnteredOriginGuard => "entered-origin-guard",
            Self::ConvergedToEquilibrium => "converged-to-equilibrium",
            Self::Closed => "closed",
        }
    }
}

impl Serialize for Termination {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A computed orbit. Times are elapsed time from the start, increasing in
/// both directions of integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub chart: ChartTag,
    pub direction: Direction,
    pub times: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    /// Velocity along the orbit in elapsed time.
    pub velocities: Vec<[f64; 2]>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn end_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> Value {
        let samples: Vec<[f64; 3]> = self
            .times
            .iter()
            .zip(&self.points)
            .map(|(t, p)| [*t, p[0], p[1]])
            .collect();
        json!({
            "chart": self.chart.name(),
            "termination": self.termination.name(),
            "samples": samples,
        })
    }
}

/// A polynomial field compiled to `f64` monomial lists.
#[derive(Debug, Clone)]
pub struct CompiledField {
    terms: [Vec<(i32, i32, f64)>; 2],
}

impl CompiledField {
    pub fn new(sys: &DiffSystem) -> Self {
        let compile = |p: &BiPoly| {
            p.terms()
                .map(|(m, c)| (m.first as i32, m.second as i32, crate::charts::Scalar::to_f64(c)))
                .collect()
        };
        Self {
            terms: [compile(sys.p()), compile(sys.q())],
        }
    }

    pub fn eval(&self, p: &[f64; 2]) -> [f64; 2] {
        let e = |ts: &[(i32, i32, f64)]| ts.iter().map(|(i, j, c)| c * p[0].powi(*i) * p[1].powi(*j)).sum();
        [e(&self.terms[0]), e(&self.terms[1])]
    }
}

/// Floating evaluation of both right-hand sides.
pub fn field_eval(sys: &DiffSystem, point: [f64; 2]) -> Result<[f64; 2], DynamicsError> {
    let v = CompiledField::new(sys).eval(&point);
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(DynamicsError::NumericOverflow)
    }
}

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Angle in degrees between two vectors.
fn angle_deg(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let cos = (a[0] * b[0] + a[1] * b[1]) / (norm(a) * norm(b));
    cos.clamp(-1.0, 1.0).acos().to_degrees()
}

const CLOSURE_ANGLE_DEG: f64 = 5.0;

/// Shared stop logic on the first two state components.
struct Stops {
    start: [f64; 2],
    start_dir: [f64; 2],
    outer: f64,
    inner: f64,
    eq_tol: f64,
    closure: Option<f64>,
    left_start: bool,
}

impl Stops {
    fn check<const N: usize>(&mut self, step: &Step<N>) -> Option<(f64, Termination)> {
        let pos = |th: f64| {
            let y = step.at(th);
            [y[0], y[1]]
        };
        let r1 = step.y1[0].hypot(step.y1[1]);
        if r1 >= self.outer {
            return Some((locate_crossing(|th| norm(&pos(th)) - self.outer), Termination::ExitedOuterDisk));
        }
        if r1 <= self.inner {
            return Some((locate_crossing(|th| self.inner - norm(&pos(th))), Termination::EnteredOriginGuard));
        }
        if let Some(tol) = self.closure {
            if let Some(theta) = self.closure_point(step, tol) {
                return Some((theta, Termination::Closed));
            }
        }
        if step.f1[0].hypot(step.f1[1]) < self.eq_tol {
            return Some((1.0, Termination::ConvergedToEquilibrium));
        }
        None
    }

    /// First point of the step within `tol` of the start, moving in the
    /// starting direction, once the orbit has left the `2 tol` neighborhood.
    fn closure_point<const N: usize>(&mut self, step: &Step<N>, tol: f64) -> Option<f64> {
        const SUB: usize = 16;
        let mut prev = f64::INFINITY;
        let mut falling = false;
        for i in 0..=SUB {
            let th = i as f64 / SUB as f64;
            let y = step.at(th);
            let d = dist(&[y[0], y[1]], &self.start);
            if !self.left_start {
                if d > 2.0 * tol {
                    self.left_start = true;
                }
                continue;
            }
            if d <= tol {
                let v = step.derivative_at(th);
                if angle_deg(&[v[0], v[1]], &self.start_dir) <= CLOSURE_ANGLE_DEG {
                    return Some(th);
                }
            }
            // a pass between sub-samples can be closer than either of them:
            // refine every local minimum of the distance
            if i > 0 && falling && d > prev {
                let lo = ((i as f64 - 2.0) / SUB as f64).max(0.0);
                let dist_at = |t: f64| {
                    let y = step.at(t);
                    dist(&[y[0], y[1]], &self.start)
                };
                let th_min = golden_min(dist_at, lo, th);
                let v = step.derivative_at(th_min);
                if dist_at(th_min) <= tol && angle_deg(&[v[0], v[1]], &self.start_dir) <= CLOSURE_ANGLE_DEG {
                    return Some(th_min);
                }
            }
            falling = i > 0 && d < prev;
            prev = d;
        }
        None
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Integrates the system from `start` in the north chart.
pub fn integrate(
    sys: &DiffSystem,
    start: [f64; 2],
    cfg: &IntegratorConfig,
    direction: Direction,
) -> Result<Trajectory, DynamicsError> {
    integrate_on(sys, ChartTag::North, start, cfg, direction)
}

/// Integrates the system from `start`, labelling the result with `chart`.
pub fn integrate_on(
    sys: &DiffSystem,
    chart: ChartTag,
    start: [f64; 2],
    cfg: &IntegratorConfig,
    direction: Direction,
) -> Result<Trajectory, DynamicsError> {
    let field = CompiledField::new(sys);
    let sign = direction.sign();
    let f = |y: &[f64; 2]| {
        let v = field.eval(y);
        [sign * v[0], sign * v[1]]
    };
    integrate_core(f, chart, start, cfg, direction)
}

/// Integrates a reduced conjugate from `start`. Besides its own time `tau`
/// the original time `t`, with `dt/dtau = (u^2+v^2)^m`, is tracked, and the
/// orbit also stops once `t` reaches `t_max`, so both charts of an atlas
/// cover the same time span of the flow on the sphere.
pub fn integrate_conjugate_on(
    result: &ConjugationResult,
    chart: ChartTag,
    start: [f64; 2],
    cfg: &IntegratorConfig,
    direction: Direction,
) -> Result<Trajectory, DynamicsError> {
    let field = CompiledField::new(&result.conjugate);
    let sign = direction.sign();
    let m = result.m as i32;
    let f = |y: &[f64; 3]| {
        let v = field.eval(&[y[0], y[1]]);
        [sign * v[0], sign * v[1], (y[0] * y[0] + y[1] * y[1]).powi(m)]
    };
    integrate_core(f, chart, [start[0], start[1], 0.0], cfg, direction)
}

/// Shared driver on states whose first two components are the point. A
/// third component, when present, is a clock also limited by `t_max`.
fn integrate_core<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    chart: ChartTag,
    start: [f64; N],
    cfg: &IntegratorConfig,
    direction: Direction,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    let p0 = [start[0], start[1]];
    let r0 = norm(&p0);
    if r0 > cfg.outer_radius {
        return Err(DynamicsError::StartOutside(p0));
    }
    let f0 = f(&start);
    if !f0.iter().all(|v| v.is_finite()) {
        return Err(DynamicsError::NumericOverflow);
    }
    let v0 = [f0[0], f0[1]];
    let immediate = if norm(&v0) < cfg.equilibrium_tol {
        Some(Termination::ConvergedToEquilibrium)
    } else if r0 <= cfg.inner_radius {
        Some(Termination::EnteredOriginGuard)
    } else {
        None
    };
    if let Some(termination) = immediate {
        return Ok(Trajectory {
            chart,
            direction,
            times: vec![0.0],
            points: vec![p0],
            velocities: vec![v0],
            termination,
        });
    }
    let mut stops = Stops {
        start: p0,
        start_dir: v0,
        outer: cfg.outer_radius,
        inner: cfg.inner_radius,
        eq_tol: cfg.equilibrium_tol,
        closure: cfg.closure_tol,
        left_start: false,
    };
    let t_max = cfg.t_max;
    let out = run(f, start, &cfg.stepper(), |step: &Step<N>| {
        if let Some((theta, reason)) = stops.check(step) {
            return Control::Stop(theta, reason);
        }
        if N > 2 && step.y1[2] >= t_max {
            return Control::Stop(locate_crossing(|th| step.at(th)[2] - t_max), Termination::TimeLimit);
        }
        Control::Continue
    })?;
    let termination = out.stop.unwrap_or(Termination::TimeLimit);
    let mut traj = Trajectory {
        chart,
        direction,
        times: Vec::with_capacity(out.samples.len()),
        points: Vec::with_capacity(out.samples.len()),
        velocities: Vec::with_capacity(out.samples.len()),
        termination,
    };
    for (t, y, v) in out.samples {
        // a stop located exactly at the previous sample would repeat its time
        if traj.times.last().is_some_and(|last| t <= *last) {
            continue;
        }
        traj.times.push(t);
        traj.points.push([y[0], y[1]]);
        traj.velocities.push([v[0], v[1]]);
    }
    Ok(traj)
}

/// True when the orbit comes back within `tol` of its start, moving within
/// five degrees of its initial direction, after leaving the `2 tol`
/// neighborhood of the start.
pub fn detect_closed(traj: &Trajectory, tol: f64) -> bool {
    if traj.len() < 10 {
        return false;
    }
    if traj.termination == Termination::Closed {
        return true;
    }
    let mut stops = Stops {
        start: traj.points[0],
        start_dir: traj.velocities[0],
        outer: f64::INFINITY,
        inner: -1.0,
        eq_tol: -1.0,
        closure: Some(tol),
        left_start: false,
    };
    (1..traj.len()).any(|i| {
        let step = Step {
            t0: traj.times[i - 1],
            y0: traj.points[i - 1],
            f0: traj.velocities[i - 1],
            t1: traj.times[i],
            y1: traj.points[i],
            f1: traj.velocities[i],
        };
        stops.closure_point(&step, tol).is_some()
    })
}

/// Chord tolerance when turning trajectories into polylines for comparison.
const DENSIFY_TOL: f64 = 1e-8;

/// Hausdorff distance, in the conjugate chart, between the transition image
/// of the orbit of `sys` from `start` and the orbit of the conjugate system
/// from the image of `start`.
///
/// The conjugate is integrated in its own time `tau` together with
/// `dt/dtau = (u^2+v^2)^m`, and stopped when `t` reaches the end time of the
/// original orbit, so both cover the same arc.
pub fn conjugacy_residual(
    sys: &DiffSystem,
    result: &ConjugationResult,
    start: [f64; 2],
    cfg: &IntegratorConfig,
) -> Result<f64, DynamicsError> {
    let original = integrate(sys, start, cfg, Direction::Forward)?;
    let Ok((u0, v0)) = transition((&start[0], &start[1])) else {
        return Err(DynamicsError::InvalidConfig("start at the chart origin".into()));
    };
    // image samples with velocities pushed forward by the transition Jacobian
    let (mut times, mut mapped, mut mapped_vel) = (Vec::new(), Vec::new(), Vec::new());
    for ((t, p), v) in original.times.iter().zip(&original.points).zip(&original.velocities) {
        if let (Ok((u, w)), Ok(j)) = (transition((&p[0], &p[1])), transition_jacobian((&p[0], &p[1]))) {
            times.push(*t);
            mapped.push([u, w]);
            mapped_vel.push([j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]]);
        }
    }
    let t_end = original.end_time();
    if t_end == 0.0 {
        return Ok(hausdorff_distance(&mapped, &[[u0, v0]]));
    }
    let mapped = densify(&times, &mapped, &mapped_vel, DENSIFY_TOL);

    let field = CompiledField::new(&result.conjugate);
    let m = result.m as i32;
    let f = |y: &[f64; 3]| {
        let g = field.eval(&[y[0], y[1]]);
        [g[0], g[1], (y[0] * y[0] + y[1] * y[1]).powi(m)]
    };
    // conjugate-chart guards mirror the original ones through the transition
    let outer = 2.0 * 4.0 / cfg.inner_radius.max(f64::MIN_POSITIVE);
    let inner = 0.5 * 4.0 / cfg.outer_radius;
    let settings = StepperSettings {
        t_max: f64::MAX,
        ..cfg.stepper()
    };
    let out = run(f, [u0, v0, 0.0], &settings, |step: &Step<3>| {
        let r1 = step.y1[0].hypot(step.y1[1]);
        if step.y1[2] >= t_end {
            Control::Stop(locate_crossing(|th| step.at(th)[2] - t_end), ())
        } else if r1 >= outer || r1 <= inner {
            Control::Stop(1.0, ())
        } else {
            Control::Continue
        }
    })?;
    let taus: Vec<f64> = out.samples.iter().map(|s| s.0).collect();
    let pts: Vec<[f64; 2]> = out.samples.iter().map(|(_, y, _)| [y[0], y[1]]).collect();
    let vel: Vec<[f64; 2]> = out.samples.iter().map(|(_, _, f)| [f[0], f[1]]).collect();
    let conj = densify(&taus, &pts, &vel, DENSIFY_TOL);
    Ok(hausdorff_distance(&mapped, &conj))
}
