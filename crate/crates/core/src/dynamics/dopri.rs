//! Dormand–Prince 5(4) stepper with cubic Hermite dense output.

/// Butcher tableau of the Dormand–Prince pair (the fields are autonomous, so
/// the nodes are not needed).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperSettings {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub hmax: f64,
    pub t_max: f64,
    pub max_steps: usize,
}

/// One accepted step, with endpoint derivatives for interpolation.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub f0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
    pub f1: [f64; N],
}

impl<const N: usize> Step<N> {
    /// Cubic Hermite interpolant at `theta` in `[0, 1]`.
    pub fn at(&self, theta: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let (t2, t3) = (theta * theta, theta * theta * theta);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + theta;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        std::array::from_fn(|i| {
            h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i]
        })
    }

    /// Derivative of the interpolant with respect to time.
    pub fn derivative_at(&self, theta: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let t2 = theta * theta;
        let d00 = 6.0 * t2 - 6.0 * theta;
        let d10 = 3.0 * t2 - 4.0 * theta + 1.0;
        let d01 = -6.0 * t2 + 6.0 * theta;
        let d11 = 3.0 * t2 - 2.0 * theta;
        std::array::from_fn(|i| {
            (d00 * self.y0[i] + d01 * self.y1[i]) / h + d10 * self.f0[i] + d11 * self.f1[i]
        })
    }

    pub fn time_at(&self, theta: f64) -> f64 {
        self.t0 + theta * (self.t1 - self.t0)
    }
}

/// What the step observer wants after each accepted step.
pub enum Control<T> {
    Continue,
    /// Stop at fraction `theta` of the step with the given reason.
    Stop(f64, T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFailure {
    Underflow,
    NonFinite,
    StepLimit,
}

pub struct RunOutput<const N: usize, T> {
    /// `(t, y, y')` at the start and every accepted step, the last one
    /// truncated at the stop point.
    pub samples: Vec<(f64, [f64; N], [f64; N])>,
    /// `None` when the time limit was reached.
    pub stop: Option<T>,
}

fn is_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrates `y' = f(y)` from `t = 0` until `t_max` or until `observe`
/// requests a stop.
pub fn run<const N: usize, F, O, T>(
    f: F,
    y0: [f64; N],
    settings: &StepperSettings,
    mut observe: O,
) -> Result<RunOutput<N, T>, StepFailure>
where
    F: Fn(&[f64; N]) -> [f64; N],
    O: FnMut(&Step<N>) -> Control<T>,
{
    let mut t = 0.0;
    let mut y = y0;
    let mut fy = f(&y);
    if !is_finite(&fy) {
        return Err(StepFailure::NonFinite);
    }
    let mut samples = vec![(t, y, fy)];
    let mut h = settings.h0.min(settings.hmax).min(settings.t_max);
    let mut steps = 0usize;
    while t < settings.t_max {
        if steps >= settings.max_steps {
            return Err(StepFailure::StepLimit);
        }
        let last = t + h >= settings.t_max;
        if last {
            h = settings.t_max - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = fy;
        let mut finite = true;
        for s in 1..7 {
            let ys: [f64; N] =
                std::array::from_fn(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>());
            k[s] = f(&ys);
            if !is_finite(&k[s]) {
                finite = false;
                break;
            }
        }
        // the seventh stage is evaluated at the fifth-order solution (FSAL)
        let y1: [f64; N] = std::array::from_fn(|i| y[i] + h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>());
        let err = if finite && is_finite(&y1) {
            let sum: f64 = (0..N)
                .map(|i| {
                    let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                    let scale = settings.atol + settings.rtol * y[i].abs().max(y1[i].abs());
                    (e / scale).powi(2)
                })
                .sum();
            (sum / N as f64).sqrt()
        } else {
            f64::INFINITY
        };
        if err <= 1.0 {
            let step = Step {
                t0: t,
                y0: y,
                f0: fy,
                t1: t + h,
                y1,
                f1: k[6],
            };
            steps += 1;
            t = if last { settings.t_max } else { t + h };
            y = y1;
            fy = k[6];
            match observe(&step) {
                Control::Continue => samples.push((t, y, fy)),
                Control::Stop(theta, reason) => {
                    let theta = theta.clamp(0.0, 1.0);
                    samples.push((step.time_at(theta), step.at(theta), step.derivative_at(theta)));
                    return Ok(RunOutput {
                        samples,
                        stop: Some(reason),
                    });
                }
            }
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            h = (h * fac).min(settings.hmax);
        } else {
            let fac = if err.is_finite() {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0)
            } else {
                0.25
            };
            h *= fac;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(if err.is_finite() {
                    StepFailure::Underflow
                } else {
                    StepFailure::NonFinite
                });
            }
        }
    }
    Ok(RunOutput { samples, stop: None })
}

/// Smallest `theta` in `(0, 1]` with `g(theta) >= 0`, given `g(0) < 0 <= g(1)`,
/// located by bisection.
pub fn locate_crossing(g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(t_max: f64) -> StepperSettings {
        StepperSettings {
            rtol: 1e-10,
            atol: 1e-12,
            h0: 1e-3,
            hmax: 0.5,
            t_max,
            max_steps: 100_000,
        }
    }

    #[test]
    fn exponential_growth() {
        let out = run(|y: &[f64; 1]| [y[0]], [1.0], &settings(2.0), |_| Control::<()>::Continue).unwrap();
        let (t, y, _) = out.samples.last().unwrap();
        assert_eq!(*t, 2.0);
        assert!((y[0] - 2f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn harmonic_oscillator_period() {
        let tau = 2.0 * std::f64::consts::PI;
        let out = run(|y: &[f64; 2]| [y[1], -y[0]], [1.0, 0.0], &settings(tau), |_| Control::<()>::Continue)
            .unwrap();
        let (_, y, _) = out.samples.last().unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8);
    }

    #[test]
    fn stop_is_located_inside_the_step() {
        // y = e^t crosses 3 at t = ln 3
        let out = run(|y: &[f64; 1]| [y[0]], [1.0], &settings(10.0), |s: &Step<1>| {
            if s.y1[0] >= 3.0 {
                Control::Stop(locate_crossing(|th| s.at(th)[0] - 3.0), ())
            } else {
                Control::Continue
            }
        })
        .unwrap();
        let (t, y, _) = out.samples.last().unwrap();
        assert!((t - 3f64.ln()).abs() < 1e-6);
        assert!((y[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y^2 from 1 blows up at t = 1
        let res = run(|y: &[f64; 1]| [y[0] * y[0]], [1.0], &settings(2.0), |_| Control::<()>::Continue);
        assert!(res.is_err());
    }
}
