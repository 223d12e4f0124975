//! Sphere geometry: the two stereographic charts of the sphere of diameter
//! two tangent to the planes at its poles, the transition map between them,
//! and exact images of circles, lines and points.
//!
//! Everything is generic over [`Scalar`], so the same formulas run exactly on
//! rationals and approximately on `f64`.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::{fmt_rational, int, BiPoly, Rational, VarPair};

pub trait Scalar: Num + Clone + PartialOrd + Neg<Output = Self> + fmt::Debug {
    fn from_int(n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_int(n: i64) -> Self {
        int(n)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

fn c<T: Scalar>(n: i64) -> T {
    T::from_int(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("the projection center has no image in this chart")]
    PoleExcluded,
    #[error("the chart origin has no image under the transition map")]
    OriginSingularity,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
}

/// The two charts: `North` is the plane `Oxy` projected from the north pole,
/// `South` the plane `O*uv` projected from the south pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartTag {
    North,
    South,
}

impl ChartTag {
    pub fn other(self) -> Self {
        match self {
            ChartTag::North => ChartTag::South,
            ChartTag::South => ChartTag::North,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChartTag::North => "N",
            ChartTag::South => "S",
        }
    }
}

impl fmt::Display for ChartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point `(x*, y*, z*)` of the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> SpherePoint<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn norm_sq(&self) -> T {
        self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone() + self.z.clone() * self.z.clone()
    }
}

/// `(4a, 4b, ±(a^2 + b^2 - 4)) / (a^2 + b^2 + 4)`; the sign is `+` for the
/// north chart and `-` for the south chart.
pub fn stereo_project<T: Scalar>(chart: ChartTag, p: (&T, &T)) -> SpherePoint<T> {
    let (a, b) = (p.0.clone(), p.1.clone());
    let s = a.clone() * a.clone() + b.clone() * b.clone();
    let den = s.clone() + c(4);
    let z = match chart {
        ChartTag::North => s - c(4),
        ChartTag::South => c::<T>(4) - s,
    };
    SpherePoint::new(
        c::<T>(4) * a / den.clone(),
        c::<T>(4) * b / den.clone(),
        z / den,
    )
}

/// Inverse of [`stereo_project`]: `2(x*, y*)/(1 ∓ z*)`.
pub fn chart_project<T: Scalar>(chart: ChartTag, sp: &SpherePoint<T>) -> Result<(T, T), ChartError> {
    let den = match chart {
        ChartTag::North => T::one() - sp.z.clone(),
        ChartTag::South => T::one() + sp.z.clone(),
    };
    if den <= T::zero() {
        return Err(ChartError::PoleExcluded);
    }
    Ok((
        c::<T>(2) * sp.x.clone() / den.clone(),
        c::<T>(2) * sp.y.clone() / den,
    ))
}

/// The transition map `p -> 4p/|p|^2`. It is its own inverse, so the same
/// function serves both directions.
pub fn transition<T: Scalar>(p: (&T, &T)) -> Result<(T, T), ChartError> {
    let (a, b) = (p.0.clone(), p.1.clone());
    let s = a.clone() * a.clone() + b.clone() * b.clone();
    if s == T::zero() {
        return Err(ChartError::OriginSingularity);
    }
    Ok((c::<T>(4) * a / s.clone(), c::<T>(4) * b / s))
}

/// Jacobian matrix of the transition map at `p`:
/// `[[4(b^2-a^2), -8ab], [-8ab, 4(a^2-b^2)]] / (a^2+b^2)^2`.
pub fn transition_jacobian<T: Scalar>(p: (&T, &T)) -> Result<[[T; 2]; 2], ChartError> {
    let (a, b) = (p.0.clone(), p.1.clone());
    let s = a.clone() * a.clone() + b.clone() * b.clone();
    if s == T::zero() {
        return Err(ChartError::OriginSingularity);
    }
    let s2 = s.clone() * s;
    let d = c::<T>(4) * (b.clone() * b.clone() - a.clone() * a.clone()) / s2.clone();
    let off = c::<T>(-8) * a * b / s2;
    Ok([[d.clone(), off.clone()], [off, -d]])
}

/// The three 2x2 minors `D(x*,y*)/D(a,b)`, `D(x*,z*)/D(a,b)`,
/// `D(y*,z*)/D(a,b)` of the projection's Jacobian. They never vanish
/// simultaneously.
pub fn psi_jacobians<T: Scalar>(chart: ChartTag, p: (&T, &T)) -> (T, T, T) {
    let (a, b) = (p.0.clone(), p.1.clone());
    let s = a.clone() * a.clone() + b.clone() * b.clone();
    let d = s.clone() + c(4);
    let d3 = d.clone() * d.clone() * d;
    let first = c::<T>(-16) * (s - c(4)) / d3.clone();
    match chart {
        ChartTag::North => (first, c::<T>(64) * b / d3.clone(), c::<T>(-64) * a / d3),
        ChartTag::South => (first, c::<T>(-64) * b / d3.clone(), c::<T>(64) * a / d3),
    }
}

/// A chart point or the infinitely remote point of that chart's plane.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedPoint<T> {
    Finite(T, T),
    Infinity,
}

/// The transition map extended by origin <-> infinity.
pub fn transition_extended<T: Scalar>(p: &ExtendedPoint<T>) -> ExtendedPoint<T> {
    match p {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(T::zero(), T::zero()),
        ExtendedPoint::Finite(a, b) => match transition((a, b)) {
            Ok((u, v)) => ExtendedPoint::Finite(u, v),
            Err(_) => ExtendedPoint::Infinity,
        },
    }
}

/// A circle, line or point on a chart plane, with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveDescriptor {
    /// `(x - cx)^2 + (y - cy)^2 = r2`
    Circle { center: (Rational, Rational), r2: Rational },
    /// `a x + b y + c = 0`, normalized
    Line { a: Rational, b: Rational, c: Rational },
    Point(Rational, Rational),
}

/// Image of a curve: a curve, or the infinitely remote point when the input
/// is the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveImage {
    Curve(CurveDescriptor),
    Infinity,
}

/// Coefficients of `alpha (x^2 + y^2) + beta x + gamma y + delta = 0`.
type GeneralizedCircle = [Rational; 4];

impl CurveDescriptor {
    pub fn circle(center: (Rational, Rational), r2: Rational) -> Result<Self, ChartError> {
        if !r2.is_positive() {
            return Err(ChartError::InvalidCurve("circle radius squared must be positive".into()));
        }
        Ok(Self::Circle { center, r2 })
    }

    /// A line, normalized to integer coefficients with content one and the
    /// first nonzero of `a, b` positive.
    pub fn line(a: Rational, b: Rational, c: Rational) -> Result<Self, ChartError> {
        if a.is_zero() && b.is_zero() {
            return Err(ChartError::InvalidCurve("line needs a or b nonzero".into()));
        }
        let lcm = [&a, &b, &c]
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = [&a, &b, &c]
            .iter()
            .map(|q| (*q * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let lead_negative = if a.is_zero() { b.is_negative() } else { a.is_negative() };
        let g = if lead_negative { -g } else { g };
        let q = |n: &BigInt| Rational::new(n.clone(), g.clone());
        Ok(Self::Line {
            a: q(&ints[0]),
            b: q(&ints[1]),
            c: q(&ints[2]),
        })
    }

    pub fn point(a: Rational, b: Rational) -> Self {
        Self::Point(a, b)
    }

    fn generalized(&self) -> Option<GeneralizedCircle> {
        match self {
            Self::Circle { center: (cx, cy), r2 } => Some([
                Rational::one(),
                int(-2) * cx,
                int(-2) * cy,
                cx * cx + cy * cy - r2,
            ]),
            Self::Line { a, b, c } => Some([Rational::zero(), a.clone(), b.clone(), c.clone()]),
            Self::Point(..) => None,
        }
    }

    fn from_generalized(g: &GeneralizedCircle) -> Result<Self, ChartError> {
        let [alpha, beta, gamma, delta] = g;
        if alpha.is_zero() {
            return Self::line(beta.clone(), gamma.clone(), delta.clone());
        }
        let two_alpha = int(2) * alpha;
        let cx = -beta / &two_alpha;
        let cy = -gamma / &two_alpha;
        let r2 = &cx * &cx + &cy * &cy - delta / alpha;
        Self::circle((cx, cy), r2)
    }

    /// The defining polynomial (`0` for points).
    pub fn equation(&self, vars: &VarPair) -> BiPoly {
        match self.generalized() {
            Some([alpha, beta, gamma, delta]) => BiPoly::from_terms(
                vars,
                [
                    (2, 0, alpha.clone()),
                    (0, 2, alpha),
                    (1, 0, beta),
                    (0, 1, gamma),
                    (0, 0, delta),
                ],
            ),
            None => BiPoly::zero(vars),
        }
    }

    /// Human-readable equation, e.g. `u + 2 = 0` or `(2, 2)`.
    pub fn equation_text(&self, vars: &VarPair) -> String {
        match self {
            Self::Point(a, b) => format!("({}, {})", fmt_rational(a), fmt_rational(b)),
            _ => format!("{} = 0", self.equation(vars)),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, p: (&Rational, &Rational)) -> bool {
        match self {
            Self::Point(a, b) => a == p.0 && b == p.1,
            _ => self.equation(&VarPair::xy()).eval(p.0, p.1).is_zero(),
        }
    }

    pub fn passes_through_origin(&self) -> bool {
        self.contains((&Rational::zero(), &Rational::zero()))
    }

    /// Up to `count` distinct rational points of the curve other than the
    /// origin. Empty for circles whose radius is irrational.
    pub fn rational_samples(&self, count: usize) -> Vec<(Rational, Rational)> {
        let params = (1..).flat_map(|i: i64| [rat_pair(i, 3), rat_pair(-i, 3)]).take(4 * count + 8);
        let origin = (Rational::zero(), Rational::zero());
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        let candidates: Box<dyn Iterator<Item = (Rational, Rational)>> = match self {
            Self::Point(a, b) => Box::new(std::iter::once((a.clone(), b.clone()))),
            Self::Line { a, b, c } => {
                let (a, b, c) = (a.clone(), b.clone(), c.clone());
                Box::new(params.map(move |t| {
                    if b.is_zero() {
                        (-&c / &a, t)
                    } else {
                        let y = -(&a * &t + &c) / &b;
                        (t, y)
                    }
                }))
            }
            Self::Circle { center, r2 } => {
                let Some(r) = rational_sqrt(r2) else {
                    return Vec::new();
                };
                let (cx, cy) = center.clone();
                let zero = std::iter::once(Rational::zero());
                Box::new(zero.chain(params).map(move |t| {
                    let d = Rational::one() + &t * &t;
                    (
                        &cx + &r * (Rational::one() - &t * &t) / &d,
                        &cy + &r * int(2) * &t / &d,
                    )
                }))
            }
        };
        for p in candidates {
            if out.len() == count {
                break;
            }
            if p != origin && !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let q = |r: &Rational| Value::String(fmt_rational(r));
        match self {
            Self::Circle { center, r2 } => json!({
                "kind": "circle",
                "center": [q(&center.0), q(&center.1)],
                "r2": q(r2),
            }),
            Self::Line { a, b, c } => json!({"kind": "line", "a": q(a), "b": q(b), "c": q(c)}),
            Self::Point(a, b) => json!({"kind": "point", "at": [q(a), q(b)]}),
        }
    }
}

fn rat_pair(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Image of a curve under the transition map. Circles and lines are treated
/// uniformly as generalized circles
/// `alpha (x^2+y^2) + beta x + gamma y + delta = 0`, whose image is
/// `delta (u^2+v^2) + 4 beta u + 4 gamma v + 16 alpha = 0`.
pub fn map_curve(curve: &CurveDescriptor) -> Result<CurveImage, ChartError> {
    match curve {
        CurveDescriptor::Point(a, b) => Ok(match transition((a, b)) {
            Ok((u, v)) => CurveImage::Curve(CurveDescriptor::Point(u, v)),
            Err(_) => CurveImage::Infinity,
        }),
        _ => {
            let [alpha, beta, gamma, delta] = curve.generalized().expect("circle or line");
            let image = [delta, int(4) * beta, int(4) * gamma, int(16) * alpha];
            CurveDescriptor::from_generalized(&image).map(CurveImage::Curve)
        }
    }
}

/// The case label (`a`..`g`) of a curve in the classification of images:
/// a) circle through the origin, b) other off-center circle, c) circle
/// centered at the origin, d) point, e) line through the origin, f)
/// coordinate axis, g) line missing the origin.
pub fn curve_case(curve: &CurveDescriptor) -> char {
    match curve {
        CurveDescriptor::Circle { center, .. } => {
            if center.0.is_zero() && center.1.is_zero() {
                'c'
            } else if curve.passes_through_origin() {
                'a'
            } else {
                'b'
            }
        }
        CurveDescriptor::Point(..) => 'd',
        CurveDescriptor::Line { a, b, c } => {
            if !c.is_zero() {
                'g'
            } else if a.is_zero() || b.is_zero() {
                'f'
            } else {
                'e'
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn q(n: i64) -> Rational {
        int(n)
    }

    #[test]
    fn projections() {
        let z = q(0);
        assert_eq!(stereo_project(ChartTag::North, (&z, &z)), SpherePoint::new(q(0), q(0), q(-1)));
        assert_eq!(stereo_project(ChartTag::North, (&q(2), &z)), SpherePoint::new(q(1), q(0), q(0)));
        assert_eq!(stereo_project(ChartTag::South, (&z, &z)), SpherePoint::new(q(0), q(0), q(1)));
        let east = SpherePoint::new(q(1), q(0), q(0));
        assert_eq!(chart_project(ChartTag::North, &east), Ok((q(2), q(0))));
        let north = SpherePoint::new(q(0), q(0), q(1));
        assert_eq!(chart_project(ChartTag::North, &north), Err(ChartError::PoleExcluded));
        assert_eq!(chart_project(ChartTag::South, &north), Ok((q(0), q(0))));
    }

    #[test]
    fn transition_examples() {
        assert_eq!(transition((&q(2), &q(0))), Ok((q(2), q(0))));
        assert_eq!(transition((&q(1), &q(0))), Ok((q(4), q(0))));
        assert_eq!(transition((&q(0), &q(0))), Err::<(Rational, Rational), _>(ChartError::OriginSingularity));
        assert_eq!(
            transition_extended(&ExtendedPoint::Finite(q(0), q(0))),
            ExtendedPoint::<Rational>::Infinity
        );
        let j = transition_jacobian((&q(1), &q(0))).unwrap();
        assert_eq!(j, [[q(-4), q(0)], [q(0), q(4)]]);
    }

    #[test]
    fn jacobian_minors() {
        assert_eq!(psi_jacobians(ChartTag::North, (&q(0), &q(0))), (q(1), q(0), q(0)));
        assert_eq!(psi_jacobians(ChartTag::North, (&q(2), &q(0))), (q(0), q(0), rat(-1, 4)));
    }

    #[test]
    fn line_normalization() {
        let l = CurveDescriptor::line(rat(-1, 2), q(0), q(-1)).unwrap();
        assert_eq!(l, CurveDescriptor::Line { a: q(1), b: q(0), c: q(2) });
        assert!(CurveDescriptor::line(q(0), q(0), q(1)).is_err());
    }

    #[test]
    fn curve_images() {
        let xy = VarPair::xy();
        let uv = VarPair::uv();
        let a = CurveDescriptor::circle((q(-1), q(0)), q(1)).unwrap();
        let CurveImage::Curve(img) = map_curve(&a).unwrap() else { panic!() };
        assert_eq!(img, CurveDescriptor::line(q(1), q(0), q(2)).unwrap());
        assert_eq!(img.equation_text(&uv), "u + 2 = 0");
        assert_eq!(curve_case(&a), 'a');

        // the circle of radius 2 is pointwise fixed
        let c = CurveDescriptor::circle((q(0), q(0)), q(4)).unwrap();
        assert_eq!(map_curve(&c).unwrap(), CurveImage::Curve(c.clone()));

        let p = CurveDescriptor::point(q(1), q(1));
        assert_eq!(map_curve(&p).unwrap(), CurveImage::Curve(CurveDescriptor::point(q(2), q(2))));
        assert_eq!(map_curve(&CurveDescriptor::point(q(0), q(0))).unwrap(), CurveImage::Infinity);

        let f = CurveDescriptor::line(q(1), q(0), q(0)).unwrap();
        assert_eq!(map_curve(&f).unwrap(), CurveImage::Curve(f.clone()));
        assert_eq!(curve_case(&f), 'f');
        assert_eq!(f.equation_text(&xy), "x = 0");
    }

    #[test]
    fn samples_lie_on_curves() {
        let curves = [
            CurveDescriptor::circle((q(3), q(-1)), rat(9, 4)).unwrap(),
            CurveDescriptor::line(q(2), q(-3), q(5)).unwrap(),
            CurveDescriptor::line(q(0), q(1), q(0)).unwrap(),
        ];
        for curve in &curves {
            let pts = curve.rational_samples(10);
            assert_eq!(pts.len(), 10);
            assert!(pts.iter().all(|(a, b)| curve.contains((a, b))));
        }
        assert!(CurveDescriptor::circle((q(0), q(0)), q(2)).unwrap().rational_samples(5).is_empty());
    }
}
