//! The stereographically conjugate system.
//!
//! Pushing `dx/dt = P, dy/dt = Q` through `(x, y) -> 4(x, y)/(x^2 + y^2)` and
//! clearing denominators gives the raw pair `(U0, V0)`. The reduced pair is
//! `(U0, V0) / s^k` where `s = u^2 + v^2` and `k` is the largest power of `s`
//! dividing both; time is rescaled by `s^m dtau = dt` with `m = n - k`.
//!
//! The direct path (raw pair + repeated circle division) is the one used for
//! results. The closed form through the `K_r`, `Q_r` quotients is kept as an
//! independent cross-check.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::parse::SystemSpec;
use crate::poly::{int, is_coprime, rat, BiPoly, PolyError, Rational, VarPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugateError {
    #[error("both components of the field are zero")]
    ZeroField,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the K_r/Q_r quotient for r = {0} is not exact")]
    NotDivisible(u32),
    #[error("k = {k} is outside 1 <= k <= (n + 2)/2 for n = {n}")]
    KOutOfRange { k: u32, n: u32 },
    #[error("the point or its image is the chart origin")]
    OriginSingularity,
}

/// A planar polynomial system `d(first)/dt = P, d(second)/dt = Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffSystem {
    rhs: [BiPoly; 2],
    degree: u32,
    coprime: bool,
}

impl DiffSystem {
    pub fn new(p: BiPoly, q: BiPoly) -> Result<Self, ConjugateError> {
        if p.vars() != q.vars() {
            return Err(PolyError::VarMismatch(p.vars().clone(), q.vars().clone()).into());
        }
        if p.is_zero() && q.is_zero() {
            return Err(ConjugateError::ZeroField);
        }
        let degree = p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0));
        let coprime = is_coprime(&p, &q)?;
        Ok(Self {
            rhs: [p, q],
            degree,
            coprime,
        })
    }

    pub fn vars(&self) -> &VarPair {
        self.rhs[0].vars()
    }

    pub fn rhs(&self) -> &[BiPoly; 2] {
        &self.rhs
    }

    pub fn p(&self) -> &BiPoly {
        &self.rhs[0]
    }

    pub fn q(&self) -> &BiPoly {
        &self.rhs[1]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Whether `P` and `Q` share no nonconstant factor. Recorded, not enforced.
    pub fn is_coprime(&self) -> bool {
        self.coprime
    }

    /// Same system written in other variable names.
    pub fn with_vars(&self, vars: &VarPair) -> Self {
        Self {
            rhs: [self.rhs[0].with_vars(vars), self.rhs[1].with_vars(vars)],
            degree: self.degree,
            coprime: self.coprime,
        }
    }

    /// Exact field value at a rational point.
    pub fn eval(&self, a: &Rational, b: &Rational) -> [Rational; 2] {
        [self.rhs[0].eval(a, b), self.rhs[1].eval(a, b)]
    }

    pub fn eval_f64(&self, a: f64, b: f64) -> [f64; 2] {
        [self.rhs[0].eval_f64(a, b), self.rhs[1].eval_f64(a, b)]
    }

    /// Canonical textual form, suitable for re-parsing.
    pub fn to_spec(&self) -> SystemSpec {
        SystemSpec::new(
            [self.vars().first(), self.vars().second()],
            [&self.rhs[0].to_string(), &self.rhs[1].to_string()],
        )
    }

    /// `(X_j, Y_j)`: the degree-`j` homogeneous forms of the two sides.
    pub fn homogeneous_forms(&self, j: u32) -> (BiPoly, BiPoly) {
        (self.rhs[0].homogeneous_part(j), self.rhs[1].homogeneous_part(j))
    }
}

impl fmt::Display for DiffSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d{}/dt = {}, d{}/dt = {}",
            self.vars().first(),
            self.rhs[0],
            self.vars().second(),
            self.rhs[1]
        )
    }
}

impl fmt::Debug for DiffSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffSystem(n = {}; {})", self.degree, self)
    }
}

/// Outcome of dividing `W_n = x*Y_n - y*X_n` by the circle factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WnDivisibility {
    pub divisible: bool,
    /// The quotient when divisible, otherwise the nonzero remainder.
    pub poly: BiPoly,
}

pub fn wn_polynomial(sys: &DiffSystem) -> BiPoly {
    let vars = sys.vars();
    let (xn, yn) = sys.homogeneous_forms(sys.degree());
    let x = BiPoly::var(vars, 0);
    let y = BiPoly::var(vars, 1);
    &(&x * &yn) - &(&y * &xn)
}

pub fn wn_divisibility(sys: &DiffSystem) -> WnDivisibility {
    let (q, r) = wn_polynomial(sys).circle_divrem();
    if r.is_zero() {
        WnDivisibility {
            divisible: true,
            poly: q,
        }
    } else {
        WnDivisibility {
            divisible: false,
            poly: r,
        }
    }
}

/// `sum_j s^(n-j) F_j(4u, 4v)` over `j <= top`, each term also divided by
/// `s^shift` (requires `n - top >= shift`).
fn circle_weighted_sum(f: &BiPoly, n: u32, top: Option<u32>, shift: u32, vars: &VarPair) -> BiPoly {
    let s = BiPoly::circle(vars);
    let scaled = f.with_vars(vars).rescale(&int(4));
    let mut acc = BiPoly::zero(vars);
    let Some(top) = top else {
        return acc;
    };
    // Horner in s: after processing j, acc = sum_{i<=j} s^(j-i) F_i
    for j in 0..=top {
        acc = &(&acc * &s) + &scaled.homogeneous_part(j);
    }
    &acc * &s.pow(n - top - shift)
}

/// The quadratic multipliers `((v^2-u^2)/4, -uv/2, (u^2-v^2)/4)` of the raw pair.
fn raw_multipliers(vars: &VarPair) -> (BiPoly, BiPoly, BiPoly) {
    let a = BiPoly::from_terms(vars, [(0, 2, rat(1, 4)), (2, 0, rat(-1, 4))]);
    let b = BiPoly::from_terms(vars, [(1, 1, rat(-1, 2))]);
    let c = -&a;
    (a, b, c)
}

/// `(U0, V0)` in the given target variables.
pub fn raw_conjugate_into(sys: &DiffSystem, vars: &VarPair) -> (BiPoly, BiPoly) {
    let n = sys.degree();
    let sx = circle_weighted_sum(sys.p(), n, Some(n), 0, vars);
    let sy = circle_weighted_sum(sys.q(), n, Some(n), 0, vars);
    let (a, b, c) = raw_multipliers(vars);
    let u0 = &(&a * &sx) + &(&b * &sy);
    let v0 = &(&b * &sx) + &(&c * &sy);
    (u0, v0)
}

/// `(U0, V0)` in the partner variables.
pub fn raw_conjugate(sys: &DiffSystem) -> (BiPoly, BiPoly) {
    raw_conjugate_into(sys, &sys.vars().partner())
}

/// Reduced conjugate system with its reduction data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationResult {
    pub conjugate: DiffSystem,
    pub raw: [BiPoly; 2],
    pub k: u32,
    pub m: u32,
}

impl ConjugationResult {
    /// The reparametrization, e.g. `(u^2+v^2)^1 dtau = dt`.
    pub fn time_relation(&self) -> String {
        let vars = self.conjugate.vars();
        format!("({}^2+{}^2)^{} dtau = dt", vars.first(), vars.second(), self.m)
    }
}

pub fn conjugate(sys: &DiffSystem) -> Result<ConjugationResult, ConjugateError> {
    conjugate_into(sys, &sys.vars().partner())
}

pub fn conjugate_into(sys: &DiffSystem, vars: &VarPair) -> Result<ConjugationResult, ConjugateError> {
    let (u0, v0) = raw_conjugate_into(sys, vars);
    if u0.is_zero() && v0.is_zero() {
        return Err(ConjugateError::ZeroField);
    }
    let k = u0.circle_valuation().min(v0.circle_valuation());
    let (mut u, mut v) = (u0.clone(), v0.clone());
    for _ in 0..k {
        u = u.divide_exact_by_circle()?;
        v = v.divide_exact_by_circle()?;
    }
    let m = sys
        .degree()
        .checked_sub(k)
        .ok_or(ConjugateError::KOutOfRange { k, n: sys.degree() })?;
    Ok(ConjugationResult {
        conjugate: DiffSystem::new(u, v)?,
        raw: [u0, v0],
        k,
        m,
    })
}

/// The quotients `K_r`, `Q_r` for `r = 1..=k`, in the system's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrDecomposition {
    pub k_polys: Vec<BiPoly>,
    pub q_polys: Vec<BiPoly>,
}

pub fn kr_decomposition(sys: &DiffSystem, k: u32) -> Result<KrDecomposition, ConjugateError> {
    let n = sys.degree();
    if k == 0 || 2 * k > n + 2 {
        return Err(ConjugateError::KOutOfRange { k, n });
    }
    let vars = sys.vars();
    let x = BiPoly::var(vars, 0);
    let y = BiPoly::var(vars, 1);
    let s = BiPoly::circle(vars);
    let two = int(2);
    let mut k_polys = Vec::new();
    let mut q_polys = Vec::new();
    for r in 1..=k {
        let (xj, yj) = sys.homogeneous_forms(n + 1 - r);
        let w = &(&x * &yj) - &(&y * &xj);
        let mut kr = &(&y * &w).scale(&-&two) - &(&s * &xj);
        let mut qr = &(&x * &w).scale(&two) - &(&s * &yj);
        for _ in 0..(k - r + 1) {
            kr = kr.divide_exact_by_circle().map_err(|_| ConjugateError::NotDivisible(r))?;
            qr = qr.divide_exact_by_circle().map_err(|_| ConjugateError::NotDivisible(r))?;
        }
        k_polys.push(kr);
        q_polys.push(qr);
    }
    Ok(KrDecomposition { k_polys, q_polys })
}

/// Assembles the reduced pair at circle power `k` from the `K_r`, `Q_r`
/// quotients: the low-degree forms `j <= n - k` contribute directly, the top
/// `k` forms through `4^(2k-2r-1) K_r(4u, 4v)`.
pub fn rebuild_from_kr(sys: &DiffSystem, k: u32) -> Result<(BiPoly, BiPoly), ConjugateError> {
    rebuild_from_kr_into(sys, k, &sys.vars().partner())
}

pub fn rebuild_from_kr_into(
    sys: &DiffSystem,
    k: u32,
    vars: &VarPair,
) -> Result<(BiPoly, BiPoly), ConjugateError> {
    let decomposition = kr_decomposition(sys, k)?;
    let n = sys.degree();
    let top = (n >= k).then(|| n - k);
    let sx = circle_weighted_sum(sys.p(), n, top, k, vars);
    let sy = circle_weighted_sum(sys.q(), n, top, k, vars);
    let (a, b, c) = raw_multipliers(vars);
    let mut u = &(&a * &sx) + &(&b * &sy);
    let mut v = &(&b * &sx) + &(&c * &sy);
    let four = int(4);
    for (idx, (kr, qr)) in decomposition
        .k_polys
        .iter()
        .zip(&decomposition.q_polys)
        .enumerate()
    {
        let r = idx as i64 + 1;
        let e = 2 * k as i64 - 2 * r - 1;
        let weight = if e >= 0 {
            num_traits::pow(four.clone(), e as usize)
        } else {
            num_traits::pow(four.clone(), (-e) as usize).recip()
        };
        u = &u + &kr.with_vars(vars).rescale(&four).scale(&weight);
        v = &v + &qr.with_vars(vars).rescale(&four).scale(&weight);
    }
    Ok((u, v))
}

/// `J(p) * F(p) - G(q) / s_q^m` with `q` the transition image of `p`, where
/// `F` is the original field and `G` the reduced conjugate. Zero when the
/// conjugate is correct.
pub fn pushforward_residual(
    sys: &DiffSystem,
    result: &ConjugationResult,
    point: (&Rational, &Rational),
) -> Result<[Rational; 2], ConjugateError> {
    let (a, b) = point;
    let r2 = a * a + b * b;
    if r2.is_zero() {
        return Err(ConjugateError::OriginSingularity);
    }
    let r4 = &r2 * &r2;
    let four = int(4);
    let qa = &four * a / &r2;
    let qb = &four * b / &r2;
    let [p, q] = sys.eval(a, b);
    let j11 = &four * (b * b - a * a) / &r4;
    let j12 = int(-8) * a * b / &r4;
    let j22 = -&j11;
    let push = [&j11 * &p + &j12 * &q, &j12 * &p + &j22 * &q];
    let sq = &qa * &qa + &qb * &qb;
    let factor = num_traits::pow(sq, result.m as usize);
    let [gu, gv] = result.conjugate.eval(&qa, &qb);
    Ok([&push[0] - gu / &factor, &push[1] - gv / &factor])
}

/// True when both residual components vanish.
pub fn residual_is_zero(residual: &[Rational; 2]) -> bool {
    residual.iter().all(Zero::is_zero)
}

/// `16^m`, the factor by which conjugating twice rescales the field.
pub fn involution_factor(m: u32) -> Rational {
    num_traits::pow(int(16), m as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn sys(vars: &VarPair, p: &str, q: &str) -> DiffSystem {
        DiffSystem::new(parse_polynomial(p, vars).unwrap(), parse_polynomial(q, vars).unwrap()).unwrap()
    }

    fn xy(p: &str, q: &str) -> DiffSystem {
        sys(&VarPair::xy(), p, q)
    }

    fn uv(s: &str) -> BiPoly {
        parse_polynomial(s, &VarPair::uv()).unwrap()
    }

    #[test]
    fn wn_dichotomy() {
        let radial = wn_divisibility(&xy("x", "y"));
        assert!(radial.divisible && radial.poly.is_zero());
        let saddle = wn_divisibility(&xy("x", "-y"));
        assert!(!saddle.divisible);
        assert_eq!(saddle.poly, parse_polynomial("-2*x*y", &VarPair::xy()).unwrap());
        let rotation = wn_divisibility(&xy("y", "-x"));
        assert!(rotation.divisible);
        assert_eq!(rotation.poly, parse_polynomial("-1", &VarPair::xy()).unwrap());
    }

    #[test]
    fn raw_pairs() {
        let (u0, v0) = raw_conjugate(&xy("x", "y"));
        assert_eq!(u0, uv("-u*(u^2+v^2)"));
        assert_eq!(v0, uv("-v*(u^2+v^2)"));
        let (u0, v0) = raw_conjugate(&xy("x", "-y"));
        assert_eq!(u0, uv("-u^3 + 3u v^2"));
        assert_eq!(v0, uv("-3u^2 v + v^3"));
        let (u0, v0) = raw_conjugate(&xy("1", "2"));
        assert_eq!(u0, uv("-1/4 u^2 - uv + 1/4 v^2"));
        assert_eq!(v0, uv("1/2 u^2 - 1/2 uv - 1/2 v^2"));
    }

    #[test]
    fn reduced_pairs() {
        let r = conjugate(&xy("x", "y")).unwrap();
        assert_eq!((r.k, r.m), (1, 0));
        assert_eq!(r.conjugate.rhs(), &[uv("-u"), uv("-v")]);

        let r = conjugate(&xy("x", "-y")).unwrap();
        assert_eq!((r.k, r.m), (0, 1));
        assert_eq!(r.time_relation(), "(u^2+v^2)^1 dtau = dt");

        let r = conjugate(&xy("-y - x(x^2+y^2-1)", "x - y(x^2+y^2-1)")).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.conjugate.p(), &uv("16u - u^3 - u^2 v - u v^2 - v^3"));
        assert_eq!(r.conjugate.q(), &uv("16v + u^3 - u^2 v + u v^2 - v^3"));
    }

    #[test]
    fn constant_field_round_trip() {
        let original = xy("1", "2");
        let once = conjugate(&original).unwrap();
        let twice = conjugate(&once.conjugate).unwrap();
        assert_eq!((twice.k, twice.m), (2, 0));
        assert_eq!(twice.conjugate, original);
    }

    #[test]
    fn kr_quotients() {
        let d = kr_decomposition(&xy("x", "y"), 1).unwrap();
        assert_eq!(d.k_polys[0].to_string(), "-x");
        assert_eq!(d.q_polys[0].to_string(), "-y");
        let d = kr_decomposition(&xy("y", "-x"), 1).unwrap();
        assert_eq!(d.k_polys[0].to_string(), "y");
        assert_eq!(d.q_polys[0].to_string(), "-x");
        assert_eq!(kr_decomposition(&xy("x", "-y"), 1), Err(ConjugateError::NotDivisible(1)));
        assert!(matches!(
            kr_decomposition(&xy("x", "-y"), 2),
            Err(ConjugateError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn rebuild_matches_direct_path() {
        assert_eq!(rebuild_from_kr(&xy("x", "y"), 1).unwrap(), (uv("-u"), uv("-v")));
        assert_eq!(
            rebuild_from_kr(&xy("x - 1", "y - 1"), 1).unwrap(),
            (uv("-u + u^2/4 + uv/2 - v^2/4"), uv("-v - u^2/4 + uv/2 + v^2/4"))
        );
        assert_eq!(rebuild_from_kr(&xy("y", "-x"), 1).unwrap(), (uv("v"), uv("-u")));
    }

    #[test]
    fn pushforward_examples() {
        let s = xy("y", "-x");
        let r = conjugate(&s).unwrap();
        assert!(residual_is_zero(&pushforward_residual(&s, &r, (&int(1), &int(0))).unwrap()));
        let s = xy("x", "y");
        let r = conjugate(&s).unwrap();
        assert!(residual_is_zero(&pushforward_residual(&s, &r, (&int(1), &int(1))).unwrap()));
        assert_eq!(
            pushforward_residual(&s, &r, (&int(0), &int(0))),
            Err(ConjugateError::OriginSingularity)
        );
        // a wrong conjugate is caught
        let mut wrong = r.clone();
        wrong.conjugate = sys(&VarPair::uv(), "u", "v");
        assert!(!residual_is_zero(&pushforward_residual(&s, &wrong, (&int(1), &int(1))).unwrap()));
    }
}
