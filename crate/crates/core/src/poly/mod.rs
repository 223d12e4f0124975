//! Exact bivariate polynomials with arbitrary-precision rational coefficients.
//!
//! Terms are stored sparsely, keyed by exponent pair. The key ordering is the
//! canonical serialization order: descending total degree, then descending
//! exponent of the first variable.

mod resultant;
mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use resultant::resultant_second;
pub use univariate::UniPoly;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Valuation reported for the zero polynomial.
pub const INFINITE_VALUATION: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable pair mismatch: ({0}) vs ({1})")]
    VarMismatch(VarPair, VarPair),
    #[error("polynomial is not divisible by the circle factor {0}")]
    NotDivisible(String),
    #[error("coprimality is undefined when both polynomials are zero")]
    BothZero,
    #[error("invalid variable pair: {0}")]
    InvalidVars(String),
}

/// Convenience constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Ordered pair of variable names. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarPair {
    names: [Arc<str>; 2],
}

impl VarPair {
    pub fn new(first: &str, second: &str) -> Result<Self, PolyError> {
        for name in [first, second] {
            if !is_identifier(name) {
                return Err(PolyError::InvalidVars(format!("`{name}` is not an identifier")));
            }
        }
        if first == second {
            return Err(PolyError::InvalidVars(format!("both variables are named `{first}`")));
        }
        Ok(Self {
            names: [Arc::from(first), Arc::from(second)],
        })
    }

    pub fn xy() -> Self {
        Self::new("x", "y").expect("valid names")
    }

    pub fn uv() -> Self {
        Self::new("u", "v").expect("valid names")
    }

    pub fn first(&self) -> &str {
        &self.names[0]
    }

    pub fn second(&self) -> &str {
        &self.names[1]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// Default variable pair of the stereographically conjugate plane:
    /// `(u, v)` for every pair except `(u, v)` itself, which maps to `(x, y)`.
    pub fn partner(&self) -> Self {
        if self.first() == "u" && self.second() == "v" {
            Self::xy()
        } else {
            Self::uv()
        }
    }
}

impl fmt::Debug for VarPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first(), self.second())
    }
}

impl fmt::Display for VarPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.first(), self.second())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent pair `first^i * second^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub first: u32,
    pub second: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { first: 0, second: 0 };

    pub fn new(first: u32, second: u32) -> Self {
        Self { first, second }
    }

    pub fn degree(&self) -> u32 {
        self.first + self.second
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then(other.first.cmp(&self.first))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact bivariate polynomial.
///
/// Invariant: no stored coefficient is zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    vars: VarPair,
    terms: BTreeMap<Monomial, Rational>,
}

impl BiPoly {
    pub fn zero(vars: &VarPair) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarPair, c: Rational) -> Self {
        Self::monomial(vars, Monomial::ONE, c)
    }

    pub fn one(vars: &VarPair) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The variable with the given index (0 = first, 1 = second).
    pub fn var(vars: &VarPair, index: usize) -> Self {
        let m = if index == 0 {
            Monomial::new(1, 0)
        } else {
            Monomial::new(0, 1)
        };
        Self::monomial(vars, m, Rational::one())
    }

    pub fn monomial(vars: &VarPair, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builds a polynomial from `(first_exp, second_exp, coefficient)` triples,
    /// summing repeated exponents.
    pub fn from_terms<I>(vars: &VarPair, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    /// `first^2 + second^2`.
    pub fn circle(vars: &VarPair) -> Self {
        Self::from_terms(vars, [(2, 0, Rational::one()), (0, 2, Rational::one())])
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &VarPair {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Degree in the given variable (0 = first, 1 = second).
    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| if index == 0 { m.first } else { m.second })
            .max()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(Monomial::ONE)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Same coefficients, new variable names.
    pub fn with_vars(&self, vars: &VarPair) -> Self {
        Self {
            vars: vars.clone(),
            terms: self.terms.clone(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.vars.clone(), other.vars.clone()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial::new(ma.first + mb.first, ma.second + mb.second);
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `first^a * second^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.first + a, m.second + b), c.clone()))
                .collect(),
        }
    }

    /// `p(lambda * first, lambda * second)`.
    pub fn rescale(&self, lambda: &Rational) -> Self {
        let mut powers: Vec<Rational> = vec![Rational::one()];
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let d = m.degree() as usize;
                    while powers.len() <= d {
                        let next = powers.last().unwrap() * lambda;
                        powers.push(next);
                    }
                    (*m, c * &powers[d])
                })
                .collect(),
        }
    }

    /// `p(s1 * first, s2 * second)` for signs `s1, s2` in `{+1, -1}`.
    pub fn reflect(&self, negate_first: bool, negate_second: bool) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let odd = (negate_first && m.first % 2 == 1) ^ (negate_second && m.second % 2 == 1);
                    (*m, if odd { -c.clone() } else { c.clone() })
                })
                .collect(),
        }
    }

    /// `p(second, first)`.
    pub fn swap(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.second, m.first), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let (e, dm) = if index == 0 {
                (m.first, Monomial::new(m.first.saturating_sub(1), m.second))
            } else {
                (m.second, Monomial::new(m.first, m.second.saturating_sub(1)))
            };
            if e > 0 {
                out.add_term(dm, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        let mut pa: Vec<Rational> = vec![Rational::one()];
        let mut pb: Vec<Rational> = vec![Rational::one()];
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            while pa.len() <= m.first as usize {
                let next = pa.last().unwrap() * a;
                pa.push(next);
            }
            while pb.len() <= m.second as usize {
                let next = pb.last().unwrap() * b;
                pb.push(next);
            }
            acc += c * &pa[m.first as usize] * &pb[m.second as usize];
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * a.powi(m.first as i32) * b.powi(m.second as i32))
            .sum()
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components in strictly increasing degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, BiPoly)> {
        let mut by_degree: BTreeMap<u32, BiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_degree
                .entry(m.degree())
                .or_insert_with(|| Self::zero(&self.vars))
                .terms
                .insert(*m, c.clone());
        }
        by_degree.into_iter().collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    /// Division by `first^2 + second^2`, treating the polynomial as univariate
    /// in the second variable with coefficients in the ring of the first.
    ///
    /// Returns `(quotient, remainder)`; the remainder has degree at most one in
    /// the second variable.
    pub fn circle_divrem(&self) -> (BiPoly, BiPoly) {
        let top = match self.degree_in(1) {
            Some(d) => d as usize,
            None => return (Self::zero(&self.vars), Self::zero(&self.vars)),
        };
        // rows[j] holds the coefficient of second^j, keyed by first exponent
        let mut rows: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); top + 1];
        for (m, c) in &self.terms {
            rows[m.second as usize].insert(m.first, c.clone());
        }
        let mut quotient = Self::zero(&self.vars);
        for j in (2..=top).rev() {
            let row = std::mem::take(&mut rows[j]);
            for (i, c) in row {
                quotient.add_term(Monomial::new(i, (j - 2) as u32), c.clone());
                let target = rows[j - 2].entry(i + 2).or_insert_with(Rational::zero);
                *target -= c;
                if target.is_zero() {
                    rows[j - 2].remove(&(i + 2));
                }
            }
        }
        let mut remainder = Self::zero(&self.vars);
        for (j, row) in rows.into_iter().enumerate().take(2) {
            for (i, c) in row {
                remainder.add_term(Monomial::new(i, j as u32), c);
            }
        }
        (quotient, remainder)
    }

    /// Largest `k` such that `(first^2 + second^2)^k` divides the polynomial;
    /// [`INFINITE_VALUATION`] for the zero polynomial.
    pub fn circle_valuation(&self) -> u32 {
        if self.is_zero() {
            return INFINITE_VALUATION;
        }
        let mut k = 0;
        let mut current = self.clone();
        loop {
            let (q, r) = current.circle_divrem();
            if !r.is_zero() {
                return k;
            }
            k += 1;
            current = q;
        }
    }

    /// Exact quotient by `first^2 + second^2`.
    pub fn divide_exact_by_circle(&self) -> Result<BiPoly, PolyError> {
        let (q, r) = self.circle_divrem();
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible(self.to_string()))
        }
    }

    /// Rewrites the polynomial as univariate in the second variable with
    /// coefficients in `Q[first]`; entry `j` is the coefficient of `second^j`.
    pub fn to_univariate_in_second(&self) -> Vec<UniPoly> {
        let top = match self.degree_in(1) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut coeffs: Vec<Vec<Rational>> = vec![Vec::new(); top + 1];
        for (m, c) in &self.terms {
            let row = &mut coeffs[m.second as usize];
            let i = m.first as usize;
            if row.len() <= i {
                row.resize(i + 1, Rational::zero());
            }
            row[i] = c.clone();
        }
        coeffs.into_iter().map(UniPoly::new).collect()
    }

    /// Multiplies by the least common multiple of the denominators, giving
    /// integer coefficients.
    pub fn clear_denominators(&self) -> BiPoly {
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        self.scale(&Rational::from_integer(lcm))
    }
}

/// True iff `a` and `b` share no nonconstant common factor.
///
/// Factors involving the second variable are detected by a vanishing
/// resultant with respect to that variable; factors free of it by the gcd of
/// the contents in `Q[first]`.
pub fn is_coprime(a: &BiPoly, b: &BiPoly) -> Result<bool, PolyError> {
    a.check_vars(b)?;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(PolyError::BothZero),
        (true, false) => return Ok(b.is_constant()),
        (false, true) => return Ok(a.is_constant()),
        _ => {}
    }
    let ua = a.to_univariate_in_second();
    let ub = b.to_univariate_in_second();
    let content_a = UniPoly::gcd_all(&ua);
    let content_b = UniPoly::gcd_all(&ub);
    if content_a.gcd(&content_b).degree().unwrap_or(0) > 0 {
        return Ok(false);
    }
    if ua.len() <= 1 || ub.len() <= 1 {
        return Ok(true);
    }
    if coprime_at_some_specialization(&ua, &ub) {
        return Ok(true);
    }
    Ok(!resultant_second(&ua, &ub).is_zero())
}

/// Sufficient test for a nonzero resultant: at a value of the first variable
/// where neither leading coefficient vanishes, the resultant specializes to
/// the resultant of the specialized polynomials, which is nonzero iff their
/// gcd is constant.
fn coprime_at_some_specialization(ua: &[UniPoly], ub: &[UniPoly]) -> bool {
    let (la, lb) = (&ua[ua.len() - 1], &ub[ub.len() - 1]);
    (0..6i64).map(|i| int(if i % 2 == 0 { i / 2 + 1 } else { -(i / 2) - 2 })).any(|x0| {
        if la.eval(&x0).is_zero() || lb.eval(&x0).is_zero() {
            return false;
        }
        let sa = UniPoly::new(ua.iter().map(|c| c.eval(&x0)).collect());
        let sb = UniPoly::new(ub.iter().map(|c| c.eval(&x0)).collect());
        sa.gcd(&sb).degree() == Some(0)
    })
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if *m == Monomial::ONE || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (name, e) in [(self.vars.first(), m.first), (self.vars.second(), m.second)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[{:?}]({})", self.vars, self)
    }
}

// Operator forms panic on a variable mismatch; use the `try_*` methods when
// the operands come from different sources.
impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.try_add(rhs).expect("BiPoly addition")
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.try_sub(rhs).expect("BiPoly subtraction")
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.try_mul(rhs).expect("BiPoly multiplication")
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> VarPair {
        VarPair::xy()
    }

    fn p(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(&xy(), terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    #[test]
    fn specialization_shortcut_agrees_with_resultant() {
        // (x - 1) y + 1 and (x - 1) y^2 + x: leading coefficients vanish at x = 1
        let pairs = [
            (p(&[(1, 1, 1), (0, 1, -1), (0, 0, 1)]), p(&[(1, 2, 1), (0, 2, -1), (1, 0, 1)])),
            (p(&[(0, 2, 1), (2, 0, -1)]), p(&[(0, 1, 1), (1, 0, 1)])),
            (p(&[(0, 2, 1), (0, 0, 1)]), p(&[(0, 1, 1), (1, 0, 1)])),
        ];
        for (a, b) in pairs {
            let (ua, ub) = (a.to_univariate_in_second(), b.to_univariate_in_second());
            let full = !resultant_second(&ua, &ub).is_zero();
            if coprime_at_some_specialization(&ua, &ub) {
                assert!(full);
            }
            assert_eq!(is_coprime(&a, &b).unwrap(), full);
        }
    }

    #[test]
    fn binomial_square() {
        let s = p(&[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(&s * &s, p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        let c = BiPoly::circle(&xy());
        assert_eq!(&c * &c, p(&[(4, 0, 1), (2, 2, 2), (0, 4, 1)]));
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let a = p(&[(3, 1, -2), (0, 0, 7)]);
        assert_eq!(&a + &BiPoly::zero(&xy()), a);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).num_terms(), 0);
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = BiPoly::var(&xy(), 0);
        let b = BiPoly::var(&VarPair::uv(), 0);
        assert!(matches!(a.try_add(&b), Err(PolyError::VarMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(PolyError::VarMismatch(..))));
    }

    #[test]
    fn evaluation() {
        let circle4 = p(&[(2, 0, 1), (0, 2, 1), (0, 0, -4)]);
        assert_eq!(circle4.eval(&int(2), &int(0)), int(0));
        let hyper = p(&[(1, 1, 1), (0, 0, -1)]);
        assert_eq!(hyper.eval(&int(1), &int(1)), int(0));
        assert_eq!(BiPoly::zero(&xy()).eval(&int(7), &int(-3)), int(0));
        assert_eq!(hyper.eval_f64(2.0, 3.0), 5.0);
    }

    #[test]
    fn homogeneous_split() {
        // -y - x(x^2 + y^2 - 1)
        let f = p(&[(3, 0, -1), (1, 2, -1), (1, 0, 1), (0, 1, -1)]);
        let comps = f.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], (1, p(&[(1, 0, 1), (0, 1, -1)])));
        assert_eq!(comps[1], (3, p(&[(3, 0, -1), (1, 2, -1)])));

        let g = p(&[(2, 0, 1), (0, 1, 1), (0, 0, -3)]);
        let degrees: Vec<u32> = g.homogeneous_components().iter().map(|c| c.0).collect();
        assert_eq!(degrees, vec![0, 1, 2]);

        let cubic = p(&[(3, 0, 2), (1, 2, -5)]);
        assert_eq!(cubic.homogeneous_components(), vec![(3, cubic.clone())]);
    }

    #[test]
    fn circle_valuation_examples() {
        assert_eq!(p(&[(3, 0, -1), (1, 2, -1)]).circle_valuation(), 1);
        assert_eq!(p(&[(3, 0, 1)]).circle_valuation(), 0);
        let c = BiPoly::circle(&xy());
        assert_eq!(c.pow(2).scale(&int(7)).circle_valuation(), 2);
        assert_eq!(BiPoly::zero(&xy()).circle_valuation(), INFINITE_VALUATION);
    }

    #[test]
    fn exact_circle_division() {
        let f = p(&[(3, 0, -1), (1, 2, -1)]);
        assert_eq!(f.divide_exact_by_circle().unwrap(), p(&[(1, 0, -1)]));
        let c = BiPoly::circle(&xy());
        assert_eq!(c.pow(2).divide_exact_by_circle().unwrap(), c);
        assert!(matches!(
            p(&[(3, 0, 1)]).divide_exact_by_circle(),
            Err(PolyError::NotDivisible(_))
        ));
    }

    #[test]
    fn coprimality_examples() {
        let x = BiPoly::var(&xy(), 0);
        let y = BiPoly::var(&xy(), 1);
        assert!(is_coprime(&x, &y).unwrap());
        let s = &x + &y;
        assert!(!is_coprime(&(&x * &s), &(&y * &s)).unwrap());
        // shared factor free of the second variable
        assert!(!is_coprime(&(&x * &y), &(&x * &(&x + &BiPoly::one(&xy())))).unwrap());
        // shared factor that is a pure power of the second variable
        assert!(!is_coprime(&(&x * &y), &(&y * &y)).unwrap());
        assert!(is_coprime(&BiPoly::one(&xy()), &BiPoly::zero(&xy())).unwrap());
        assert!(!is_coprime(&x, &BiPoly::zero(&xy())).unwrap());
        assert!(matches!(
            is_coprime(&BiPoly::zero(&xy()), &BiPoly::zero(&xy())),
            Err(PolyError::BothZero)
        ));
    }

    #[test]
    fn canonical_display() {
        let f = p(&[(3, 0, -1), (1, 2, 3)]).with_vars(&VarPair::uv());
        assert_eq!(f.to_string(), "-u^3 + 3*u*v^2");
        let g = BiPoly::from_terms(&xy(), [(2, 0, rat(1, 4)), (1, 1, rat(-1, 2)), (0, 0, int(-3))]);
        assert_eq!(g.to_string(), "1/4*x^2 - 1/2*x*y - 3");
        assert_eq!(BiPoly::zero(&xy()).to_string(), "0");
        assert_eq!(BiPoly::constant(&xy(), rat(-5, 3)).to_string(), "-5/3");
    }

    #[test]
    fn derivative_and_symmetry_helpers() {
        let f = p(&[(3, 1, 2), (0, 2, 1)]);
        assert_eq!(f.derivative(0), p(&[(2, 1, 6)]));
        assert_eq!(f.derivative(1), p(&[(3, 0, 2), (0, 1, 2)]));
        assert_eq!(f.reflect(true, false), p(&[(3, 1, -2), (0, 2, 1)]));
        assert_eq!(f.swap(), p(&[(1, 3, 2), (2, 0, 1)]));
        assert_eq!(f.rescale(&int(2)), p(&[(3, 1, 32), (0, 2, 4)]));
    }

    #[test]
    fn invalid_variable_pairs() {
        assert!(VarPair::new("x", "x").is_err());
        assert!(VarPair::new("1x", "y").is_err());
        assert_eq!(VarPair::xy().partner(), VarPair::uv());
        assert_eq!(VarPair::uv().partner(), VarPair::xy());
    }
}
