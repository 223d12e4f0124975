//! Equilibria, linear classification, the status of the infinitely remote
//! point, and the five reflection symmetries of the phase field.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::conjugate::{conjugate, ConjugateError, DiffSystem};
use crate::poly::{fmt_rational, int, BiPoly, Rational};

pub type Matrix2 = [[Rational; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Simple,
    Dicritical,
    /// Repeated eigenvalue with a single eigendirection.
    Degenerate,
}

/// Type of an equilibrium as read off its linear part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumClass {
    Saddle,
    Node { stable: bool, kind: NodeKind },
    Focus { stable: bool },
    /// Purely imaginary eigenvalues. Not a certified center.
    CenterLinear,
    /// Singular linear part.
    Degenerate,
}

impl EquilibriumClass {
    pub fn name(&self) -> String {
        let stability = |stable: &bool| if *stable { "stable" } else { "unstable" };
        match self {
            Self::Saddle => "saddle".into(),
            Self::Node { stable, kind } => {
                let kind = match kind {
                    NodeKind::Simple => "",
                    NodeKind::Dicritical => "dicritical ",
                    NodeKind::Degenerate => "degenerate ",
                };
                format!("{} {kind}node", stability(stable))
            }
            Self::Focus { stable } => format!("{} focus", stability(stable)),
            Self::CenterLinear => "center-linear".into(),
            Self::Degenerate => "degenerate".into(),
        }
    }
}

impl fmt::Display for EquilibriumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for EquilibriumClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let all = [
            Self::Saddle,
            Self::CenterLinear,
            Self::Degenerate,
            Self::Focus { stable: true },
            Self::Focus { stable: false },
        ]
        .into_iter()
        .chain([true, false].into_iter().flat_map(|stable| {
            [NodeKind::Simple, NodeKind::Dicritical, NodeKind::Degenerate]
                .map(|kind| Self::Node { stable, kind })
        }));
        for class in all {
            if class.name() == s {
                return Ok(class);
            }
        }
        Err(format!("unknown equilibrium class `{s}`"))
    }
}

pub fn is_equilibrium(sys: &DiffSystem, point: (&Rational, &Rational)) -> bool {
    sys.eval(point.0, point.1).iter().all(Zero::is_zero)
}

pub fn jacobian_at(sys: &DiffSystem, point: (&Rational, &Rational)) -> Matrix2 {
    let (a, b) = point;
    let row = |f: &BiPoly| [f.derivative(0).eval(a, b), f.derivative(1).eval(a, b)];
    [row(sys.p()), row(sys.q())]
}

/// Classification by trace and determinant; a nonzero multiple of the
/// identity is recognized before the discriminant split.
pub fn classify_linear(j: &Matrix2) -> EquilibriumClass {
    let [[a, b], [c, d]] = j;
    let tr = a + d;
    let det = a * d - b * c;
    if det.is_negative() {
        return EquilibriumClass::Saddle;
    }
    if b.is_zero() && c.is_zero() && a == d && !a.is_zero() {
        return EquilibriumClass::Node {
            stable: a.is_negative(),
            kind: NodeKind::Dicritical,
        };
    }
    if det.is_zero() {
        return EquilibriumClass::Degenerate;
    }
    if tr.is_zero() {
        return EquilibriumClass::CenterLinear;
    }
    let stable = tr.is_negative();
    let disc = &tr * &tr - int(4) * &det;
    if disc.is_positive() {
        EquilibriumClass::Node {
            stable,
            kind: NodeKind::Simple,
        }
    } else if disc.is_zero() {
        EquilibriumClass::Node {
            stable,
            kind: NodeKind::Degenerate,
        }
    } else {
        EquilibriumClass::Focus { stable }
    }
}

/// `None` when the point is regular, otherwise the class of the equilibrium.
pub fn point_status(sys: &DiffSystem, point: (&Rational, &Rational)) -> Option<EquilibriumClass> {
    is_equilibrium(sys, point).then(|| classify_linear(&jacobian_at(sys, point)))
}

/// Status of the infinitely remote point, read off the conjugate's origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityStatus {
    /// `None` for a regular point.
    pub class: Option<EquilibriumClass>,
    pub conjugate_linear_part: Matrix2,
}

impl InfinityStatus {
    pub fn is_regular(&self) -> bool {
        self.class.is_none()
    }

    pub fn status_name(&self) -> &'static str {
        if self.is_regular() {
            "regular"
        } else {
            "equilibrium"
        }
    }

    pub fn to_json(&self) -> Value {
        let m: Vec<Vec<String>> = self
            .conjugate_linear_part
            .iter()
            .map(|row| row.iter().map(fmt_rational).collect())
            .collect();
        json!({
            "status": self.status_name(),
            "class": self.class.map(|c| c.name()),
            "conjugate_linear_part": m,
        })
    }
}

pub fn infinite_point_status(sys: &DiffSystem) -> Result<InfinityStatus, ConjugateError> {
    let result = conjugate(sys)?;
    let zero = Rational::zero();
    let origin = (&zero, &zero);
    Ok(InfinityStatus {
        class: point_status(&result.conjugate, origin),
        conjugate_linear_part: jacobian_at(&result.conjugate, origin),
    })
}

/// The five reflections whose phase-portrait symmetry is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryKind {
    Origin,
    AxisFirst,
    AxisSecond,
    Diagonal,
    Antidiagonal,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 5] = [
        Self::Origin,
        Self::AxisFirst,
        Self::AxisSecond,
        Self::Diagonal,
        Self::Antidiagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Origin => "origin",
            Self::AxisFirst => "axis-first",
            Self::AxisSecond => "axis-second",
            Self::Diagonal => "diagonal",
            Self::Antidiagonal => "antidiagonal",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown symmetry `{s}`"))
    }
}

/// The polynomial whose vanishing is equivalent to the symmetry:
///
/// - origin: `X(x,y) Y(-x,-y) - X(-x,-y) Y(x,y)`
/// - axis-first (`y -> -y`): `X(x,y) Y(x,-y) + X(x,-y) Y(x,y)`
/// - axis-second (`x -> -x`): `X(x,y) Y(-x,y) + X(-x,y) Y(x,y)`
/// - diagonal: `X(x,y) X(y,x) - Y(x,y) Y(y,x)`
/// - antidiagonal: `X(-x,-y) X(y,x) - Y(-x,-y) Y(y,x)`
pub fn symmetry_identity(sys: &DiffSystem, kind: SymmetryKind) -> BiPoly {
    let (x, y) = (sys.p(), sys.q());
    match kind {
        SymmetryKind::Origin => &(x * &y.reflect(true, true)) - &(&x.reflect(true, true) * y),
        SymmetryKind::AxisFirst => &(x * &y.reflect(false, true)) + &(&x.reflect(false, true) * y),
        SymmetryKind::AxisSecond => &(x * &y.reflect(true, false)) + &(&x.reflect(true, false) * y),
        SymmetryKind::Diagonal => &(x * &x.swap()) - &(y * &y.swap()),
        SymmetryKind::Antidiagonal => {
            &(&x.reflect(true, true) * &x.swap()) - &(&y.reflect(true, true) * &y.swap())
        }
    }
}

pub fn check_symmetry(sys: &DiffSystem, kind: SymmetryKind) -> bool {
    symmetry_identity(sys, kind).is_zero()
}

/// All kinds for which the system is symmetric, in [`SymmetryKind::ALL`] order.
pub fn symmetries(sys: &DiffSystem) -> Vec<SymmetryKind> {
    SymmetryKind::ALL
        .into_iter()
        .filter(|k| check_symmetry(sys, *k))
        .collect()
}
