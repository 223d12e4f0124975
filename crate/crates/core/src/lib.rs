//! Stereographically conjugate planar polynomial differential systems.
//!
//! A planar system `dx/dt = P(x, y), dy/dt = Q(x, y)` is pushed through the
//! Bendixson transformation `(x, y) -> 4(x, y)/(x^2 + y^2)` (the transition
//! map between the two stereographic charts of the unit sphere). After
//! removing the common power of the circle factor `u^2 + v^2` the result is a
//! polynomial system on the partner chart whose origin describes the point at
//! infinity of the original plane.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: exact bivariate polynomials over arbitrary-precision rationals.
//! - [`parse`]: polynomial and system text/JSON parsing.
//! - [`conjugate`]: the conjugate system, its reduction and cross-checks.
//! - [`charts`]: stereographic projections, transition maps, curve images.
//! - [`analyze`]: equilibria, linear classification, infinity status, symmetry.
//! - [`dynamics`]: adaptive Dormand–Prince integration and closed-orbit tests.
//! - [`atlas`]: the two-disk trajectory atlas and its SVG rendering.
//! - [`oracle`]: the embedded corpus of worked conjugate pairs.

pub mod analyze;
pub mod atlas;
pub mod charts;
pub mod conjugate;
pub mod dynamics;
pub mod oracle;
pub mod parse;
pub mod poly;

pub use analyze::{EquilibriumClass, InfinityStatus, SymmetryKind};
pub use charts::{ChartTag, CurveDescriptor, CurveImage, ExtendedPoint, SpherePoint};
pub use conjugate::{ConjugationResult, DiffSystem};
pub use dynamics::{IntegratorConfig, Termination, Trajectory};
pub use parse::{parse_polynomial, parse_system, SystemSpec};
pub use poly::{BiPoly, Monomial, Rational, VarPair};
