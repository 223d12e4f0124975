//! The embedded corpus of worked conjugate pairs and the checks `verify`
//! runs on each of them.
//!
//! Each case stores a system, the expected reduced conjugate (exactly), the
//! exponents, the full symmetry set, the status of the infinitely remote
//! point and known equilibria with their images. Cases whose published form
//! contains a misprint also keep the printed text, which must fail the
//! pushforward identity that the corrected form passes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::analyze::{infinite_point_status, point_status, symmetries, EquilibriumClass};
use crate::charts::transition;
use crate::conjugate::{
    conjugate, involution_factor, pushforward_residual, rebuild_from_kr, residual_is_zero, ConjugationResult,
    DiffSystem,
};
use crate::parse::{parse_polynomial_with, parse_rational, parse_system, ParamValue, SystemSpec};
use crate::poly::{Rational, VarPair};

const CORPUS_JSON: &str = include_str!("../data/corpus.json");

/// Rational sample points used for pointwise identities.
pub const SAMPLE_POINTS: usize = 20;

#[derive(Debug, Clone, Deserialize)]
pub struct EquilibriumCase {
    pub at: [String; 2],
    pub image: [String; 2],
    pub class: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OracleCase {
    pub name: String,
    pub system: SystemSpec,
    pub conjugate_vars: [String; 2],
    pub expected: [String; 2],
    #[serde(default)]
    pub printed: Option<[String; 2]>,
    #[serde(default)]
    pub note: Option<String>,
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub symmetries: Vec<String>,
    #[serde(default)]
    pub claimed_symmetries: Vec<String>,
    pub infinity: String,
    #[serde(default)]
    pub equilibria: Vec<EquilibriumCase>,
}

/// Case names grouped by what they exercise.
#[derive(Debug, Clone, Deserialize)]
pub struct CorpusRoles {
    /// Pairs that must all be present and pass.
    pub published_pairs: Vec<String>,
    pub origin_symmetric: Vec<String>,
    pub axis_symmetric: Vec<String>,
    pub diagonal_symmetric: Vec<String>,
    pub stable_dicritical_infinity: String,
    pub unstable_dicritical_infinity: String,
    pub regular_infinity: String,
    /// Linear center.
    pub center: String,
    /// A system with a limit cycle.
    pub limit_cycle: String,
    /// A system whose conjugate has an unstable cycle.
    pub unstable_cycle_image: String,
    /// Pairs used for numerical conjugacy checks.
    pub dynamics_pairs: Vec<String>,
    pub sample: String,
}

#[derive(Debug, Clone, Deserialize)]
struct Corpus {
    roles: CorpusRoles,
    cases: Vec<OracleCase>,
}

fn load() -> Corpus {
    serde_json::from_str(CORPUS_JSON).expect("embedded corpus is valid JSON")
}

pub fn corpus() -> Vec<OracleCase> {
    load().cases
}

pub fn roles() -> CorpusRoles {
    load().roles
}

/// The case with this name.
pub fn find_case(name: &str) -> Option<OracleCase> {
    corpus().into_iter().find(|c| c.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub name: String,
    pub checks: Vec<CheckOutcome>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Deterministic nonzero rational points with small denominators.
pub fn sample_points(count: usize) -> Vec<(Rational, Rational)> {
    (0..count as i64)
        .map(|i| {
            let a = Rational::new((3 * i - 7).into(), (i % 4 + 2).into());
            let b = Rational::new((5 * i % 11 - 4).into(), (i % 3 + 1).into());
            if a.is_zero() && b.is_zero() {
                (Rational::one(), b)
            } else {
                (a, b)
            }
        })
        .collect()
}

fn params_of(spec: &SystemSpec) -> Result<BTreeMap<String, Rational>, String> {
    spec.params
        .iter()
        .map(|(k, v): (&String, &ParamValue)| v.to_rational().map(|q| (k.clone(), q)).map_err(|e| e.to_string()))
        .collect()
}

fn parse_pair(texts: &[String; 2], vars: &VarPair, params: &BTreeMap<String, Rational>) -> Result<DiffSystem, String> {
    let p = parse_polynomial_with(&texts[0], vars, params).map_err(|e| e.to_string())?;
    let q = parse_polynomial_with(&texts[1], vars, params).map_err(|e| e.to_string())?;
    DiffSystem::new(p, q).map_err(|e| e.to_string())
}

fn pushforward_holds(sys: &DiffSystem, result: &ConjugationResult, points: &[(Rational, Rational)]) -> Result<bool, String> {
    for (a, b) in points {
        let r = pushforward_residual(sys, result, (a, b)).map_err(|e| e.to_string())?;
        if !residual_is_zero(&r) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn outcome(check: &'static str, res: Result<(bool, String), String>) -> CheckOutcome {
    match res {
        Ok((passed, detail)) => CheckOutcome { check, passed, detail },
        Err(e) => CheckOutcome {
            check,
            passed: false,
            detail: e,
        },
    }
}

fn equilibrium_class_name(c: Option<EquilibriumClass>) -> String {
    c.map_or_else(|| "regular".to_string(), |c| c.name())
}

/// Runs every check of one case. Parse or conjugation failures are
/// reported as failed checks rather than errors.
pub fn run_case(case: &OracleCase) -> CaseReport {
    let mut checks = Vec::new();
    let setup = (|| -> Result<_, String> {
        let sys = parse_system(&case.system).map_err(|e| e.to_string())?;
        let cvars = VarPair::new(&case.conjugate_vars[0], &case.conjugate_vars[1]).map_err(|e| e.to_string())?;
        let params = params_of(&case.system)?;
        let expected = parse_pair(&case.expected, &cvars, &params)?;
        let result = conjugate(&sys).map_err(|e| e.to_string())?;
        Ok((sys, cvars, params, expected, result))
    })();
    let (sys, cvars, params, expected, result) = match setup {
        Ok(s) => s,
        Err(e) => {
            return CaseReport {
                name: case.name.clone(),
                checks: vec![CheckOutcome {
                    check: "setup",
                    passed: false,
                    detail: e,
                }],
            }
        }
    };
    let points = sample_points(SAMPLE_POINTS);

    checks.push(outcome("conjugate", {
        let same = result.conjugate == expected && result.conjugate.vars() == &cvars;
        let exps = (sys.degree(), result.k, result.m) == (case.n, case.k, case.m);
        Ok((
            same && exps,
            format!(
                "n={} k={} m={}{}",
                sys.degree(),
                result.k,
                result.m,
                if same { "" } else { "; reduced pair differs" }
            ),
        ))
    }));

    if let Some(printed) = &case.printed {
        checks.push(outcome("printed-form-adjudicated", (|| {
            let printed = parse_pair(printed, &cvars, &params)?;
            let as_printed = ConjugationResult {
                conjugate: printed,
                ..result.clone()
            };
            let printed_ok = pushforward_holds(&sys, &as_printed, &points)?;
            let corrected_ok = pushforward_holds(&sys, &result, &points)?;
            Ok((
                !printed_ok && corrected_ok,
                case.note.clone().unwrap_or_else(|| "printed form fails the pushforward identity".into()),
            ))
        })()));
    }

    checks.push(outcome("involution", (|| {
        let back = conjugate(&result.conjugate).map_err(|e| e.to_string())?;
        let factor = involution_factor(result.m);
        let scaled = DiffSystem::new(sys.p().scale(&factor), sys.q().scale(&factor)).map_err(|e| e.to_string())?;
        Ok((
            back.conjugate == scaled && back.m == result.m,
            format!("conjugate twice = 16^{} * system", result.m),
        ))
    })()));

    checks.push(outcome("pushforward", (|| {
        let ok = pushforward_holds(&sys, &result, &points)?;
        Ok((ok, format!("{} rational points", points.len())))
    })()));

    if result.k >= 1 {
        checks.push(outcome("rebuild", (|| {
            let (u, v) = rebuild_from_kr(&sys, result.k).map_err(|e| e.to_string())?;
            Ok((
                [u, v] == *result.conjugate.rhs(),
                "direct sums plus K_r/Q_r terms".to_string(),
            ))
        })()));
    }

    checks.push(outcome("symmetry", {
        let names = |s: &DiffSystem| symmetries(s).iter().map(|k| k.name().to_string()).collect::<Vec<_>>();
        let (mine, theirs) = (names(&sys), names(&result.conjugate));
        let claimed = case.claimed_symmetries.iter().all(|c| mine.contains(c));
        Ok((
            mine == case.symmetries && theirs == mine && claimed,
            format!("[{}]", mine.join(", ")),
        ))
    }));

    checks.push(outcome("infinity", (|| {
        let status = infinite_point_status(&sys).map_err(|e| e.to_string())?;
        let name = equilibrium_class_name(status.class);
        Ok((name == case.infinity, name))
    })()));

    if !case.equilibria.is_empty() {
        checks.push(outcome("equilibria", (|| {
            let mut all = true;
            let mut detail = Vec::new();
            for eq in &case.equilibria {
                let at = (parse_rational(&eq.at[0]).map_err(|e| e.to_string())?, parse_rational(&eq.at[1]).map_err(|e| e.to_string())?);
                let image = (
                    parse_rational(&eq.image[0]).map_err(|e| e.to_string())?,
                    parse_rational(&eq.image[1]).map_err(|e| e.to_string())?,
                );
                let mapped = transition((&at.0, &at.1)).map_err(|e| e.to_string())?;
                let here = equilibrium_class_name(point_status(&sys, (&at.0, &at.1)));
                let there = equilibrium_class_name(point_status(&result.conjugate, (&image.0, &image.1)));
                all &= mapped == image && here == eq.class && there == eq.class;
                detail.push(format!("({}, {}) -> ({}, {}): {here}", eq.at[0], eq.at[1], eq.image[0], eq.image[1]));
            }
            Ok((all, detail.join("; ")))
        })()));
    }

    CaseReport {
        name: case.name.clone(),
        checks,
    }
}

pub fn run_all() -> Vec<CaseReport> {
    corpus().iter().map(run_case).collect()
}

/// The corpus system, parsed.
pub fn case_system(case: &OracleCase) -> DiffSystem {
    parse_system(&case.system).expect("corpus systems parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let reports = run_all();
        assert!(reports.len() >= 30);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures());
        }
    }

    #[test]
    fn roles_name_existing_cases() {
        let r = roles();
        let singles = [
            &r.stable_dicritical_infinity,
            &r.unstable_dicritical_infinity,
            &r.regular_infinity,
            &r.center,
            &r.limit_cycle,
            &r.unstable_cycle_image,
            &r.sample,
        ];
        let lists = [&r.published_pairs, &r.origin_symmetric, &r.axis_symmetric, &r.diagonal_symmetric, &r.dynamics_pairs];
        for name in singles.into_iter().chain(lists.into_iter().flatten()) {
            assert!(find_case(name).is_some(), "{name}");
        }
    }

    #[test]
    fn sample_points_avoid_origin() {
        let pts = sample_points(SAMPLE_POINTS);
        assert_eq!(pts.len(), SAMPLE_POINTS);
        assert!(pts.iter().all(|(a, b)| !(a.is_zero() && b.is_zero())));
    }

    #[test]
    fn corrupted_case_fails() {
        let mut case = find_case(&roles().sample).unwrap();
        case.expected[0] = "-u^3 + 2*u*v^2".into();
        let report = run_case(&case);
        assert!(!report.passed());
        assert_eq!(report.failures()[0].check, "conjugate");
    }
}
