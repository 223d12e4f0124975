use num_traits::{One, Zero};
use proptest::prelude::*;

use stereoconj::conjugate::{conjugate, pushforward_residual, residual_is_zero, DiffSystem};
use stereoconj::parse::parse_polynomial;
use stereoconj::poly::{int, rat, BiPoly, Rational, VarPair};

fn coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_degree: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, coeff()), 0..6).prop_map(move |terms| {
        let terms: Vec<_> = terms.into_iter().filter(|(i, j, _)| i + j <= max_degree).collect();
        BiPoly::from_terms(&VarPair::xy(), terms)
    })
}

fn system() -> impl Strategy<Value = DiffSystem> {
    (poly(3), poly(3))
        .prop_filter("nonzero field", |(p, q)| !(p.is_zero() && q.is_zero()))
        .prop_map(|(p, q)| DiffSystem::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(3), b in poly(3), c in poly(2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &BiPoly::one(&VarPair::xy()), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3), b in poly(3), x in coeff(), y in coeff()) {
        prop_assert_eq!((&a * &b).eval(&x, &y), a.eval(&x, &y) * b.eval(&x, &y));
        prop_assert_eq!((&a + &b).eval(&x, &y), a.eval(&x, &y) + b.eval(&x, &y));
    }

    #[test]
    fn circle_valuation_is_additive(a in poly(3), b in poly(3), i in 0u32..3, j in 0u32..3) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let s = BiPoly::circle(&VarPair::xy());
        let (fa, fb) = (&a * &s.pow(i), &b * &s.pow(j));
        prop_assert_eq!(
            (&fa * &fb).circle_valuation(),
            fa.circle_valuation() + fb.circle_valuation()
        );
    }

    #[test]
    fn circle_division_round_trip(a in poly(4)) {
        let (q, r) = a.circle_divrem();
        let s = BiPoly::circle(&VarPair::xy());
        prop_assert_eq!(&(&q * &s) + &r, a);
        prop_assert!(r.degree_in(1).is_none_or(|d| d <= 1));
    }

    #[test]
    fn homogeneous_parts_sum_back(a in poly(4)) {
        let sum = a
            .homogeneous_components()
            .into_iter()
            .fold(BiPoly::zero(&VarPair::xy()), |acc, (d, h)| {
                assert!(h.is_homogeneous() && h.total_degree() == Some(d));
                &acc + &h
            });
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn display_parses_back(a in poly(4)) {
        let text = a.to_string();
        prop_assert_eq!(parse_polynomial(&text, &VarPair::xy()).unwrap(), a.clone());
        let uv = a.with_vars(&VarPair::uv());
        prop_assert_eq!(parse_polynomial(&uv.to_string(), &VarPair::uv()).unwrap(), uv);
    }

    #[test]
    fn parser_never_panics(text in "[xyuv0-9+*^/() .-]{0,24}") {
        let _ = parse_polynomial(&text, &VarPair::xy());
    }

    #[test]
    fn pushforward_holds_for_random_systems(sys in system(), x in coeff(), y in coeff()) {
        prop_assume!(!(x.is_zero() && y.is_zero()));
        let r = conjugate(&sys).unwrap();
        let res = pushforward_residual(&sys, &r, (&x, &y)).unwrap();
        prop_assert!(residual_is_zero(&res));
    }

    #[test]
    fn conjugation_commutes_with_scaling(sys in system(), c in 1i64..5) {
        let c = int(c);
        let scaled = DiffSystem::new(sys.p().scale(&c), sys.q().scale(&c)).unwrap();
        let (a, b) = (conjugate(&sys).unwrap(), conjugate(&scaled).unwrap());
        prop_assert_eq!((a.k, a.m), (b.k, b.m));
        prop_assert_eq!(a.conjugate.p().scale(&c), b.conjugate.p().clone());
    }
}

#[test]
fn circle_powers_have_their_valuation() {
    let s = BiPoly::circle(&VarPair::xy());
    for k in 0..5 {
        assert_eq!(s.pow(k).circle_valuation(), k);
    }
    assert!(BiPoly::one(&VarPair::xy()).eval(&Rational::zero(), &Rational::one()).is_one());
}
