use num_traits::Zero;
use proptest::prelude::*;

use stereoconj::analyze::{classify_linear, infinite_point_status, jacobian_at, point_status};
use stereoconj::charts::{
    chart_project, map_curve, stereo_project, transition, transition_extended, ChartTag, CurveDescriptor,
    CurveImage, ExtendedPoint,
};
use stereoconj::parse::{parse_system, SystemSpec};
use stereoconj::poly::{int, rat, Rational};

fn q() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_point() -> impl Strategy<Value = (Rational, Rational)> {
    (q(), q()).prop_filter("punctured plane", |(a, b)| !(a.is_zero() && b.is_zero()))
}

proptest! {
    #[test]
    fn charts_are_inverse_and_on_the_sphere((a, b) in (q(), q())) {
        for chart in [ChartTag::North, ChartTag::South] {
            let sp = stereo_project(chart, (&a, &b));
            prop_assert_eq!(sp.norm_sq(), int(1));
            prop_assert_eq!(chart_project(chart, &sp).unwrap(), (a.clone(), b.clone()));
        }
    }

    #[test]
    fn transition_is_an_involution((a, b) in nonzero_point()) {
        let t = transition((&a, &b)).unwrap();
        prop_assert_eq!(transition((&t.0, &t.1)).unwrap(), (a.clone(), b.clone()));
        // |p| |T(p)| = 4
        let n = |p: &(Rational, Rational)| &p.0 * &p.0 + &p.1 * &p.1;
        prop_assert_eq!(n(&(a, b)) * n(&t), int(16));
    }

    #[test]
    fn classification_is_scale_invariant(e in prop::array::uniform4(-6i64..=6), c in 1i64..6) {
        let j = [[int(e[0]), int(e[1])], [int(e[2]), int(e[3])]];
        let s = int(c);
        let js = [[&j[0][0] * &s, &j[0][1] * &s], [&j[1][0] * &s, &j[1][1] * &s]];
        prop_assert_eq!(classify_linear(&j), classify_linear(&js));
    }

    #[test]
    fn generalized_circles_map_consistently(cx in q(), cy in q(), r in 1i64..9) {
        let circle = CurveDescriptor::circle((cx, cy), int(r)).unwrap();
        let CurveImage::Curve(image) = map_curve(&circle).unwrap() else { panic!("circle maps to a curve") };
        for (a, b) in circle.rational_samples(10) {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let (u, v) = transition((&a, &b)).unwrap();
            prop_assert!(image.contains((&u, &v)));
        }
        // and back again
        prop_assert_eq!(map_curve(&image).unwrap(), CurveImage::Curve(circle));
    }
}

#[test]
fn origin_and_infinity_swap() {
    let zero = ExtendedPoint::Finite(int(0), int(0));
    assert_eq!(transition_extended(&zero), ExtendedPoint::Infinity);
    assert_eq!(transition_extended(&ExtendedPoint::<Rational>::Infinity), zero);
    assert!(transition((&int(0), &int(0))).is_err());
    assert_eq!(map_curve(&CurveDescriptor::point(int(0), int(0))).unwrap(), CurveImage::Infinity);
}

#[test]
fn equilibria_keep_their_type_across_charts() {
    // saddle at (1, 0) of x' = x^2 - 1, y' = -y; its image is (4, 0)
    let sys = parse_system(&SystemSpec::new(["x", "y"], ["x^2 - 1", "-y"])).unwrap();
    let r = stereoconj::conjugate::conjugate(&sys).unwrap();
    let here = point_status(&sys, (&int(1), &int(0)));
    let image = transition((&int(1), &int(0))).unwrap();
    assert_eq!(image, (int(4), int(0)));
    assert_eq!(point_status(&r.conjugate, (&image.0, &image.1)), here);
    assert!(here.is_some());
    let j = jacobian_at(&sys, (&int(1), &int(0)));
    assert_eq!(j, [[int(2), int(0)], [int(0), int(-1)]]);
    assert!(!infinite_point_status(&sys).unwrap().is_regular());
}
