//! Resultant with respect to the second variable, computed by the
//! subresultant pseudo-remainder sequence over Q[first].

use num_traits::One;

use super::univariate::UniPoly;

type Coeffs = Vec<UniPoly>;

fn degree(p: &[UniPoly]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn trimmed(mut p: Coeffs) -> Coeffs {
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    p
}

fn leading(p: &[UniPoly]) -> UniPoly {
    degree(p).map(|d| p[d].clone()).unwrap_or_else(UniPoly::zero)
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Coeffs {
    let db = degree(b).expect("nonzero divisor");
    let lb = leading(b);
    let mut r: Coeffs = trimmed(a.to_vec());
    let mut steps = degree(a).map_or(0, |da| da + 1 - db);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Coeffs = r.iter().map(|c| c.mul(&lb)).collect();
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            next[shift + j] = next[shift + j].sub(&bj.mul(&lr));
        }
        r = trimmed(next);
        steps -= 1;
    }
    // account for steps skipped when the remainder degree dropped by more than one
    let factor = lb.pow(steps);
    r.into_iter().map(|c| c.mul(&factor)).collect()
}

/// `Res_second(a, b)` as a polynomial in the first variable. Both inputs are
/// given as coefficient lists in ascending powers of the second variable.
pub fn resultant_second(a: &[UniPoly], b: &[UniPoly]) -> UniPoly {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return UniPoly::zero();
    };
    if db == 0 {
        return leading(b).pow(da);
    }
    if da == 0 {
        return leading(a).pow(db);
    }
    let (mut a, mut b): (Coeffs, Coeffs) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let mut sign = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        sign = da % 2 == 1 && db % 2 == 1;
    }
    let one = UniPoly::constant(One::one());
    let mut g = one.clone();
    let mut h = one;
    loop {
        let (da, db) = (degree(&a).unwrap(), degree(&b).unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = pseudo_rem(&a, &b);
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = r.iter().map(|c| c.exact_div(&divisor)).collect();
        b = trimmed(b);
        g = leading(&a);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1))
        };
        match degree(&b) {
            None => return UniPoly::zero(),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = degree(&a).unwrap();
    let res = if da == 0 {
        UniPoly::constant(One::one())
    } else {
        leading(&b).pow(da).exact_div(&h.pow(da - 1))
    };
    if sign {
        res.scale(&-super::Rational::one())
    } else {
        res
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, BiPoly, Rational, VarPair};
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    /// Sylvester determinant of two univariate polynomials over Q, by
    /// fraction-exact Gaussian elimination.
    fn sylvester_resultant(a: &[Rational], b: &[Rational]) -> Rational {
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut det = Rational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let p = mat[col][col].clone();
            det *= &p;
            for r in col + 1..size {
                let f = &mat[r][col] / &p;
                if f.is_zero() {
                    continue;
                }
                for c in col..size {
                    let v = &f * &mat[col][c];
                    mat[r][c] -= v;
                }
            }
        }
        det
    }

    fn specialize(p: &BiPoly, x0: &Rational) -> Vec<Rational> {
        p.to_univariate_in_second().iter().map(|c| c.eval(x0)).collect()
    }

    fn small_poly(max_deg: u32) -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, -4i64..=4), 1..6).prop_map(|ts| {
            BiPoly::from_terms(&VarPair::xy(), ts.into_iter().map(|(i, j, c)| (i, j, int(c))))
        })
    }

    #[test]
    fn known_resultants() {
        // Res_y(y - x, y + x) = 2x
        let xy = VarPair::xy();
        let a = BiPoly::from_terms(&xy, [(0, 1, int(1)), (1, 0, int(-1))]);
        let b = BiPoly::from_terms(&xy, [(0, 1, int(1)), (1, 0, int(1))]);
        let r = resultant_second(&a.to_univariate_in_second(), &b.to_univariate_in_second());
        let expected = sylvester_resultant(&specialize(&a, &int(3)), &specialize(&b, &int(3)));
        assert_eq!(r.eval(&int(3)), expected);
        assert_eq!(expected, int(6));
        // common factor gives zero
        let c = &a * &b;
        let r = resultant_second(&c.to_univariate_in_second(), &a.to_univariate_in_second());
        assert!(r.is_zero());
    }

    proptest! {
        #[test]
        fn matches_sylvester_at_sample_points(a in small_poly(3), b in small_poly(3), x0 in -3i64..=3) {
            let x0 = int(x0);
            let ua = a.to_univariate_in_second();
            let ub = b.to_univariate_in_second();
            prop_assume!(ua.len() >= 2 && ub.len() >= 2);
            // specialization commutes with the resultant only if leading coefficients survive
            prop_assume!(!ua.last().unwrap().eval(&x0).is_zero());
            prop_assume!(!ub.last().unwrap().eval(&x0).is_zero());
            let r = resultant_second(&ua, &ub);
            let expected = sylvester_resultant(&specialize(&a, &x0), &specialize(&b, &x0));
            prop_assert_eq!(r.eval(&x0), expected);
        }
    }
}
