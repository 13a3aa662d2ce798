//! Generated-case properties of the exact and truncated arithmetic.

use proptest::prelude::*;
use tropflag_arith::gcd::gcd;
use tropflag_arith::{recognize, vars, LaurentPoly, PuiseuxSeries, Rational, Vars};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, ..ProptestConfig::default() }
}

fn xyz() -> Vars {
    vars(&["x", "y", "z"])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Rational::new(a, b))
}

/// Laurent polynomials in x, y, z with up to four terms and exponents in `[lo, 3]`.
fn poly(lo: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(lo..=3, 3), rational()), 0..=4).prop_map(|terms| LaurentPoly::from_terms(&xyz(), terms))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly(0).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_laws(a in poly(-2), b in poly(-2), c in poly(-2)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&(&a - &b) + &b - a.clone()).is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(0), b in nonzero_poly()) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some() || c.is_monomial(), "gcd {} misses factor {}", g, c);
    }

    #[test]
    fn derivative_is_a_derivation(a in poly(-2), b in poly(-2), i in 0usize..3) {
        prop_assert_eq!((&a * &b).derivative(i), &(&a.derivative(i) * &b) + &(&a * &b.derivative(i)));
    }

    #[test]
    fn series_inverse(lead in 0.5f64..3.0, rest in prop::collection::vec(-2.0f64..2.0, 8), e in -4i64..=4) {
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        let s = PuiseuxSeries::truncated(2, &Rational::new(e, 2), coeffs);
        let one = s.mul_series(&s.inv_series().unwrap());
        prop_assert_eq!(one.val().unwrap(), Rational::zero());
        prop_assert!(one.max_coeff_diff(&PuiseuxSeries::constant(1.0)) < 1e-9);
    }

    #[test]
    fn recognition_round_trip(a in -500i64..=500, b in 1i64..=1024) {
        let q = Rational::new(a, b);
        prop_assert_eq!(recognize(q.to_f64(), 1024, 1e-12), Some(q));
    }
}
