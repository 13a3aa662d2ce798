//! Multivariate gcd and exact division.
//!
//! Monomials are units in the Laurent ring, so every operation first strips the
//! monomial factor and then works with honest polynomials. The gcd is recursive:
//! pick a shared variable of smallest degree, split off contents (computed
//! recursively in the remaining variables) and run the subresultant remainder
//! sequence on the primitive parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::laurent::{Exponent, LaurentPoly};
use crate::rational::Rational;

/// Positive rational `c` such that `p / c` has coprime integer coefficients.
pub fn rational_content(p: &LaurentPoly) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return Rational::one();
    }
    Rational::from_bigints(num, den)
}

/// Split `p = x^m * q` with `q` not divisible by any variable.
pub fn strip_monomial(p: &LaurentPoly) -> (Exponent, LaurentPoly) {
    match p.min_exponent() {
        None => (vec![0; p.nvars()], p.clone()),
        Some(m) => {
            let neg: Vec<i32> = m.iter().map(|x| -x).collect();
            (m, p.shift(&neg))
        }
    }
}

/// Primitive integer form with positive lex-leading coefficient.
pub fn normalize(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut c = rational_content(p);
    if p.leading_coeff().is_negative() {
        c = -c;
    }
    p.scale(&c.recip())
}

fn div_poly(a: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    let (ed, cd) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut r = a.clone();
    let mut quo = LaurentPoly::zero(a.vars());
    while let Some((er, cr)) = r.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        let qe: Exponent = er.iter().zip(&ed).map(|(x, y)| x - y).collect();
        if qe.iter().any(|&x| x < 0) {
            return None;
        }
        let m = LaurentPoly::monomial(a.vars(), qe, &cr / &cd);
        r = &r - &(&m * d);
        quo = &quo + &m;
    }
    Some(quo)
}

/// Exact quotient `a / d` in the Laurent ring, or `None` if `d` does not divide `a`.
pub fn div_exact(a: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!d.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Some(LaurentPoly::zero(d.vars()));
    }
    if let Some(inv) = d.monomial_inverse() {
        return Some(a * &inv);
    }
    let (ma, pa) = strip_monomial(a);
    let (md, pd) = strip_monomial(d);
    let q = div_poly(&pa, &pd)?;
    let shift: Vec<i32> = ma.iter().zip(&md).map(|(x, y)| x - y).collect();
    Some(q.shift(&shift))
}

fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut g: Option<LaurentPoly> = None;
    for (_, c) in p.univariate_coeffs(v) {
        g = Some(match g {
            None => normalize(&c),
            Some(g) => poly_gcd(&g, &c),
        });
        if g.as_ref().unwrap().is_constant() {
            break;
        }
    }
    g.unwrap_or_else(|| LaurentPoly::one(p.vars()))
}

fn leading_coeff_in(p: &LaurentPoly, v: usize) -> (i32, LaurentPoly) {
    let cs = p.univariate_coeffs(v);
    let (d, c) = cs.into_iter().next_back().expect("nonzero polynomial");
    (d, c)
}

fn var_power(p: &LaurentPoly, v: usize, k: i32) -> LaurentPoly {
    let mut e = vec![0; p.nvars()];
    e[v] = k;
    LaurentPoly::monomial(p.vars(), e, Rational::one())
}

/// `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b` in the variable `v`.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let (db, lb) = leading_coeff_in(b, v);
    let mut steps = a.degree_in(v) - db + 1;
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_coeff_in(&r, v);
        if dr < db {
            break;
        }
        r = &(&lb * &r) - &(&(&lr * &var_power(&r, v, dr - db)) * b);
        steps -= 1;
    }
    if steps > 0 && !r.is_zero() {
        r = &r * &lb.pow(steps as u32);
    }
    r
}

/// gcd of two polynomials with nonnegative exponents and no monomial factor.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one(a.vars());
    }
    let (mut a, mut b) = (normalize(a), normalize(b));
    if a.num_terms() >= b.num_terms() {
        if div_poly(&a, &b).is_some() {
            return b;
        }
    } else if div_poly(&b, &a).is_some() {
        return a;
    }
    let n = a.nvars();
    for v in 0..n {
        if a.involves(v) && !b.involves(v) {
            a = content_in(&a, v);
        } else if b.involves(v) && !a.involves(v) {
            b = content_in(&b, v);
        }
        if a.is_constant() || b.is_constant() {
            return LaurentPoly::one(a.vars());
        }
    }
    let v = match (0..n)
        .filter(|&v| a.involves(v) && b.involves(v))
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
    {
        Some(v) => v,
        None => return LaurentPoly::one(a.vars()),
    };
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let c = poly_gcd(&ca, &cb);
    let mut r0 = div_poly(&a, &ca).expect("content divides");
    let mut r1 = div_poly(&b, &cb).expect("content divides");
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let mut g = LaurentPoly::one(a.vars());
    let mut h = LaurentPoly::one(a.vars());
    loop {
        let d = r0.degree_in(v) - r1.degree_in(v);
        let r = pseudo_rem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c;
        }
        let r2 = div_poly(&r, &(&g * &h.pow(d as u32))).expect("subresultant divides");
        g = leading_coeff_in(&r1, v).1;
        h = if d == 0 {
            h
        } else {
            div_poly(&g.pow(d as u32), &h.pow((d - 1) as u32)).expect("subresultant divides")
        };
        r0 = r1;
        r1 = r2;
    }
    let pr = content_in(&r1, v);
    normalize(&(&c * &div_poly(&r1, &pr).expect("content divides")))
}

/// gcd in the Laurent ring: a polynomial with no monomial factor, primitive,
/// with positive lex-leading coefficient. Monomial factors are units and dropped.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (_, pa) = strip_monomial(a);
    let (_, pb) = strip_monomial(b);
    poly_gcd(&pa, &pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::vars;
    use crate::rational::q;

    fn xs() -> Vec<LaurentPoly> {
        let v = vars(&["a", "b", "c", "d"]);
        (0..4).map(|i| LaurentPoly::var(&v, i)).collect()
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let x = xs();
        let f = &(&x[0] * &x[3]) + &(&x[1] * &x[2]);
        let g1 = &x[0] + &x[1].pow(2);
        let g2 = &(&x[2] * &x[3]) - &x[0];
        let a = &f * &g1;
        let b = &(&f * &g2) * &x[1];
        assert_eq!(gcd(&a, &b), normalize(&f));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let x = xs();
        let a = &x[0] + &x[1];
        let b = &x[0] - &x[1];
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn univariate_gcd_with_rational_coefficients() {
        let x = xs();
        let one = LaurentPoly::one(x[0].vars());
        let a = &(&x[0] - &one.scale(&q(1, 2))) * &(&x[0] + &one);
        let b = &(&x[0] - &one.scale(&q(1, 2))) * &(&x[0] - &one.scale(&q(3, 1)));
        let g = gcd(&a, &b);
        assert_eq!(g, normalize(&(&x[0].scale(&q(2, 1)) - &one)));
    }

    #[test]
    fn exact_division_with_monomial_shift() {
        let x = xs();
        let f = &x[0] + &x[1];
        let m = x[2].monomial_inverse().unwrap();
        let a = &(&f * &(&x[0] - &x[3])) * &m;
        assert_eq!(div_exact(&a, &f), Some(&(&x[0] - &x[3]) * &m));
        assert_eq!(div_exact(&(&x[0] + &x[2]), &f), None);
    }

    #[test]
    fn content_is_rational() {
        let x = xs();
        let p = &x[0].scale(&q(3, 4)) + &x[1].scale(&q(9, 2));
        assert_eq!(rational_content(&p), q(3, 4));
    }
}
