//! Rational functions in named variables.
//!
//! Canonical form: numerator and denominator coprime, denominator free of
//! monomial factors (those move to the numerator as negative exponents) and
//! monic in the lex order. Two equal functions therefore compare equal
//! structurally.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{Field, ZeroTest};
use crate::gcd::{gcd, strip_monomial};
use crate::laurent::{Exponent, LaurentPoly, Vars};
use crate::rational::Rational;
use crate::ArithError;

#[derive(Clone, Serialize, Deserialize)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Constants compare equal regardless of their variable set.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.vars()[..] == other.vars()[..] {
            return self.num == other.num && self.den == other.den;
        }
        self.is_constant() && other.is_constant() && self.num.constant_term() == other.num.constant_term()
    }
}

impl Eq for RatFunc {}

impl std::hash::Hash for RatFunc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        if self.is_constant() {
            self.num.constant_term().hash(state);
        } else {
            self.num.hash(state);
            self.den.hash(state);
        }
    }
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (num, den) = align(num, den);
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let vars = p.vars().clone();
        RatFunc { num: p, den: LaurentPoly::one(&vars) }
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::from_poly(LaurentPoly::var(vars, i))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    /// True when the denominator is 1, i.e. the function is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.is_laurent() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            let vars = den.vars().clone();
            return RatFunc { num: LaurentPoly::zero(&vars), den: LaurentPoly::one(&vars) };
        }
        let (mn, pn) = strip_monomial(&num);
        let (md, pd) = strip_monomial(&den);
        let (pn, pd) = if pd.is_constant() {
            (pn, pd)
        } else {
            let g = gcd(&pn, &pd);
            if g.is_constant() {
                (pn, pd)
            } else {
                (
                    pn.div_exact(&g).expect("gcd divides numerator"),
                    pd.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::finish(pn, pd, &mn, &md)
    }

    fn finish(pn: LaurentPoly, pd: LaurentPoly, mn: &[i32], md: &[i32]) -> Self {
        let lc = pd.leading_coeff().recip();
        let shift: Exponent = mn.iter().zip(md).map(|(a, b)| a - b).collect();
        RatFunc { num: pn.scale(&lc).shift(&shift), den: pd.scale(&lc) }
    }

    /// Normalize when the caller guarantees numerator and denominator are coprime
    /// up to monomial factors.
    fn reduce_coprime(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::reduce(num, den);
        }
        let (mn, pn) = strip_monomial(&num);
        let (md, pd) = strip_monomial(&den);
        Self::finish(pn, pd, &mn, &md)
    }

    pub fn with_vars(&self, target: &Vars) -> Result<Self, ArithError> {
        Ok(RatFunc { num: self.num.with_vars(target)?, den: self.den.with_vars(target)? })
    }

    pub fn pow(&self, e: i32) -> Result<Self, ArithError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn eval<F: Field>(&self, point: &[F]) -> Result<F, ArithError> {
        let n = self.num.eval(point)?;
        let d = self.den.eval(point)?;
        n.div(&d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Substitute rational functions for the variables.
    pub fn substitute(&self, values: &[RatFunc]) -> Result<RatFunc, ArithError> {
        self.eval(values)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> RatFunc {
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::reduce(num, &self.den * &self.den)
    }

    /// The monomial list of a function that reduces to a positive Laurent
    /// polynomial.
    pub fn expand_positive(&self) -> Result<Vec<(Exponent, Rational)>, ArithError> {
        if !self.den.is_constant() {
            return Err(ArithError::NotSubtractionFree(format!(
                "denominator {} is not a monomial",
                self.den
            )));
        }
        let d = self.den.constant_term();
        let p = self.num.scale(&d.recip());
        if let Some((e, c)) = p.terms().find(|(_, c)| !c.is_positive()) {
            return Err(ArithError::NotSubtractionFree(format!(
                "coefficient {c} on exponent {e:?}"
            )));
        }
        Ok(p.terms().map(|(e, c)| (e.clone(), c.clone())).collect())
    }

    /// Min-plus evaluation `min_P <e, v> - min_Q <e, v>`, valid when numerator and
    /// denominator each have coefficients of a single sign.
    pub fn tropicalize(&self, point: &[Rational]) -> Result<Rational, ArithError> {
        fn trop(p: &LaurentPoly, v: &[Rational]) -> Result<Rational, ArithError> {
            if !(p.all_coeffs_positive() || p.all_coeffs_negative()) {
                return Err(ArithError::NotSubtractionFree(p.to_string()));
            }
            p.terms()
                .map(|(e, _)| e.iter().zip(v).map(|(&k, x)| x * &Rational::from_int(k as i64)).sum())
                .min()
                .ok_or(ArithError::ZeroSeries)
        }
        assert_eq!(point.len(), self.vars().len());
        Ok(trop(&self.num, point)? - trop(&self.den, point)?)
    }

    /// True when numerator and denominator each have single-sign coefficients.
    pub fn is_subtraction_free(&self) -> bool {
        (self.num.all_coeffs_positive() || self.num.all_coeffs_negative())
            && (self.den.all_coeffs_positive() || self.den.all_coeffs_negative())
    }
}

fn align(a: LaurentPoly, b: LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if a.vars()[..] == b.vars()[..] {
        return (a, b);
    }
    if a.vars().is_empty() || (a.is_constant() && !b.vars().is_empty()) {
        let v = b.vars().clone();
        return (LaurentPoly::constant(&v, a.constant_term()), b);
    }
    if b.vars().is_empty() || b.is_constant() {
        let v = a.vars().clone();
        return (a, LaurentPoly::constant(&v, b.constant_term()));
    }
    panic!("{}", ArithError::VariableMismatch(a.vars().to_vec(), b.vars().to_vec()));
}

fn align_rf(a: &RatFunc, b: &RatFunc) -> Option<(RatFunc, RatFunc)> {
    if a.vars()[..] == b.vars()[..] {
        return None;
    }
    let conv = |c: &RatFunc, v: &Vars| {
        c.with_vars(v).unwrap_or_else(|e| panic!("{e}"))
    };
    if a.vars().is_empty() || (a.is_constant() && !b.vars().is_empty()) {
        Some((conv(a, b.vars()), b.clone()))
    } else {
        Some((a.clone(), conv(b, a.vars())))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(LaurentPoly::zero(&Vars::from(Vec::<String>::new())))
    }

    fn one() -> Self {
        RatFunc::from_poly(LaurentPoly::one(&Vars::from(Vec::<String>::new())))
    }

    fn from_rational(r: &Rational) -> Self {
        RatFunc::from_poly(LaurentPoly::constant(&Vars::from(Vec::<String>::new()), r.clone()))
    }

    fn add(&self, o: &Self) -> Self {
        if let Some((a, b)) = align_rf(self, o) {
            return a.add(&b);
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc { num: &self.num + &o.num, den: self.den.clone() };
            }
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return Self::reduce_coprime(&(&self.num * &o.den) + &o.num, o.den.clone());
        }
        if o.den.is_one() {
            return Self::reduce_coprime(&self.num + &(&o.num * &self.den), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        Self::reduce(num, &self.den * &d2)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if let Some((a, b)) = align_rf(self, o) {
            return a.mul(&b);
        }
        if self.is_zero() || o.is_zero() {
            return RatFunc::from_poly(LaurentPoly::zero(self.vars()));
        }
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        Self::reduce_coprime(&n1 * &n2, &d1 * &d2)
    }

    fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce_coprime(self.den.clone(), self.num.clone()))
    }

    fn zero_test(&self) -> ZeroTest {
        if self.is_zero() {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}

fn cancel(n: &LaurentPoly, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if d.is_constant() || n.is_constant() {
        return (n.clone(), d.clone());
    }
    let g = gcd(n, d);
    if g.is_constant() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &LaurentPoly| {
                if p.num_terms() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
