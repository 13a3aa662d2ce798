//! Multivariate Laurent polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration order
//! is lexicographic with the first declared variable most significant and the
//! lex-maximal term is the last entry.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::rational::Rational;
use crate::ArithError;

/// Ordered list of variable names shared between polynomials.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

pub type Exponent = Vec<i32>;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    vars: Vars,
    #[serde(with = "terms_serde")]
    terms: BTreeMap<Exponent, Rational>,
}

mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        t: &BTreeMap<Exponent, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(t.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Exponent, Rational>, D::Error> {
        let v: Vec<(Exponent, Rational)> = Vec::deserialize(d)?;
        Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl LaurentPoly {
    pub fn zero(vars: &Vars) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The `i`-th variable.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    /// Variable by name; panics if absent.
    pub fn var_named(vars: &Vars, name: &str) -> Self {
        let i = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::var(vars, i)
    }

    pub fn monomial(vars: &Vars, exp: Exponent, c: Rational) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length mismatch");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, exp: &[i32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lex-maximal term (first variable most significant).
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Lex-minimal term.
    pub fn trailing_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        Some(m)
    }

    /// Componentwise maximum exponent over all terms.
    pub fn max_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        Some(m)
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn all_coeffs_negative(&self) -> bool {
        self.terms.values().all(|c| c.is_negative())
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(&self.vars, e.iter().map(|x| -x).collect(), c.recip()))
    }

    /// Largest degree of variable `i`.
    pub fn degree_in(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] != 0)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * &Rational::from_int(e[i] as i64));
            }
        }
        p
    }

    /// Coefficients as a univariate polynomial in variable `i`, keyed by degree.
    pub fn univariate_coeffs(&self, i: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = e2[i];
            e2[i] = 0;
            out.entry(d)
                .or_insert_with(|| Self::zero(&self.vars))
                .add_term(e2, c.clone());
        }
        out
    }

    /// Re-express over a different variable list, mapping variable `k` of `self`
    /// to position `map[k]` of `target`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        let mut p = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (k, &x) in e.iter().enumerate() {
                e2[map[k]] += x;
            }
            p.add_term(e2, c.clone());
        }
        p
    }

    /// Re-express over `target`, matching variables by name.
    pub fn with_vars(&self, target: &Vars) -> Result<Self, ArithError> {
        if same_vars(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (k, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(p) => map.push(p),
                None => {
                    if self.involves(k) {
                        return Err(ArithError::VariableMismatch(
                            self.vars.to_vec(),
                            target.to_vec(),
                        ));
                    }
                    map.push(usize::MAX);
                }
            }
        }
        let mut p = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (k, &x) in e.iter().enumerate() {
                if x != 0 {
                    e2[map[k]] += x;
                }
            }
            p.add_term(e2, c.clone());
        }
        Ok(p)
    }

    /// Evaluate in any field; negative exponents use the field inverse.
    pub fn eval<F: Field>(&self, point: &[F]) -> Result<F, ArithError> {
        assert_eq!(point.len(), self.vars.len(), "evaluation point length mismatch");
        let mut pos: Vec<Vec<F>> = vec![vec![F::one()]; point.len()];
        let mut neg: Vec<Vec<F>> = vec![vec![F::one()]; point.len()];
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut term = F::from_rational(c);
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let table = if x > 0 { &mut pos[k] } else { &mut neg[k] };
                let f = power_cached(table, &point[k], x.unsigned_abs() as usize, x < 0)?;
                term = term.mul(&f);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64()
                    * e.iter()
                        .zip(point)
                        .map(|(&k, &x)| x.powi(k))
                        .product::<f64>()
            })
            .sum()
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        crate::gcd::div_exact(self, d)
    }

    /// Rational content: a positive rational `c` with `self / c` having coprime
    /// integer coefficients.
    pub fn content(&self) -> Rational {
        crate::gcd::rational_content(self)
    }
}

fn power_cached<F: Field>(table: &mut Vec<F>, base: &F, k: usize, negative: bool) -> Result<F, ArithError> {
    if table.len() == 1 {
        let b = if negative { base.inv()? } else { base.clone() };
        table.push(b);
    }
    while table.len() <= k {
        let next = table.last().unwrap().mul(&table[1]);
        table.push(next);
    }
    Ok(table[k].clone())
}

fn align(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if same_vars(&a.vars, &b.vars) {
        return (a.clone(), b.clone());
    }
    if a.vars.is_empty() || (a.is_constant() && !b.vars.is_empty()) {
        return (LaurentPoly::constant(&b.vars, a.constant_term()), b.clone());
    }
    if b.vars.is_empty() || b.is_constant() {
        return (a.clone(), LaurentPoly::constant(&a.vars, b.constant_term()));
    }
    panic!("{}", ArithError::VariableMismatch(a.vars.to_vec(), b.vars.to_vec()));
}

impl<'a, 'b> Add<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        if !same_vars(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a + &b;
        }
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<'a, 'b> Sub<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        if !same_vars(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a - &b;
        }
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }
}

impl<'a, 'b> Mul<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        if !same_vars(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a * &b;
        }
        let mut p = LaurentPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

impl<'a> Neg for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_monomial(vars: &Vars, e: &[i32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if x == 1 {
            write!(f, "{}", vars[k])?;
        } else {
            write!(f, "{}^{}", vars[k], x)?;
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing lex order, e.g. `-x1^2*x2^3*x3^2 - x1*x2^3*x3^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(&self.vars, e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn xyz() -> (Vars, LaurentPoly, LaurentPoly, LaurentPoly) {
        let v = vars(&["x1", "x2", "x3"]);
        let (a, b, c) = (LaurentPoly::var(&v, 0), LaurentPoly::var(&v, 1), LaurentPoly::var(&v, 2));
        (v, a, b, c)
    }

    #[test]
    fn lex_leading_term_prefers_first_variable() {
        let (_, x1, x2, x3) = xyz();
        let p = -(&(&x1 * &x2.pow(3)) * &x3.pow(3)) - &(&x1.pow(2) * &x2.pow(3)) * &x3.pow(2);
        let (e, c) = p.leading_term().unwrap();
        assert_eq!(e, &vec![2, 3, 2]);
        assert_eq!(*c, Rational::from_int(-1));
        assert_eq!(p.to_string(), "-x1^2*x2^3*x3^2 - x1*x2^3*x3^3");
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let (_, x1, x2, _) = xyz();
        let p = &(&x1 + &x2) * &(&x1 - &x2);
        let expect = &x1.pow(2) - &x2.pow(2);
        assert_eq!(p, expect);
        assert!((&p - &expect).is_zero());
    }

    #[test]
    fn eval_with_negative_exponents() {
        let (v, x1, x2, _) = xyz();
        let p = &x1.monomial_inverse().unwrap() + &LaurentPoly::constant(&v, q(1, 2)).mul(&x2);
        let val = p.eval(&[q(2, 1), q(3, 1), q(1, 1)]).unwrap();
        assert_eq!(val, q(2, 1));
        assert!((p.eval_f64(&[2.0, 3.0, 1.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_and_embed() {
        let (_, x1, x2, _) = xyz();
        let p = &x1.pow(3) * &x2;
        assert_eq!(p.derivative(0), (&x1.pow(2) * &x2).scale(&q(3, 1)));
        let w = vars(&["y", "x2", "x1", "x3"]);
        let e = p.with_vars(&w).unwrap();
        assert_eq!(e.coeff(&[0, 1, 3, 0]), Rational::one());
    }

    #[test]
    fn constants_combine_across_variable_sets() {
        let (_, x1, _, _) = xyz();
        let one = LaurentPoly::one(&vars::<&str>(&[]));
        assert_eq!(&x1 + &one, &x1 + &LaurentPoly::one(x1.vars()));
    }

    #[test]
    fn serde_round_trip() {
        let (_, x1, x2, _) = xyz();
        let p = &x1.pow(2) - &x2.scale(&q(3, 4));
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.contains("\"-3/4\""));
        let back: LaurentPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
