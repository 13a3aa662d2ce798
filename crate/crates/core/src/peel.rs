//! Recovering chart coordinates from a matrix by peeling one factor at a time.
//!
//! A chart is a product `g_1 ... g_N` of letters `Y(i) = y_i(u)` and
//! `S(i) = s_i^{-1}`, taken modulo a parabolic `P` on the right. For a `Y(i)`
//! letter the plan picks a polynomial `F` in flag minors (rows `S`, columns
//! `1..k`, `k` a block boundary of `P`) with `F(y_i(s) R) = s G(R)` for every
//! remaining product `R` and `G != 0`. Writing `D` for the derivative along
//! `s -> y_i(s)`, `u = F(M) / DF(M)` and then `M <- y_i(-u) M`. Left
//! multiplication by `y_i(s)` sends `p_S` to `p_S + s p_{S'}` when `S`
//! contains row `i+1` but not row `i`, with `S' = S - {i+1} + {i}`. Single
//! vanishing minors are preferred, then linear relations, then products of
//! minors of increasing degree.

use std::collections::BTreeSet;

use itertools::Itertools;
use tropflag_arith::{vars, Exponent, Field, LaurentPoly, Matrix, RatFunc, Rational, Vars};

use crate::error::{Error, Result};
use crate::group::{s_dot, s_dot_inv, y_i};
use crate::weights::{positive_subexpression, ParabolicType, ReducedWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Y(usize),
    S(usize),
}

impl Letter {
    pub fn index(self) -> usize {
        match self {
            Letter::Y(i) | Letter::S(i) => i,
        }
    }
}

/// Letters of the `y^P` chart for `word`: `S` at the positive subexpression of `w_P`.
pub fn chart_letters(word: &ReducedWord, p: &ParabolicType) -> Vec<Letter> {
    let circled: BTreeSet<usize> = positive_subexpression(word, &p.w_p()).into_iter().collect();
    word.letters()
        .iter()
        .enumerate()
        .map(|(t, &i)| if circled.contains(&t) { Letter::S(i) } else { Letter::Y(i) })
        .collect()
}

/// The chart matrix `g_1(u_1) ... g_N(u_N)`; `u` has one entry per `Y` letter.
pub fn chart_matrix<F: Field>(n: usize, letters: &[Letter], u: &[F]) -> Matrix<F> {
    let mut it = u.iter();
    letters.iter().fold(Matrix::identity(n), |acc, l| match *l {
        Letter::Y(i) => acc.mul(&y_i(n, i, it.next().expect("too few coordinates").clone())),
        Letter::S(i) => acc.mul(&s_dot_inv(n, i)),
    })
}

/// A polynomial `sum_j c_j prod_{S in T_j} p_S` in minors; rows are sorted and 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorRelation {
    pub terms: Vec<(Vec<Vec<usize>>, Rational)>,
}

impl MinorRelation {
    /// `(F(M), DF(M))` for the letter `Y(i)`.
    fn eval<F: Field>(&self, m: &Matrix<F>, i: usize) -> (F, F) {
        let (mut val, mut der) = (F::zero(), F::zero());
        for (sets, c) in &self.terms {
            let c = F::from_rational(c);
            let values: Vec<F> = sets.iter().map(|s| minor(m, s)).collect();
            val = val.add(&values.iter().fold(c.clone(), |acc, v| acc.mul(v)));
            for (j, s) in sets.iter().enumerate() {
                if let Some(sp) = shifted(s, i) {
                    let others = values.iter().enumerate().filter(|&(k, _)| k != j).fold(c.clone(), |acc, (_, v)| acc.mul(v));
                    der = der.add(&others.mul(&minor(m, &sp)));
                }
            }
        }
        (val, der)
    }
}

#[derive(Clone, Debug)]
pub struct PeelStep {
    pub letter: Letter,
    /// Candidate polynomials; the first is used.
    pub relations: Vec<MinorRelation>,
}

#[derive(Clone, Debug)]
pub struct PeelPlan {
    pub n: usize,
    pub letters: Vec<Letter>,
    pub steps: Vec<PeelStep>,
    /// Block index of each row for the parabolic.
    pub blocks: Vec<usize>,
}

fn minor<F: Field>(m: &Matrix<F>, rows: &[usize]) -> F {
    let cols: Vec<usize> = (0..rows.len()).collect();
    m.minor(rows, &cols)
}

/// `S - {i} + {i-1}` (0-based) when `i` is in `S` and `i-1` is not.
fn shifted(s: &[usize], i: usize) -> Option<Vec<usize>> {
    (s.contains(&i) && !s.contains(&(i - 1))).then(|| s.iter().map(|&r| if r == i { i - 1 } else { r }).sorted().collect())
}

/// Basis of `{c : sum_j c_j cols[j] = 0}` in reduced echelon form.
fn nullspace(cols: &[&LaurentPoly]) -> Vec<Vec<Rational>> {
    let monomials: BTreeSet<&Exponent> = cols.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    let mut rows: Vec<Vec<Rational>> = monomials.iter().map(|e| cols.iter().map(|p| p.coeff(e)).collect()).collect();
    let ncols = cols.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                rows[k] = rows[k].iter().zip(&rows[r]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[k][free];
            }
            v
        })
        .collect()
}

/// Largest total degree of the minor polynomials tried.
const MAX_RELATION_DEGREE: usize = 3;

/// Multisets of `deg` row sets, each of a size in `sizes`.
fn minor_monomials(n: usize, sizes: &[usize], deg: usize) -> Vec<Vec<Vec<usize>>> {
    let sets: Vec<Vec<usize>> = sizes.iter().flat_map(|&k| (0..n).combinations(k)).collect();
    (0..sets.len()).combinations_with_replacement(deg).map(|idx| idx.into_iter().map(|j| sets[j].clone()).collect()).collect()
}

/// Polynomials in the minors of `g = y_i(u) rest` that are exactly linear in
/// the letter's own coordinate `u`, variable `var` of `g`.
fn relations(g: &Matrix<RatFunc>, rest: &Matrix<RatFunc>, vs: &Vars, sizes: &[usize], i: usize, var: usize) -> Result<Vec<MinorRelation>> {
    let n = g.rows();
    let mut single = Vec::new();
    for &k in sizes {
        for s in (0..n).combinations(k) {
            if let Some(sp) = shifted(&s, i) {
                if minor(rest, &s).is_zero() && !minor(rest, &sp).is_zero() {
                    single.push(MinorRelation { terms: vec![(vec![s], Rational::one())] });
                }
            }
        }
    }
    if !single.is_empty() {
        return Ok(single);
    }
    let laurent = |f: RatFunc| -> Result<LaurentPoly> {
        f.as_laurent()
            .and_then(|p| p.with_vars(vs).ok())
            .ok_or_else(|| Error::Invalid("chart minor is not a Laurent polynomial".into()))
    };
    let mut cache: std::collections::HashMap<Vec<usize>, LaurentPoly> = std::collections::HashMap::new();
    for deg in 1..=MAX_RELATION_DEGREE {
        let monos = minor_monomials(n, sizes, deg);
        let mut polys = Vec::with_capacity(monos.len());
        for mono in &monos {
            let mut p: Option<LaurentPoly> = None;
            for s in mono {
                if !cache.contains_key(s) {
                    cache.insert(s.clone(), laurent(minor(g, s))?);
                }
                let f = &cache[s];
                p = Some(match p {
                    None => f.clone(),
                    Some(q) => &q * f,
                });
            }
            polys.push(p.expect("monomials have positive degree"));
        }
        // the part of each product not linear in `u`, which has to cancel
        let off: Vec<LaurentPoly> = polys
            .iter()
            .map(|p| LaurentPoly::from_terms(p.vars(), p.terms().filter(|(e, _)| e[var] != 1).map(|(e, c)| (e.clone(), c.clone()))))
            .collect();
        let refs: Vec<&LaurentPoly> = off.iter().collect();
        let mut out = Vec::new();
        for c in nullspace(&refs) {
            let lin = polys.iter().zip(&c).fold(LaurentPoly::zero(vs), |acc, (p, x)| &acc + &p.scale(x));
            if !lin.is_zero() {
                out.push(MinorRelation { terms: monos.iter().cloned().zip(c).filter(|(_, c)| !c.is_zero()).collect() });
            }
        }
        if !out.is_empty() {
            out.sort_by_key(|r| r.terms.len());
            return Ok(out);
        }
    }
    Ok(Vec::new())
}

/// Build and validate a peeling plan for `letters` modulo `p`.
pub fn plan(n: usize, letters: &[Letter], p: &ParabolicType) -> Result<PeelPlan> {
    let allowed: Vec<usize> = p.complement().into_iter().collect();
    let ny = letters.iter().filter(|l| matches!(l, Letter::Y(_))).count();
    let names: Vec<String> = (1..=ny).map(|k| format!("u{k}")).collect();
    let vs = vars(&names);
    let generic: Vec<RatFunc> = (0..ny).map(|k| RatFunc::var(&vs, k)).collect();

    // suffix[t] = g_{t+1} ... g_N with generic coordinates
    let mut suffix: Vec<Matrix<RatFunc>> = vec![Matrix::identity(n); letters.len() + 1];
    let mut yk = ny;
    let mut var_of = vec![0; letters.len()];
    for t in (0..letters.len()).rev() {
        let g = match letters[t] {
            Letter::Y(i) => {
                yk -= 1;
                var_of[t] = yk;
                y_i(n, i, generic[yk].clone())
            }
            Letter::S(i) => s_dot_inv(n, i),
        };
        suffix[t] = g.mul(&suffix[t + 1]);
    }

    let mut steps = Vec::with_capacity(letters.len());
    for (t, &letter) in letters.iter().enumerate() {
        let mut found = Vec::new();
        if let Letter::Y(i) = letter {
            found = relations(&suffix[t], &suffix[t + 1], &vs, &allowed, i, var_of[t])?;
            if found.is_empty() {
                return Err(Error::FactorizationAmbiguity(format!("no separating minor relation for letter {t} ({letter:?})")));
            }
        }
        steps.push(PeelStep { letter, relations: found });
    }
    let plan = PeelPlan { n, letters: letters.to_vec(), steps, blocks: p.blocks() };

    // every candidate minor must recover the generic coordinates
    let m = chart_matrix(n, letters, &generic);
    for choice in 0..plan.steps.iter().map(|s| s.relations.len()).max().unwrap_or(1) {
        let got = plan.peel_with(&m, choice)?;
        if got.0 != generic {
            return Err(Error::FactorizationAmbiguity(format!("candidate minors {choice} do not recover the chart")));
        }
        if !plan.in_parabolic(&got.1) {
            return Err(Error::FactorizationAmbiguity("peeled remainder is not in P".into()));
        }
    }
    Ok(plan)
}

impl PeelPlan {
    /// Coordinates of `m` (one per `Y` letter) and the remainder in `P`.
    pub fn peel<F: Field>(&self, m: &Matrix<F>) -> Result<(Vec<F>, Matrix<F>)> {
        self.peel_with(m, 0)
    }

    fn peel_with<F: Field>(&self, m: &Matrix<F>, choice: usize) -> Result<(Vec<F>, Matrix<F>)> {
        let n = self.n;
        let mut m = m.clone();
        let mut out = Vec::new();
        for step in &self.steps {
            match step.letter {
                Letter::Y(i) => {
                    let (num, den) = step.relations[choice.min(step.relations.len() - 1)].eval(&m, i);
                    let u = num.div(&den)?;
                    m = y_i(n, i, u.neg()).mul(&m);
                    out.push(u);
                }
                Letter::S(i) => m = s_dot(n, i).mul(&m),
            }
        }
        Ok((out, m))
    }

    /// Entries below the diagonal blocks vanish exactly.
    pub fn in_parabolic<F: Field>(&self, m: &Matrix<F>) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.blocks[r] <= self.blocks[c] || m.get(r, c).is_zero()))
    }
}

/// Generic coordinates `x1..xN` as rational functions.
pub fn coordinate_vars(prefix: &str, count: usize) -> Vec<RatFunc> {
    let names: Vec<String> = (1..=count).map(|k| format!("{prefix}{k}")).collect();
    let vs = vars(&names);
    (0..count).map(|k| RatFunc::var(&vs, k)).collect()
}

pub fn coordinate_polys(prefix: &str, count: usize) -> Vec<LaurentPoly> {
    let names: Vec<String> = (1..=count).map(|k| format!("{prefix}{k}")).collect();
    let vs = vars(&names);
    (0..count).map(|k| LaurentPoly::var(&vs, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::y_word;

    #[test]
    fn borel_plan_recovers_coordinates() {
        let w = ReducedWord::parse(3, "212").unwrap();
        let letters: Vec<Letter> = w.letters().iter().map(|&i| Letter::Y(i)).collect();
        let pl = plan(3, &letters, &ParabolicType::borel(3)).unwrap();
        let m = y_word(3, w.letters(), &[2.0, 3.0, 5.0]);
        let (u, rest) = pl.peel(&m).unwrap();
        assert_eq!(u, vec![2.0, 3.0, 5.0]);
        assert_eq!(rest, Matrix::identity(3));
    }

    #[test]
    fn parabolic_chart_letters() {
        let w = ReducedWord::parse(3, "212").unwrap();
        let p = ParabolicType::new(3, [1]).unwrap();
        assert_eq!(chart_letters(&w, &p), vec![Letter::Y(2), Letter::S(1), Letter::Y(2)]);
        assert!(plan(3, &chart_letters(&w, &p), &p).is_ok());
    }
}
