//! The Borel-Weil side: `y`-charts on `G/B` and `G/P`, the projections between
//! them, the anticanonical sections `f_P`, the section `omega_lambda^{-1}`, its
//! lex-max valuation `nu`, and the comparison with `nu^v`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use tropflag_arith::{Exponent, Field, LaurentPoly, Matrix, RatFunc, Rational};

use crate::cache::Memo;
use crate::error::{Error, Result};
use crate::group::{s_dot, y_i, y_word};
use crate::peel::{chart_letters, coordinate_vars, plan, Letter, PeelPlan};
use crate::superpot::{nu_vee_report, NumericOptions, SYMBOLIC_MAX_N};
use crate::tropsolve::{chain_decomposition, is_integral};
use crate::weights::{lambda_p, reduced_words, weyl_dim, DominantWeight, ParabolicType, ReducedWord};

fn check_symbolic(n: usize) -> Result<()> {
    if n > SYMBOLIC_MAX_N {
        return Err(Error::SymbolicBlowup { n, max: SYMBOLIC_MAX_N });
    }
    Ok(())
}

/// `y_{i_1}(x_1) ... y_{i_N}(x_N)`.
pub fn y_chart_matrix<F: Field>(word: &ReducedWord, x: &[F]) -> Matrix<F> {
    y_word(word.n(), word.letters(), x)
}

fn to_laurent(f: &RatFunc) -> Result<LaurentPoly> {
    f.as_laurent().cloned().ok_or_else(|| Error::Internal(format!("{f} is not a Laurent polynomial")))
}

/// `V_lambda` realized through products of flag minors of `y_i(x)`: the
/// matrix coefficients of `y_i(x) v_lambda` inside
/// `(x)_k (Lambda^k C^n)^{(x) m_k}` span the same space, and an echelon basis
/// by lex-max leading term exhibits the valuation image.
#[derive(Clone, Debug)]
pub struct RepModel {
    pub lambda: DominantWeight,
    pub word: ReducedWord,
    /// Echelon basis keyed by lex-max exponent.
    pub basis: BTreeMap<Exponent, LaurentPoly>,
}

impl RepModel {
    pub fn new(lambda: &DominantWeight, word: &ReducedWord) -> Result<Self> {
        if lambda.n() != word.n() {
            return Err(Error::DimensionMismatch { expected: word.n(), got: lambda.n() });
        }
        if !lambda.is_integral() {
            return Err(Error::NonIntegralWeight(lambda.to_string()));
        }
        let n = word.n();
        let x = coordinate_vars("x", word.len());
        let y = y_chart_matrix(word, &x);
        let one = LaurentPoly::one(x.first().map_or(&tropflag_arith::vars::<&str>(&[]), |v| v.vars()));
        let mut factors: Vec<Vec<LaurentPoly>> = Vec::new();
        for (k, m) in lambda.fundamental_coeffs().iter().enumerate() {
            let m = m.to_i64().ok_or_else(|| Error::NonIntegralWeight(lambda.to_string()))? as usize;
            if m == 0 {
                continue;
            }
            let cols: Vec<usize> = (0..=k).collect();
            let minors: Vec<LaurentPoly> =
                (0..n).combinations(k + 1).map(|rows| to_laurent(&y.minor(&rows, &cols))).collect::<Result<_>>()?;
            let powers: Vec<LaurentPoly> = minors
                .iter()
                .combinations_with_replacement(m)
                .map(|c| c.into_iter().fold(one.clone(), |acc, p| &acc * p))
                .collect();
            factors.push(powers);
        }
        let mut basis: BTreeMap<Exponent, LaurentPoly> = BTreeMap::new();
        let products: Vec<LaurentPoly> = if factors.is_empty() {
            vec![one.clone()]
        } else {
            factors.iter().multi_cartesian_product().map(|c| c.into_iter().fold(one.clone(), |acc, p| &acc * p)).collect()
        };
        for mut p in products {
            while let Some((e, c)) = p.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
                match basis.get(&e) {
                    Some(b) => {
                        let s = &c / &b.leading_coeff();
                        p = &p - &b.scale(&s);
                    }
                    None => {
                        basis.insert(e, p);
                        break;
                    }
                }
            }
        }
        let model = RepModel { lambda: lambda.clone(), word: word.clone(), basis };
        let expected = weyl_dim(lambda)?;
        if model.dim() as u128 != expected {
            return Err(Error::Internal(format!("span has dimension {}, expected {expected}", model.dim())));
        }
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn valuations(&self) -> BTreeSet<Vec<i64>> {
        self.basis.keys().map(|e| e.iter().map(|&k| k as i64).collect()).collect()
    }
}

/// Image of `nu_{lambda,i}` on `V_lambda^*`.
pub fn borel_weil_valuations(lambda: &DominantWeight, word: &ReducedWord) -> Result<BTreeSet<Vec<i64>>> {
    Ok(RepModel::new(lambda, word)?.valuations())
}

fn key(word: &ReducedWord, p: &ParabolicType) -> Vec<usize> {
    let mut k = vec![word.n()];
    k.extend_from_slice(word.letters());
    k.push(0);
    k.extend(p.ip().iter().copied());
    k
}

static PLANS: Memo<PeelPlan> = Memo::new();
static PROJECTIONS: Memo<Vec<RatFunc>> = Memo::new();
static SECTIONS: Memo<SectionFunction> = Memo::new();

fn chart_plan(word: &ReducedWord, p: &ParabolicType) -> Result<Arc<PeelPlan>> {
    PLANS.get_or_compute(key(word, p), || plan(word.n(), &chart_letters(word, p), p))
}

/// `pi_P : G/B -> G/P` from the chart `y_i` to the chart `y_i^P`.
pub fn pi_p_in_charts(word: &ReducedWord, p: &ParabolicType) -> Result<Arc<Vec<RatFunc>>> {
    check_symbolic(word.n())?;
    if p.n() != word.n() {
        return Err(Error::DimensionMismatch { expected: word.n(), got: p.n() });
    }
    PROJECTIONS.get_or_compute(key(word, p), || {
        let pl = chart_plan(word, p)?;
        let x = coordinate_vars("x", word.len());
        let (u, rest) = pl.peel(&y_chart_matrix(word, &x))?;
        if !pl.in_parabolic(&rest) {
            return Err(Error::FactorizationAmbiguity(format!("remainder of y_{word}(x) is not in P = {p}")));
        }
        Ok(u)
    })
}

/// Characters `chi_k` with `t^{-1}` acting on the chart coordinate `u_k` by `chi_k(t)`,
/// as coefficient vectors on `eps_1..eps_n`.
pub fn chart_torus_weights(word: &ReducedWord, p: &ParabolicType) -> Vec<Vec<i64>> {
    let n = word.n();
    let mut frame: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for letter in chart_letters(word, p) {
        match letter {
            Letter::Y(i) => {
                let mut w = vec![0i64; n];
                w[frame[i]] += 1;
                w[frame[i - 1]] -= 1;
                out.push(w);
            }
            Letter::S(i) => frame.swap(i - 1, i),
        }
    }
    out
}

/// A regular function on the chart `y_i`, standing for a section divided by
/// the lowest weight section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionFunction {
    pub poly: LaurentPoly,
}

impl SectionFunction {
    pub fn pow(&self, e: u32) -> Self {
        SectionFunction { poly: self.poly.pow(e) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        SectionFunction { poly: &self.poly * &other.poly }
    }
}

impl fmt::Display for SectionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Lowest weight section `h = det(Z) / det(Y)` in the coordinates `u` of
/// `y_i^P`: columns of `Z` are the vector fields of `E_rc`, `(r, c)` below the
/// Levi blocks, and columns of `Y` those of `d/du_k`, both read in `g^{-1} dg`
/// modulo `p`.
fn lowest_weight_section(word: &ReducedWord, p: &ParabolicType) -> Result<(RatFunc, Vec<RatFunc>)> {
    let n = word.n();
    let letters = chart_letters(word, p);
    let ny = letters.iter().filter(|l| matches!(l, Letter::Y(_))).count();
    let u = coordinate_vars("u", ny);
    let blk = p.blocks();
    let pos: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| blk[r] > blk[c]).collect();
    if pos.len() != ny {
        return Err(Error::Internal(format!("chart has {ny} coordinates but G/P has dimension {}", pos.len())));
    }
    let mut factors = Vec::with_capacity(letters.len());
    let mut inverses = Vec::with_capacity(letters.len());
    let mut k = 0;
    for l in &letters {
        match *l {
            Letter::Y(i) => {
                factors.push(y_i(n, i, u[k].clone()));
                inverses.push(y_i(n, i, u[k].neg()));
                k += 1;
            }
            Letter::S(i) => {
                factors.push(crate::group::s_dot_inv(n, i));
                inverses.push(s_dot(n, i));
            }
        }
    }
    // suffix[t] = g_{t+1} ... g_N, suffix_inv[t] its inverse
    let len = letters.len();
    let mut suffix = vec![Matrix::<RatFunc>::identity(n); len + 1];
    let mut suffix_inv = vec![Matrix::<RatFunc>::identity(n); len + 1];
    for t in (0..len).rev() {
        suffix[t] = factors[t].mul(&suffix[t + 1]);
        suffix_inv[t] = suffix_inv[t + 1].mul(&inverses[t]);
    }
    let mut ycols: Vec<Vec<RatFunc>> = Vec::new();
    for (t, l) in letters.iter().enumerate() {
        if let Letter::Y(i) = *l {
            let mut e = Matrix::<RatFunc>::zeros(n, n);
            e.set(i, i - 1, RatFunc::one());
            let m = suffix_inv[t + 1].mul(&e).mul(&suffix[t + 1]);
            ycols.push(pos.iter().map(|&(r, c)| m.get(r, c).clone()).collect());
        }
    }
    let mut zcols: Vec<Vec<RatFunc>> = Vec::new();
    for &(r0, c0) in &pos {
        let mut e = Matrix::<RatFunc>::zeros(n, n);
        e.set(r0, c0, RatFunc::one());
        let m = suffix_inv[0].mul(&e).mul(&suffix[0]);
        zcols.push(pos.iter().map(|&(r, c)| m.get(r, c).clone()).collect());
    }
    let ym = Matrix::from_fn(ny, ny, |a, b| ycols[b][a].clone());
    let zm = Matrix::from_fn(ny, ny, |a, b| zcols[b][a].clone());
    let h = zm.det().div(&ym.det())?;
    Ok((h, u))
}

/// `pi_P^* omega_P^{-1} / sigma_lw` in the coordinates of `y_i`.
pub fn f_p(word: &ReducedWord, p: &ParabolicType) -> Result<Arc<SectionFunction>> {
    check_symbolic(word.n())?;
    SECTIONS.get_or_compute(key(word, p), || compute_f_p(word, p))
}

fn compute_f_p(word: &ReducedWord, p: &ParabolicType) -> Result<SectionFunction> {
    let (h, u) = lowest_weight_section(word, p)?;
    let hl = match h.as_laurent() {
        Some(l) if l.is_monomial() => l.clone(),
        _ => return Err(Error::LowestWeightAmbiguous(format!("lowest weight section {h} is not a monomial in chart {word}, P = {p}"))),
    };
    let m: Exponent = match hl.terms().next() {
        Some((e, _)) if e.len() == u.len() => e.clone(),
        _ => vec![0; u.len()],
    };
    let expo: Vec<i32> = m.iter().map(|&mk| 1 - mk).collect();

    let chi = chart_torus_weights(word, p);
    let n = word.n();
    let mut total = vec![0i64; n];
    for (e, c) in expo.iter().zip(&chi) {
        for (t, x) in total.iter_mut().zip(c) {
            *t += *e as i64 * x;
        }
    }
    let lp = lambda_p(p);
    let shifted: Vec<Rational> = total.iter().zip(lp.lift()).map(|(t, l)| &Rational::from_int(*t) + l).collect();
    if shifted.iter().any(|x| x != &shifted[0]) {
        return Err(Error::NoSolution(format!("u^{expo:?} has weight {total:?}, not -lambda_P mod 1 for P = {p}")));
    }

    let pi = pi_p_in_charts(word, p)?;
    let mut f = RatFunc::one();
    for (pk, &e) in pi.iter().zip(&expo) {
        f = f.mul(&pk.powi(e)?);
    }
    match f.as_laurent() {
        Some(l) if l.is_polynomial() => {
            let x = coordinate_vars("x", word.len());
            let vs = x.first().map(|v| v.vars().clone()).unwrap_or_else(|| tropflag_arith::vars::<&str>(&[]));
            Ok(SectionFunction { poly: l.with_vars(&vs).unwrap_or_else(|_| l.clone()) })
        }
        _ => Err(Error::NoSolution(format!("pullback {f} is not a polynomial in chart {word}, P = {p}"))),
    }
}

/// `omega_lambda^{-1} = prod_P f_P^{c_P}` over the chain of `lambda`.
pub fn omega_inv(lambda: &DominantWeight, word: &ReducedWord) -> Result<SectionFunction> {
    if lambda.n() != word.n() {
        return Err(Error::DimensionMismatch { expected: word.n(), got: lambda.n() });
    }
    let chain = chain_decomposition(lambda)?;
    if !chain.is_integral() {
        return Err(Error::NotIntegral(lambda.to_string()));
    }
    let x = coordinate_vars("x", word.len());
    let vs = x.first().map(|v| v.vars().clone()).unwrap_or_else(|| tropflag_arith::vars::<&str>(&[]));
    let mut out = SectionFunction { poly: LaurentPoly::one(&vs) };
    for (p, c) in &chain.terms {
        let e = c.to_i64().filter(|&e| e >= 0).ok_or_else(|| Error::NotIntegral(lambda.to_string()))?;
        out = out.mul(&f_p(word, p)?.pow(e as u32));
    }
    Ok(out)
}

/// Exponent of the lexicographically maximal term (`x_1 > x_2 > ...`).
pub fn nu(s: &SectionFunction) -> Result<Vec<i64>> {
    s.poly.leading_term().map(|(e, _)| e.iter().map(|&k| k as i64).collect()).ok_or(Error::ZeroSection)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub lambda: String,
    pub word: String,
    pub nu: Vec<i64>,
    pub nu_vee: Vec<Rational>,
    pub equal: bool,
    pub omega_inv: String,
}

/// Compare `nu(omega_lambda^{-1})` with `nu^v(p_lambda)`.
pub fn conjecture_check(lambda: &DominantWeight, word: &ReducedWord) -> Result<ConjectureReport> {
    conjecture_check_with(lambda, word, NumericOptions::default())
}

pub fn conjecture_check_with(lambda: &DominantWeight, word: &ReducedWord, opts: NumericOptions) -> Result<ConjectureReport> {
    let omega = omega_inv(lambda, word)?;
    let nu_point = nu(&omega)?;
    let nu_vee = nu_vee_report(lambda, word, opts)?.value()?;
    let equal = nu_point.len() == nu_vee.len() && nu_point.iter().zip(&nu_vee).all(|(a, b)| &Rational::from_int(*a) == b);
    Ok(ConjectureReport {
        n: word.n(),
        lambda: lambda.fundamental_string(),
        word: word.to_string(),
        nu: nu_point,
        nu_vee,
        equal,
        omega_inv: omega.to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepFailure {
    pub lambda: String,
    pub word: String,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub cases: Vec<ConjectureReport>,
    pub failures: Vec<SweepFailure>,
    /// Weights skipped because the critical point is not integral.
    pub skipped: Vec<String>,
}

impl SweepReport {
    pub fn equal(&self) -> usize {
        self.cases.iter().filter(|c| c.equal).count()
    }

    pub fn mismatches(&self) -> Vec<&ConjectureReport> {
        self.cases.iter().filter(|c| !c.equal).collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} cases: {} equal, {} unequal, {} unsupported; {} weights skipped (not integral)",
            self.cases.len() + self.failures.len(),
            self.equal(),
            self.cases.len() - self.equal(),
            self.failures.len(),
            self.skipped.len()
        )
    }
}

/// Dominant weights with fundamental coefficients in `0..=bound`.
pub fn weights_up_to(n: usize, bound: u32) -> Vec<DominantWeight> {
    (0..n - 1)
        .map(|_| 0..=bound as i64)
        .multi_cartesian_product()
        .map(|c| DominantWeight::from_fundamental_ints(&c).expect("nonnegative coefficients"))
        .collect()
}

/// `conjecture_check` over all integral weights up to `bound` and the given
/// words (all reduced words when `None`). Failures are collected.
pub fn sweep(n: usize, bound: u32, words: Option<Vec<ReducedWord>>) -> Result<SweepReport> {
    let words = match words {
        Some(w) => w,
        None => reduced_words(n)?,
    };
    let mut report = SweepReport::default();
    let mut lambdas = Vec::new();
    for l in weights_up_to(n, bound) {
        if is_integral(&l)? {
            lambdas.push(l);
        } else {
            report.skipped.push(l.fundamental_string());
        }
    }
    let jobs: Vec<(DominantWeight, ReducedWord)> = lambdas.iter().cartesian_product(&words).map(|(l, w)| (l.clone(), w.clone())).collect();
    let results: Vec<_> = jobs.par_iter().map(|(l, w)| (l, w, conjecture_check(l, w))).collect();
    for (l, w, r) in results {
        match r {
            Ok(c) => report.cases.push(c),
            Err(e) => report.failures.push(SweepFailure {
                lambda: l.fundamental_string(),
                word: w.to_string(),
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
        }
    }
    report.cases.sort_by(|a, b| (&a.lambda, &a.word).cmp(&(&b.lambda, &b.word)));
    report.failures.sort_by(|a, b| (&a.lambda, &a.word).cmp(&(&b.lambda, &b.word)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, s: &str) -> ReducedWord {
        ReducedWord::parse(n, s).unwrap()
    }

    #[test]
    fn y_chart_212() {
        let x = coordinate_vars("x", 3);
        let m = y_chart_matrix(&word(3, "212"), &x);
        assert_eq!(m.get(1, 0), &x[1]);
        assert_eq!(m.get(2, 0), &x[0].mul(&x[1]));
        assert_eq!(m.get(2, 1), &x[0].add(&x[2]));
    }

    #[test]
    fn borel_weil_rho() {
        let rho = DominantWeight::from_ints(&[2, 1, 0]).unwrap();
        let got = borel_weil_valuations(&rho, &word(3, "212")).unwrap();
        let expect: BTreeSet<Vec<i64>> =
            [[0, 0, 0], [0, 1, 0], [0, 2, 1], [0, 1, 1], [1, 1, 0], [1, 0, 0], [1, 2, 1], [2, 1, 0]].iter().map(|v| v.to_vec()).collect();
        assert_eq!(got, expect);
        let l = DominantWeight::from_ints(&[3, 0]).unwrap();
        assert_eq!(borel_weil_valuations(&l, &word(2, "1")).unwrap().len(), 4);
    }

    #[test]
    fn projection_and_weights_212() {
        let w = word(3, "212");
        let p = ParabolicType::new(3, [1]).unwrap();
        let x = coordinate_vars("x", 3);
        let pi = pi_p_in_charts(&w, &p).unwrap();
        assert_eq!(pi[0], x[0].add(&x[2]));
        assert_eq!(pi[1], x[1].mul(&x[2]).neg());
        assert_eq!(&pi_p_in_charts(&w, &ParabolicType::borel(3)).unwrap()[..], &x[..]);
        assert_eq!(chart_torus_weights(&w, &ParabolicType::borel(3)), vec![vec![0, -1, 1], vec![-1, 1, 0], vec![0, -1, 1]]);
        assert_eq!(chart_torus_weights(&w, &p), vec![vec![0, -1, 1], vec![-1, 0, 1]]);
    }

    #[test]
    fn sections_212() {
        let w = word(3, "212");
        assert_eq!(f_p(&w, &ParabolicType::borel(3)).unwrap().to_string(), "x1*x2^2*x3");
        let fp = f_p(&w, &ParabolicType::new(3, [1]).unwrap()).unwrap();
        let mut terms: Vec<String> = fp.poly.terms().map(|(e, c)| format!("{c}:{e:?}")).collect();
        terms.sort();
        assert_eq!(terms, vec!["-1:[0, 1, 2]", "-1:[1, 1, 1]"]);
        let lam = DominantWeight::parse(3, "2w1+5w2").unwrap();
        let om = omega_inv(&lam, &w).unwrap();
        assert_eq!(nu(&om).unwrap(), vec![2, 3, 2]);
        let c = conjecture_check(&lam, &w).unwrap();
        assert!(c.equal);
        assert_eq!(f_p(&word(2, "1"), &ParabolicType::borel(2)).unwrap().to_string(), "x1");
    }

    #[test]
    fn projection_without_single_vanishing_minor() {
        // the first coordinate of this chart is not a ratio of two flag minors
        let w = word(4, "212321");
        let p = ParabolicType::new(4, [2]).unwrap();
        let pi = pi_p_in_charts(&w, &p).unwrap();
        let x = [1.3, 0.6, 2.2, 0.9, 1.7, 0.4];
        let u: Vec<f64> = pi.iter().map(|f| f.eval_f64(&x)).collect();
        let g = crate::peel::chart_matrix(4, &chart_letters(&w, &p), &u);
        let rest = g.inverse().unwrap().mul(&y_chart_matrix(&w, &x));
        let blk = p.blocks();
        for r in 0..4 {
            for c in 0..4 {
                if blk[r] > blk[c] {
                    assert!(rest.get(r, c).abs() < 1e-9, "({r}, {c}) = {}", rest.get(r, c));
                }
            }
        }
        let lam = DominantWeight::parse(4, "3w1+3w3").unwrap();
        assert!(conjecture_check(&lam, &w).unwrap().equal);
    }
}
