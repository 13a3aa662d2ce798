//! The mirror side: the quiver chart `theta_M`, the toric charts
//! `x_{-i}` on `Z`, the superpotential in those charts and its
//! tropicalization (string polytopes), the transition between the two charts
//! and the valuation `nu^v` of the critical point.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use tropflag_arith::{vars, Field, Matrix, PuiseuxSeries, RatFunc, Rational, Vars};

use crate::cache::Memo;
use crate::crit::{expand_critical_point, ExpansionOptions};
use crate::error::{Error, Result};
use crate::group::{chart_x_minus, chi, coroot, gauss_factorize, inverse_twist, phi_full, twist, x_minus_word, x_word};
use crate::peel::{plan, Letter, PeelPlan};
use crate::polytope::HPolytope;
use crate::quiver::Quiver;
use crate::tropsolve::{solve_tropical, TropicalPoint};
use crate::weights::{cartan, DominantWeight, ParabolicType, ReducedWord};

/// Largest rank handled by the symbolic pipelines.
pub const SYMBOLIC_MAX_N: usize = 4;
/// Truncation cap for the numeric `nu^v` route.
pub const MAX_ORDER: usize = 64;
/// Relative tolerance on leading coefficients when re-evaluating a chart.
pub const DEFAULT_CHART_TOL: f64 = 1e-6;

fn check_symbolic(n: usize) -> Result<()> {
    if n > SYMBOLIC_MAX_N {
        return Err(Error::SymbolicBlowup { n, max: SYMBOLIC_MAX_N });
    }
    Ok(())
}

/// The word `i_0 = (1, 2, ..., n-1, 1, ..., n-2, ..., 1, 2, 1)`.
pub fn theta_word(n: usize) -> ReducedWord {
    let letters = (1..n).flat_map(|s| 1..=n - s).collect();
    ReducedWord::new(n, letters).expect("i_0 is reduced")
}

/// Vertical arrows in the order of `i_0`: segment `s`, letter `r` uses the
/// arrow into `v_{n-r,s}`.
pub fn theta_arrows(q: &Quiver) -> Vec<usize> {
    let n = q.n();
    (1..n)
        .flat_map(|s| (1..=n - s).map(move |r| (n - r, s)))
        .map(|(i, j)| q.vertical_into(i, j).expect("vertical arrow"))
        .collect()
}

/// `q_n = 1`, `q_i / q_{i+1}` = (vertical arrow into `v_ii`)(horizontal arrow into `v_{i+1,i}`).
pub fn theta_torus<F: Field>(q: &Quiver, z: &[F]) -> Vec<F> {
    let n = q.n();
    let mut out = vec![F::one(); n];
    for i in (1..n).rev() {
        let v = q.vertical_into(i, i).expect("vertical arrow");
        let h = q.horizontal_into(i + 1, i).expect("horizontal arrow");
        out[i - 1] = out[i].mul(&z[v]).mul(&z[h]);
    }
    out
}

/// `theta_M(z) = Phi(q(z), x_{i_0}(vertical arrows))`.
pub fn theta_m<F: Field>(q: &Quiver, z: &[F]) -> Result<Matrix<F>> {
    Ok(theta_m_full(q, z)?.0)
}

/// `theta_M(z)` together with `u1 = x_{i_0}(...)` and the torus part.
pub fn theta_m_full<F: Field>(q: &Quiver, z: &[F]) -> Result<(Matrix<F>, Matrix<F>, Vec<F>)> {
    if z.len() != q.num_arrows() {
        return Err(Error::DimensionMismatch { expected: q.num_arrows(), got: z.len() });
    }
    let n = q.n();
    let vals: Vec<F> = theta_arrows(q).into_iter().map(|a| z[a].clone()).collect();
    let u1 = x_word(n, theta_word(n).letters(), &vals);
    let torus = theta_torus(q, z);
    let (b, _) = phi_full(&torus, &u1)?;
    Ok((b, u1, torus))
}

/// One symbolic variable per arrow, named by its label.
pub fn arrow_variables(q: &Quiver) -> Vec<RatFunc> {
    let names: Vec<&str> = q.arrows().iter().map(|a| a.label.as_str()).collect();
    let vs = vars(&names);
    (0..names.len()).map(|k| RatFunc::var(&vs, k)).collect()
}

/// Vertex variables `x_ij` and the arrow values `x_h / x_t` they induce.
pub fn vertex_variables(q: &Quiver) -> (Vec<RatFunc>, Vec<RatFunc>) {
    let names: Vec<String> = (0..q.num_vertices())
        .map(|v| {
            let (i, j) = q.position(v);
            format!("x{i}{j}")
        })
        .collect();
    let vs = vars(&names);
    let x: Vec<RatFunc> = (0..names.len()).map(|k| RatFunc::var(&vs, k)).collect();
    let z = q.arrows().iter().map(|a| x[a.head].div(&x[a.tail]).expect("nonzero variable")).collect();
    (x, z)
}

/// Variables `q1..qn, z1..zN` of the chart `x_{-i}`.
pub fn chart_variables(word: &ReducedWord) -> (Vars, Vec<RatFunc>, Vec<RatFunc>) {
    let n = word.n();
    let names: Vec<String> = (1..=n).map(|i| format!("q{i}")).chain((1..=word.len()).map(|k| format!("z{k}"))).collect();
    let vs = vars(&names);
    let all: Vec<RatFunc> = (0..names.len()).map(|k| RatFunc::var(&vs, k)).collect();
    let (q, z) = all.split_at(n);
    (vs, q.to_vec(), z.to_vec())
}

/// `chi(u2)` for `u2` of the chart `x_{-i}`, in closed form:
/// `sum_k alpha_{i_k}(q) z_k^{-1} prod_{j>k} z_j^{-<alpha_{i_j}, alpha_{i_k}^v>}`.
pub fn chart_u2_character<F: Field>(word: &ReducedWord, q: &[F], z: &[F]) -> Result<F> {
    let l = word.letters();
    let mut acc = F::zero();
    for k in 0..l.len() {
        let i = l[k];
        let mut term = q[i - 1].div(&q[i])?.div(&z[k])?;
        for j in k + 1..l.len() {
            term = term.mul(&z[j].powi(-(cartan(l[j], i) as i32))?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// `W` in the chart `x_{-i}`, computed from matrices, with the `u2` part
/// cross-checked against the closed form.
pub fn chart_superpotential<F: Field>(word: &ReducedWord, q: &[F], z: &[F]) -> Result<(F, F)> {
    let n = word.n();
    let u1 = twist(&x_minus_word(n, word.letters(), z)?)?;
    let (_, u2) = phi_full(q, &u1)?;
    Ok((chi(&u1), chi(&u2)))
}

/// An affine function `<c_coeffs, c> + <lambda_coeffs, lambda>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AffineForm {
    pub c: Vec<Rational>,
    pub lambda: Vec<Rational>,
}

impl AffineForm {
    pub fn eval(&self, c: &[Rational], lambda_lift: &[Rational]) -> Rational {
        let a: Rational = self.c.iter().zip(c).map(|(x, y)| x * y).sum();
        let b: Rational = self.lambda.iter().zip(lambda_lift).map(|(x, y)| x * y).sum();
        a + b
    }

    pub fn constant(&self, lambda_lift: &[Rational]) -> Rational {
        self.lambda.iter().zip(lambda_lift).map(|(x, y)| x * y).sum()
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .lambda
            .iter()
            .enumerate()
            .map(|(i, x)| (format!("l{}", i + 1), x))
            .chain(self.c.iter().enumerate().map(|(k, x)| (format!("c{}", k + 1), x)))
            .filter(|(_, x)| !x.is_zero());
        let mut first = true;
        for (name, x) in terms {
            let sign = if x.is_negative() { "-" } else { "+" };
            let mag = x.abs();
            let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
            if first {
                write!(f, "{}{coeff}{name}", if x.is_negative() { "-" } else { "" })?;
            } else {
                write!(f, " {sign} {coeff}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

static FORMS: Memo<Vec<AffineForm>> = Memo::new();

fn compute_forms(word: &ReducedWord) -> Result<Vec<AffineForm>> {
    let n = word.n();
    let (_, q, z) = chart_variables(word);
    let (w1, w2) = chart_superpotential(word, &q, &z)?;
    let closed = chart_u2_character(word, &q, &z)?;
    if w2 != closed {
        return Err(Error::Internal(format!("chi(u2) in chart {word} disagrees with the closed form")));
    }
    let w = w1.add(&w2);
    let mut forms = BTreeSet::new();
    for (e, _) in w.expand_positive()? {
        let lambda = e[..n].iter().map(|&k| Rational::from_int(k as i64)).collect();
        let c = e[n..].iter().map(|&k| Rational::from_int(k as i64)).collect();
        forms.insert(AffineForm { c, lambda });
    }
    Ok(forms.into_iter().collect())
}

/// Tropicalization of `W` in the chart `x_{-i}`: one form per monomial.
/// The forms do not depend on `lambda`, which enters on instantiation.
pub fn superpotential_forms(word: &ReducedWord) -> Result<Arc<Vec<AffineForm>>> {
    check_symbolic(word.n())?;
    let mut key = vec![word.n()];
    key.extend_from_slice(word.letters());
    FORMS.get_or_compute(key, || compute_forms(word))
}

pub fn superpotential_tropical(lambda: &DominantWeight, word: &ReducedWord) -> Result<Arc<Vec<AffineForm>>> {
    if lambda.n() != word.n() {
        return Err(Error::DimensionMismatch { expected: word.n(), got: lambda.n() });
    }
    superpotential_forms(word)
}

/// `{c : every form >= 0}` at a fixed weight.
#[derive(Clone, Debug, Serialize)]
pub struct StringPolytope {
    pub n: usize,
    pub word: String,
    pub lambda: Vec<Rational>,
    pub forms: Vec<String>,
    pub polytope: HPolytope,
    pub lattice_points: Vec<Vec<i64>>,
}

impl StringPolytope {
    pub fn contains(&self, c: &[Rational]) -> bool {
        self.polytope.contains(c)
    }
}

pub fn string_polytope_hrep(lambda: &DominantWeight, word: &ReducedWord) -> Result<(Arc<Vec<AffineForm>>, HPolytope)> {
    let forms = superpotential_tropical(lambda, word)?;
    let lift = lambda.lift();
    let a = forms.iter().map(|f| f.c.iter().map(|x| -x).collect()).collect();
    let b = forms.iter().map(|f| f.constant(lift)).collect();
    Ok((forms, HPolytope::new(word.len(), a, b)?))
}

pub fn string_polytope(lambda: &DominantWeight, word: &ReducedWord) -> Result<StringPolytope> {
    let (forms, polytope) = string_polytope_hrep(lambda, word)?;
    let lattice_points = polytope.lattice_points()?;
    Ok(StringPolytope {
        n: word.n(),
        word: word.to_string(),
        lambda: lambda.lift().to_vec(),
        forms: forms.iter().map(|f| f.to_string()).collect(),
        polytope,
        lattice_points,
    })
}

/// `(x_{-i})^{-1} o theta_M` as rational functions of the arrow variables.
#[derive(Clone, Debug)]
pub struct ChartTransition {
    pub n: usize,
    pub word: ReducedWord,
    pub q: Vec<RatFunc>,
    pub z: Vec<RatFunc>,
}

impl ChartTransition {
    /// Min-plus evaluation at arrow valuations.
    pub fn tropicalize(&self, sigma: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.z.iter().map(|f| f.tropicalize(sigma)).collect::<std::result::Result<_, _>>()?)
    }

    pub fn eval_f64(&self, arrows: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.q.iter().map(|f| f.eval_f64(arrows)).collect(), self.z.iter().map(|f| f.eval_f64(arrows)).collect())
    }
}

static TRANSITIONS: Memo<ChartTransition> = Memo::new();
static PLANS: Memo<PeelPlan> = Memo::new();

fn borel_plan(word: &ReducedWord) -> Result<Arc<PeelPlan>> {
    let mut key = vec![word.n()];
    key.extend_from_slice(word.letters());
    PLANS.get_or_compute(key, || {
        let letters: Vec<Letter> = word.letters().iter().map(|&i| Letter::Y(i)).collect();
        plan(word.n(), &letters, &ParabolicType::borel(word.n()))
    })
}

/// Coordinates `z` of a lower triangular `x_{-i}(z)`: peel the unipotent
/// factors `y_{i_k}(p_k)` and undo the torus bookkeeping
/// `p_k = z_k prod_{j<k} z_j^{<alpha_{i_k}, alpha_{i_j}^v>}`. Also returns the
/// peeled remainder and the torus part `prod_k alpha_{i_k}^v(1/z_k)` it should equal.
pub fn lower_chart_coordinates<F: Field>(word: &ReducedWord, lower: &Matrix<F>) -> Result<(Vec<F>, Matrix<F>, Matrix<F>)> {
    let n = word.n();
    let pl = borel_plan(word)?;
    let (p, rest) = pl.peel(lower)?;
    let l = word.letters();
    let mut z: Vec<F> = Vec::with_capacity(p.len());
    for k in 0..p.len() {
        let mut zk = p[k].clone();
        for j in 0..k {
            zk = zk.mul(&z[j].powi(-(cartan(l[k], l[j]) as i32))?);
        }
        z.push(zk);
    }
    let mut torus = Matrix::identity(n);
    for (k, &i) in l.iter().enumerate() {
        torus = torus.mul(&coroot(n, i, &z[k].inv()?)?);
    }
    Ok((z, rest, torus))
}

fn compute_transition(word: &ReducedWord) -> Result<ChartTransition> {
    let n = word.n();
    let quiver = Quiver::new(n);
    let z = arrow_variables(&quiver);
    let vals: Vec<RatFunc> = theta_arrows(&quiver).into_iter().map(|a| z[a].clone()).collect();
    let u1 = x_word(n, theta_word(n).letters(), &vals);
    let q = theta_torus(&quiver, &z);
    let lower = inverse_twist(&u1)?;
    let (zc, rest, torus) = lower_chart_coordinates(word, &lower)?;
    if rest != torus {
        return Err(Error::Internal(format!("peeled remainder in chart {word} is not the expected torus part")));
    }
    for (name, f) in q.iter().enumerate().map(|(i, f)| (format!("q{}", i + 1), f)).chain(zc.iter().enumerate().map(|(k, f)| (format!("z{}", k + 1), f))) {
        if !f.is_subtraction_free() {
            return Err(Error::NotSubtractionFree(format!("{name} = {f} in chart {word}")));
        }
    }
    Ok(ChartTransition { n, word: word.clone(), q, z: zc })
}

/// The transition `(x_{-i})^{-1} o theta_M`, computed once per word.
pub fn chart_transition_symbolic(word: &ReducedWord) -> Result<Arc<ChartTransition>> {
    check_symbolic(word.n())?;
    let mut key = vec![word.n()];
    key.extend_from_slice(word.letters());
    TRANSITIONS.get_or_compute(key, || compute_transition(word))
}

/// `(q, z)` with `b = x_{-i}(q, z)`.
pub fn chart_invert<F: Field>(word: &ReducedWord, b: &Matrix<F>) -> Result<(Vec<F>, Vec<F>)> {
    let g = gauss_factorize(b)?;
    let lower = inverse_twist(&g.u1)?;
    let (z, _, _) = lower_chart_coordinates(word, &lower)?;
    Ok((g.q, z))
}

/// Re-evaluate the chart and compare valuations and leading coefficients entrywise.
pub fn verify_chart_series(word: &ReducedWord, b: &Matrix<PuiseuxSeries>, q: &[PuiseuxSeries], z: &[PuiseuxSeries], tol: f64) -> Result<()> {
    let fwd = chart_x_minus(word, q, z)?;
    for (x, y) in b.entries().iter().zip(fwd.entries()) {
        match (x.val(), y.val()) {
            (Err(_), Err(_)) => {}
            (Ok(vx), Ok(vy)) if vx == vy => {
                let (cx, cy) = (x.leading_coeff().unwrap_or(0.0), y.leading_coeff().unwrap_or(0.0));
                if (cx - cy).abs() > tol * cx.abs().max(1e-300) {
                    return Err(Error::Internal(format!("chart re-evaluation differs: leading {cx} vs {cy}")));
                }
            }
            (Err(_), Ok(_)) if y.leading_coeff().map_or(true, |c| c.abs() <= tol) => {}
            _ => return Err(Error::Internal("chart re-evaluation changes a valuation".into())),
        }
    }
    Ok(())
}

/// `nu^v` from the symbolic transition, evaluated min-plus at the arrow valuations.
pub fn nu_vee_symbolic(point: &TropicalPoint, word: &ReducedWord) -> Result<Vec<Rational>> {
    if point.n() != word.n() {
        return Err(Error::DimensionMismatch { expected: word.n(), got: point.n() });
    }
    chart_transition_symbolic(word)?.tropicalize(&point.sigma)
}

#[derive(Clone, Copy, Debug)]
pub struct NumericOptions {
    pub start_order: usize,
    pub max_order: usize,
    /// Relative tolerance of the chart re-evaluation check.
    pub tol: f64,
    /// Newton tolerance of the critical point expansion.
    pub newton_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { start_order: crate::crit::DEFAULT_K, max_order: MAX_ORDER, tol: DEFAULT_CHART_TOL, newton_tol: crate::crit::DEFAULT_NEWTON_TOL }
    }
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::PrecisionExhausted | Error::NotInBigCell | Error::Arith(tropflag_arith::ArithError::ZeroSeries))
}

/// `nu^v` from the Puiseux expansion of the critical point: `theta_M` over
/// series, inverted into the chart, valuations read off. The truncation
/// order doubles on exhausted precision. Returns the order used.
pub fn nu_vee_numeric(lambda: &DominantWeight, word: &ReducedWord, opts: NumericOptions) -> Result<(Vec<Rational>, usize)> {
    if lambda.n() != word.n() {
        return Err(Error::DimensionMismatch { expected: word.n(), got: lambda.n() });
    }
    let mut order = opts.start_order.max(1);
    loop {
        let attempt = (|| {
            let e = expand_critical_point(lambda, ExpansionOptions { order, tol: opts.newton_tol, ..Default::default() })?;
            let quiver = e.quiver().clone();
            let arrows: Vec<PuiseuxSeries> = (0..quiver.num_arrows()).map(|a| e.arrow_series(a)).collect();
            let b = theta_m(&quiver, &arrows)?;
            let (q, z) = chart_invert(word, &b)?;
            verify_chart_series(word, &b, &q, &z, opts.tol)?;
            Ok::<_, Error>(z.iter().map(|s| s.val()).collect::<std::result::Result<Vec<_>, _>>()?)
        })();
        match attempt {
            Err(e) if retryable(&e) && order * 2 <= opts.max_order => order *= 2,
            Err(e) => return Err(e),
            Ok(v) => return Ok((v, order)),
        }
    }
}

/// Both `nu^v` routes side by side.
#[derive(Clone, Debug, Serialize)]
pub struct NuVeeReport {
    pub symbolic: Option<Vec<Rational>>,
    pub numeric: Option<Vec<Rational>>,
    pub symbolic_error: Option<String>,
    pub numeric_error: Option<String>,
    pub order: Option<usize>,
}

impl NuVeeReport {
    /// The agreed value; a disagreement between the routes is an error.
    pub fn value(&self) -> Result<Vec<Rational>> {
        match (&self.symbolic, &self.numeric) {
            (Some(s), Some(m)) if s != m => Err(Error::Internal(format!("nu_vee routes disagree: symbolic {s:?}, numeric {m:?}"))),
            (Some(s), _) => Ok(s.clone()),
            (None, Some(m)) => Ok(m.clone()),
            (None, None) => Err(Error::Internal(format!(
                "no nu_vee route succeeded (symbolic: {}, numeric: {})",
                self.symbolic_error.as_deref().unwrap_or("-"),
                self.numeric_error.as_deref().unwrap_or("-")
            ))),
        }
    }
}

pub fn nu_vee_report(lambda: &DominantWeight, word: &ReducedWord, opts: NumericOptions) -> Result<NuVeeReport> {
    let point = solve_tropical(lambda)?;
    let sym = nu_vee_symbolic(&point, word);
    let num = nu_vee_numeric(lambda, word, opts);
    Ok(NuVeeReport {
        symbolic_error: sym.as_ref().err().map(|e| e.to_string()),
        numeric_error: num.as_ref().err().map(|e| e.to_string()),
        order: num.as_ref().ok().map(|(_, k)| *k),
        symbolic: sym.ok(),
        numeric: num.ok().map(|(v, _)| v),
    })
}

/// `nu^v_{lambda,i}(p_lambda)`, requiring the two routes to agree when both run.
pub fn nu_vee(lambda: &DominantWeight, word: &ReducedWord) -> Result<Vec<Rational>> {
    nu_vee_report(lambda, word, NumericOptions::default())?.value()
}
