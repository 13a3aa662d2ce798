//! Rational polytopes in H-representation `A c <= b` with lattice point
//! enumeration by Fourier-Motzkin projection and a bounded integer scan.

use std::collections::BTreeSet;

use serde::Serialize;
use tropflag_arith::Rational;

use crate::error::{Error, Result};

/// `{c : A c <= b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HPolytope {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    #[serde(skip)]
    dim: usize,
}

/// Coefficients, right-hand side and the set of input rows it combines.
type Row = (Vec<Rational>, Rational, u128);

/// Scale so that the first nonzero coefficient has absolute value 1.
fn normalize((a, b, h): Row) -> Row {
    match a.iter().chain(std::iter::once(&b)).find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs().recip();
            (a.iter().map(|x| x * &s).collect(), &b * &s, h)
        }
        None => (a, b, h),
    }
}

/// Eliminate coordinate `j`, the `eliminated`-th elimination. Rows combining
/// more than `eliminated + 1` inputs are redundant (Chernikov) and dropped, as
/// are rows whose input set contains that of another row (Kohler).
/// `None` when the system is infeasible.
fn eliminate(rows: &[Row], j: usize, eliminated: u32) -> Option<Vec<Row>> {
    let mut cands: Vec<Row> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        if r.0[j].is_positive() {
            pos.push(r);
        } else if r.0[j].is_negative() {
            neg.push(r);
        } else {
            cands.push(r.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let h = p.2 | q.2;
            if h.count_ones() > eliminated + 1 {
                continue;
            }
            let (sp, sq) = (-&q.0[j], p.0[j].clone());
            let a: Vec<Rational> = p.0.iter().zip(&q.0).map(|(x, y)| &(x * &sp) + &(y * &sq)).collect();
            cands.push(normalize((a, &(&p.1 * &sp) + &(&q.1 * &sq), h)));
        }
    }
    cands.sort_by_key(|r| r.2.count_ones());
    let mut kept: Vec<Row> = Vec::new();
    let mut seen: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    for r in cands {
        if r.0.iter().all(Rational::is_zero) {
            if r.1.is_negative() {
                return None;
            }
            continue;
        }
        if kept.iter().any(|k| k.2 & r.2 == k.2) || !seen.insert((r.0.clone(), r.1.clone())) {
            continue;
        }
        kept.push(r);
    }
    Some(kept)
}

impl HPolytope {
    pub fn new(dim: usize, a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        if let Some(row) = a.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
        }
        Ok(HPolytope { a, b, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, c: &[Rational]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, b)| {
            let lhs: Rational = row.iter().zip(c).map(|(x, y)| x * y).sum();
            &lhs <= b
        })
    }

    pub fn contains_int(&self, c: &[i64]) -> bool {
        let c: Vec<Rational> = c.iter().map(|&x| Rational::from_int(x)).collect();
        self.contains(&c)
    }

    /// All integer points, sorted lexicographically.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        let d = self.dim;
        if d == 0 {
            return Ok(if self.b.iter().all(|x| !x.is_negative()) { vec![vec![]] } else { vec![] });
        }
        // proj[j] constrains coordinates 0..=j only
        let mut proj: Vec<Vec<Row>> = vec![Vec::new(); d];
        if self.a.len() > 128 {
            return Err(Error::Invalid(format!("{} inequalities exceed the elimination limit of 128", self.a.len())));
        }
        proj[d - 1] = self.a.iter().cloned().zip(self.b.iter().cloned()).enumerate().map(|(k, (a, b))| normalize((a, b, 1u128 << k))).collect();
        for j in (1..d).rev() {
            match eliminate(&proj[j], j, (d - j) as u32) {
                Some(rows) => proj[j - 1] = rows,
                None => return Ok(Vec::new()),
            }
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(d);
        self.scan(&proj, &mut cur, &mut out)?;
        Ok(out)
    }

    fn scan(&self, proj: &[Vec<Row>], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
        let j = cur.len();
        if j == self.dim {
            out.push(cur.clone());
            return Ok(());
        }
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for (a, b, _) in &proj[j] {
            let rest: Rational = a.iter().zip(cur.iter()).map(|(x, &y)| x * &Rational::from_int(y)).sum();
            let rhs = b - &rest;
            if a[j].is_positive() {
                let v = &rhs / &a[j];
                hi = Some(hi.map_or(v.clone(), |h| Rational::min(&h, &v)));
            } else if a[j].is_negative() {
                let v = &rhs / &a[j];
                lo = Some(lo.map_or(v.clone(), |l| Rational::max(&l, &v)));
            } else if rhs.is_negative() {
                return Ok(());
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Invalid(format!("polytope is unbounded in coordinate {}", j + 1)));
        };
        let (lo, hi) = (lo.ceil().to_i64().unwrap_or(i64::MIN), hi.floor().to_i64().unwrap_or(i64::MAX));
        for v in lo..=hi {
            cur.push(v);
            self.scan(proj, cur, out)?;
            cur.pop();
        }
        Ok(())
    }
}
