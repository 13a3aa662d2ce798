//! Truncated Puiseux series with exact exponents and floating-point coefficients.
//!
//! A series lives on the grid `(1/M)Z`. Truncated series carry an absolute
//! precision: coefficients below it are known, everything from it on is not.
//! Addition can cancel leading slots; those are dropped and the relative
//! precision shrinks, so a leading term is never reported beyond what the
//! inputs determine. When every retained slot cancels, the result is an
//! `Unknown` series `O(t^p)` and any later division by it fails with
//! [`ArithError::PrecisionExhausted`].

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::field::{Field, ZeroTest};
use crate::rational::Rational;
use crate::ArithError;

pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_CANCEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// The exact zero.
    Zero,
    /// A finite sum of terms, known to all orders.
    Exact,
    /// Known below the absolute precision `lead + coeffs.len()`.
    Truncated,
    /// `O(t^{lead/M})`: cancellation consumed every retained slot.
    Unknown,
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxSeries {
    grid: u32,
    lead: i64,
    coeffs: Vec<f64>,
    kind: SeriesKind,
    order: usize,
    tol: f64,
    cancelled: u32,
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl PuiseuxSeries {
    pub fn zero() -> Self {
        PuiseuxSeries {
            grid: 1,
            lead: 0,
            coeffs: Vec::new(),
            kind: SeriesKind::Zero,
            order: DEFAULT_ORDER,
            tol: DEFAULT_CANCEL_TOL,
            cancelled: 0,
        }
    }

    /// `c t^e`, exact.
    pub fn monomial(c: f64, exponent: &Rational) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        let grid = exponent.denom().to_u32().expect("grid denominator fits in u32");
        let lead = (exponent * &Rational::from_int(grid as i64)).to_i64().expect("exponent fits");
        PuiseuxSeries {
            grid,
            lead,
            coeffs: vec![c],
            kind: SeriesKind::Exact,
            order: DEFAULT_ORDER,
            tol: DEFAULT_CANCEL_TOL,
            cancelled: 0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, &Rational::zero())
    }

    /// Series `sum_k coeffs[k] t^{lead_exponent + k/M}` known through `k = coeffs.len() - 1`.
    pub fn truncated(grid: u32, lead_exponent: &Rational, coeffs: Vec<f64>) -> Self {
        Self::build(grid, lead_exponent, coeffs, SeriesKind::Truncated)
    }

    /// Finite exact sum `sum_k coeffs[k] t^{lead_exponent + k/M}`.
    pub fn exact(grid: u32, lead_exponent: &Rational, coeffs: Vec<f64>) -> Self {
        Self::build(grid, lead_exponent, coeffs, SeriesKind::Exact)
    }

    fn build(grid: u32, lead_exponent: &Rational, coeffs: Vec<f64>, kind: SeriesKind) -> Self {
        assert!(grid > 0);
        let scaled = lead_exponent * &Rational::from_int(grid as i64);
        assert!(scaled.is_integer(), "leading exponent {lead_exponent} not on grid 1/{grid}");
        let lead = scaled.to_i64().expect("exponent fits");
        let mut s = PuiseuxSeries {
            grid,
            lead,
            coeffs,
            kind,
            order: DEFAULT_ORDER,
            tol: DEFAULT_CANCEL_TOL,
            cancelled: 0,
        };
        s.normalize_exact_zeros();
        s
    }

    fn normalize_exact_zeros(&mut self) {
        let skip = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        match self.kind {
            SeriesKind::Exact => {
                self.coeffs.drain(..skip);
                self.lead += skip as i64;
                while self.coeffs.last() == Some(&0.0) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    *self = Self::zero();
                }
            }
            SeriesKind::Truncated => {
                self.coeffs.drain(..skip);
                self.lead += skip as i64;
                if self.coeffs.is_empty() {
                    self.kind = SeriesKind::Unknown;
                }
            }
            _ => {}
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of retained slots beyond the leading one (the `K` of a truncated series).
    pub fn truncation_order(&self) -> Option<usize> {
        match self.kind {
            SeriesKind::Truncated => Some(self.coeffs.len() - 1),
            _ => None,
        }
    }

    /// Slots that cancelled in the operation producing this value.
    pub fn cancelled_slots(&self) -> u32 {
        self.cancelled
    }

    /// Leading exponent; fails on the zero series and on exhausted precision.
    pub fn val(&self) -> Result<Rational, ArithError> {
        match self.kind {
            SeriesKind::Zero => Err(ArithError::ZeroSeries),
            SeriesKind::Unknown => Err(ArithError::ZeroSeries),
            _ => Ok(Rational::new(self.lead, self.grid as i64)),
        }
    }

    pub fn leading_coeff(&self) -> Option<f64> {
        self.coeffs.first().copied()
    }

    /// Positivity in the sense of `K_{>0}`: nonzero with positive leading coefficient.
    pub fn is_positive(&self) -> bool {
        matches!(self.kind, SeriesKind::Exact | SeriesKind::Truncated) && self.coeffs[0] > 0.0
    }

    /// Absolute precision as an exponent, `None` when infinite.
    pub fn precision(&self) -> Option<Rational> {
        self.abs_prec().map(|p| Rational::new(p, self.grid as i64))
    }

    fn abs_prec(&self) -> Option<i64> {
        match self.kind {
            SeriesKind::Zero | SeriesKind::Exact => None,
            SeriesKind::Truncated => Some(self.lead + self.coeffs.len() as i64),
            SeriesKind::Unknown => Some(self.lead),
        }
    }

    /// Coefficient of `t^e`; `None` when beyond the known precision or off-grid
    /// information is unavailable.
    pub fn coeff_at(&self, e: &Rational) -> Option<f64> {
        let scaled = e * &Rational::from_int(self.grid as i64);
        if !scaled.is_integer() {
            return match self.abs_prec() {
                Some(p) if e >= &Rational::new(p, self.grid as i64) => None,
                _ => Some(0.0),
            };
        }
        let idx = scaled.to_i64()?;
        if let Some(p) = self.abs_prec() {
            if idx >= p {
                return None;
            }
        }
        if self.kind == SeriesKind::Zero || idx < self.lead {
            return Some(0.0);
        }
        Some(self.coeffs.get((idx - self.lead) as usize).copied().unwrap_or(0.0))
    }

    /// Same series on the finer grid `1/m` (`m` a multiple of the current grid).
    pub fn regrid(&self, m: u32) -> Self {
        assert!(m % self.grid == 0, "grid {m} does not refine {}", self.grid);
        let f = (m / self.grid) as usize;
        if f == 1 {
            return self.clone();
        }
        let mut s = self.clone();
        s.grid = m;
        s.lead *= f as i64;
        match self.kind {
            SeriesKind::Zero | SeriesKind::Unknown => {}
            SeriesKind::Exact => {
                let mut c = vec![0.0; (self.coeffs.len() - 1) * f + 1];
                for (k, &x) in self.coeffs.iter().enumerate() {
                    c[k * f] = x;
                }
                s.coeffs = c;
            }
            SeriesKind::Truncated => {
                let mut c = vec![0.0; self.coeffs.len() * f];
                for (k, &x) in self.coeffs.iter().enumerate() {
                    c[k * f] = x;
                }
                s.coeffs = c;
            }
        }
        s
    }

    fn slot(&self, idx: i64) -> f64 {
        if idx < self.lead {
            return 0.0;
        }
        self.coeffs.get((idx - self.lead) as usize).copied().unwrap_or(0.0)
    }

    fn meta(&self, other: &Self) -> (usize, f64) {
        (self.order.max(other.order), self.tol.max(other.tol))
    }

    fn unknown(grid: u32, prec: i64, order: usize, tol: f64, cancelled: u32) -> Self {
        PuiseuxSeries { grid, lead: prec, coeffs: Vec::new(), kind: SeriesKind::Unknown, order, tol, cancelled }
    }

    /// Sum with cancellation tracking.
    pub fn add_series(&self, other: &Self) -> Self {
        if self.kind == SeriesKind::Zero {
            return other.clone();
        }
        if other.kind == SeriesKind::Zero {
            return self.clone();
        }
        let (order, tol) = self.meta(other);
        let m = lcm(self.grid, other.grid);
        let a = self.regrid(m);
        let b = other.regrid(m);
        let prec = match (a.abs_prec(), b.abs_prec()) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p),
            (Some(p), Some(q)) => Some(p.min(q)),
        };
        let known: Vec<&Self> = [&a, &b]
            .into_iter()
            .filter(|s| matches!(s.kind, SeriesKind::Exact | SeriesKind::Truncated))
            .collect();
        let start = match known.iter().map(|s| s.lead).min() {
            Some(s) => s,
            None => return Self::unknown(m, prec.unwrap(), order, tol, 0),
        };
        let end = match prec {
            Some(p) => p,
            None => known.iter().map(|s| s.lead + s.coeffs.len() as i64).max().unwrap(),
        };
        if start >= end {
            return Self::unknown(m, end, order, tol, 0);
        }
        let mut coeffs = Vec::with_capacity((end - start) as usize);
        let mut scale: f64 = 0.0;
        let mut cancelled = 0u32;
        let mut lead = start;
        let mut leading = true;
        for idx in start..end {
            let (x, y) = (a.slot(idx), b.slot(idx));
            scale = scale.max(x.abs()).max(y.abs());
            let c = x + y;
            if leading {
                if c == 0.0 || (x != 0.0 && y != 0.0 && c.abs() <= tol * scale) {
                    if x != 0.0 || y != 0.0 {
                        cancelled += 1;
                    }
                    lead = idx + 1;
                    continue;
                }
                leading = false;
            }
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return match prec {
                Some(p) => Self::unknown(m, p, order, tol, cancelled),
                None => Self::zero(),
            };
        }
        let kind = if prec.is_some() { SeriesKind::Truncated } else { SeriesKind::Exact };
        let mut s = PuiseuxSeries { grid: m, lead, coeffs, kind, order, tol, cancelled };
        if kind == SeriesKind::Exact {
            s.normalize_exact_zeros();
        }
        s
    }

    pub fn neg_series(&self) -> Self {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = -*c;
        }
        s
    }

    pub fn mul_series(&self, other: &Self) -> Self {
        use SeriesKind::*;
        let (order, tol) = self.meta(other);
        if self.kind == Zero || other.kind == Zero {
            return Self::zero();
        }
        let m = lcm(self.grid, other.grid);
        let a = self.regrid(m);
        let b = other.regrid(m);
        match (a.kind, b.kind) {
            (Unknown, Unknown) => Self::unknown(m, a.lead + b.lead, order, tol, 0),
            (Unknown, _) => Self::unknown(m, a.lead + b.lead, order, tol, 0),
            (_, Unknown) => Self::unknown(m, a.lead + b.lead, order, tol, 0),
            (Exact, Exact) => {
                let mut c = vec![0.0; a.coeffs.len() + b.coeffs.len() - 1];
                for (i, x) in a.coeffs.iter().enumerate() {
                    for (j, y) in b.coeffs.iter().enumerate() {
                        c[i + j] += x * y;
                    }
                }
                let mut s = PuiseuxSeries { grid: m, lead: a.lead + b.lead, coeffs: c, kind: Exact, order, tol, cancelled: 0 };
                s.normalize_exact_zeros();
                s
            }
            _ => {
                let len = match (a.kind, b.kind) {
                    (Truncated, Truncated) => a.coeffs.len().min(b.coeffs.len()),
                    (Truncated, _) => a.coeffs.len(),
                    _ => b.coeffs.len(),
                };
                let mut c = vec![0.0; len];
                for (k, ck) in c.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for i in 0..=k {
                        if let (Some(x), Some(y)) = (a.coeffs.get(i), b.coeffs.get(k - i)) {
                            acc += x * y;
                        }
                    }
                    *ck = acc;
                }
                PuiseuxSeries { grid: m, lead: a.lead + b.lead, coeffs: c, kind: Truncated, order, tol, cancelled: 0 }
            }
        }
    }

    pub fn inv_series(&self) -> Result<Self, ArithError> {
        match self.kind {
            SeriesKind::Zero => Err(ArithError::DivisionByZeroSeries),
            SeriesKind::Unknown => Err(ArithError::PrecisionExhausted),
            SeriesKind::Exact if self.coeffs.len() == 1 => {
                let mut s = self.clone();
                s.lead = -self.lead;
                s.coeffs[0] = 1.0 / self.coeffs[0];
                s.cancelled = 0;
                Ok(s)
            }
            _ => {
                let len = match self.kind {
                    SeriesKind::Truncated => self.coeffs.len(),
                    _ => self.order + 1,
                };
                let c0 = self.coeffs[0];
                let mut b = vec![0.0; len];
                b[0] = 1.0 / c0;
                for k in 1..len {
                    let mut acc = 0.0;
                    for j in 1..=k {
                        if let Some(cj) = self.coeffs.get(j) {
                            acc += cj * b[k - j];
                        }
                    }
                    b[k] = -acc / c0;
                }
                Ok(PuiseuxSeries {
                    grid: self.grid,
                    lead: -self.lead,
                    coeffs: b,
                    kind: SeriesKind::Truncated,
                    order: self.order,
                    tol: self.tol,
                    cancelled: 0,
                })
            }
        }
    }

    /// Truncate to at most `k + 1` retained slots.
    pub fn truncate(&self, k: usize) -> Self {
        let mut s = self.clone();
        if matches!(s.kind, SeriesKind::Exact | SeriesKind::Truncated) && s.coeffs.len() > k + 1 {
            s.coeffs.truncate(k + 1);
            s.kind = SeriesKind::Truncated;
        } else if s.kind == SeriesKind::Exact {
            s.coeffs.resize(k + 1, 0.0);
            s.kind = SeriesKind::Truncated;
        }
        s
    }

    /// Largest difference of known coefficients, on the common grid and over the
    /// slots known for both series.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let m = lcm(self.grid, other.grid);
        let a = self.regrid(m);
        let b = other.regrid(m);
        let start = a.lead.min(b.lead);
        let end = match (a.abs_prec(), b.abs_prec()) {
            (Some(p), Some(q)) => p.min(q),
            (Some(p), None) | (None, Some(p)) => p,
            (None, None) => (a.lead + a.coeffs.len() as i64).max(b.lead + b.coeffs.len() as i64),
        };
        (start..end).map(|i| (a.slot(i) - b.slot(i)).abs()).fold(0.0, f64::max)
    }
}

impl Field for PuiseuxSeries {
    fn zero() -> Self {
        PuiseuxSeries::zero()
    }
    fn one() -> Self {
        PuiseuxSeries::constant(1.0)
    }
    fn from_rational(r: &Rational) -> Self {
        PuiseuxSeries::constant(r.to_f64())
    }
    fn add(&self, o: &Self) -> Self {
        self.add_series(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add_series(&o.neg_series())
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_series(o)
    }
    fn neg(&self) -> Self {
        self.neg_series()
    }
    fn inv(&self) -> Result<Self, ArithError> {
        self.inv_series()
    }
    fn zero_test(&self) -> ZeroTest {
        match self.kind {
            SeriesKind::Zero => ZeroTest::Zero,
            SeriesKind::Unknown => ZeroTest::Unknown,
            _ => ZeroTest::NonZero,
        }
    }
}

/// Closest rational with denominator at most `max_den`, if within `tol`.
pub fn recognize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    let r = Rational::approximate(x, max_den)?;
    if (r.to_f64() - x).abs() <= tol {
        Some(r)
    } else {
        None
    }
}

fn fmt_exponent(e: &Rational) -> String {
    if e.is_integer() {
        format!("{e}")
    } else {
        format!("{{{e}}}")
    }
}

impl fmt::Display for PuiseuxSeries {
    /// Paper-style rendering, e.g. `t^{5/6} - 1/2 t^{7/6} + 3/8 t^{3/2} + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SeriesKind::Zero => return write!(f, "0"),
            SeriesKind::Unknown => {
                return write!(f, "O(t^{})", fmt_exponent(&Rational::new(self.lead, self.grid as i64)))
            }
            _ => {}
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let e = Rational::new(self.lead + k as i64, self.grid as i64);
            let mag = c.abs();
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = match recognize(mag, 1024, 1e-9) {
                Some(r) => r.to_string(),
                None => format!("{mag:.12}"),
            };
            if e.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                let var = if e.is_one() { "t".to_string() } else { format!("t^{}", fmt_exponent(&e)) };
                if coeff == "1" {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{coeff} {var}")?;
                }
            }
        }
        if self.kind == SeriesKind::Truncated {
            write!(f, " + ...")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
