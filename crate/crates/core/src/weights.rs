//! Type-A root data: dominant weights, Weyl group elements as permutations,
//! reduced words of the longest element, parabolic types and positive
//! subexpressions.
//!
//! Indices of simple roots and letters are 1-based (`1..n-1`) as in the usual
//! notation; positions inside words are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use tropflag_arith::Rational;

use crate::error::{Error, Result};

/// Default bound on `n` for exhaustive reduced-word enumeration.
pub const REDUCED_WORD_BOUND: usize = 5;

/// A dominant weight of `SL_n`/`PGL_n` given by a lift `(l_1 >= ... >= l_n)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominantWeight {
    lift: Vec<Rational>,
}

impl DominantWeight {
    pub fn new(lift: Vec<Rational>) -> Result<Self> {
        if lift.len() < 2 {
            return Err(Error::Invalid(format!("need n >= 2, got {}", lift.len())));
        }
        if lift.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(fmt_vec(&lift)));
        }
        Ok(DominantWeight { lift })
    }

    pub fn from_ints(lift: &[i64]) -> Result<Self> {
        Self::new(lift.iter().map(|&x| Rational::from_int(x)).collect())
    }

    /// Weight with fundamental coefficients `m_1, ..., m_{n-1}`, lifted with `l_n = 0`.
    pub fn from_fundamental(coeffs: &[Rational]) -> Result<Self> {
        if coeffs.iter().any(|c| c.is_negative()) {
            return Err(Error::NotDominant(fmt_vec(coeffs)));
        }
        let n = coeffs.len() + 1;
        let mut lift = vec![Rational::zero(); n];
        for i in (0..n - 1).rev() {
            lift[i] = &lift[i + 1] + &coeffs[i];
        }
        Self::new(lift)
    }

    pub fn from_fundamental_ints(coeffs: &[i64]) -> Result<Self> {
        Self::from_fundamental(&coeffs.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>())
    }

    /// Parse either a lift `"7,5,0"` or a sum of fundamental weights `"2w1+5w2"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('w') {
            let mut coeffs = vec![Rational::zero(); n.saturating_sub(1)];
            for term in s.split('+') {
                let term = term.trim();
                let (c, idx) = term
                    .split_once('w')
                    .ok_or_else(|| Error::Invalid(format!("bad weight term {term:?}")))?;
                let c = c.trim().trim_end_matches('*');
                let c: Rational = if c.is_empty() {
                    Rational::one()
                } else {
                    c.parse().map_err(|_| Error::Invalid(format!("bad coefficient {c:?}")))?
                };
                let i: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad fundamental index {idx:?}")))?;
                if i == 0 || i >= n {
                    return Err(Error::Invalid(format!("fundamental index w{i} out of range for n = {n}")));
                }
                coeffs[i - 1] += c;
            }
            Self::from_fundamental(&coeffs)
        } else if s == "0" {
            Self::new(vec![Rational::zero(); n])
        } else {
            let lift: Vec<Rational> = s
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Invalid(format!("bad lift entry {x:?}"))))
                .collect::<Result<_>>()?;
            if lift.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: lift.len() });
            }
            Self::new(lift)
        }
    }

    pub fn n(&self) -> usize {
        self.lift.len()
    }

    pub fn lift(&self) -> &[Rational] {
        &self.lift
    }

    /// `m_i = l_i - l_{i+1}`.
    pub fn fundamental_coeffs(&self) -> Vec<Rational> {
        self.lift.windows(2).map(|w| &w[0] - &w[1]).collect()
    }

    /// Lift with `l_n = 0`.
    pub fn canonical_lift(&self) -> Vec<Rational> {
        let last = self.lift.last().unwrap().clone();
        self.lift.iter().map(|x| x - &last).collect()
    }

    /// Lift with entries summing to zero.
    pub fn zero_sum_lift(&self) -> Vec<Rational> {
        let mean = self.lift.iter().sum::<Rational>() / Rational::from_int(self.n() as i64);
        self.lift.iter().map(|x| x - &mean).collect()
    }

    pub fn canonical(&self) -> Self {
        DominantWeight { lift: self.canonical_lift() }
    }

    pub fn is_integral(&self) -> bool {
        self.fundamental_coeffs().iter().all(|m| m.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.fundamental_coeffs().iter().all(|m| m.is_zero())
    }

    /// Same weight, lift shifted by `c` in every entry.
    pub fn shifted(&self, c: &Rational) -> Self {
        DominantWeight { lift: self.lift.iter().map(|x| x + c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        DominantWeight { lift: self.lift.iter().zip(&other.lift).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        assert!(!c.is_negative());
        DominantWeight { lift: self.lift.iter().map(|x| x * c).collect() }
    }

    /// Equality as weights, i.e. up to a constant shift of the lift.
    pub fn same_weight(&self, other: &Self) -> bool {
        self.n() == other.n() && self.fundamental_coeffs() == other.fundamental_coeffs()
    }

    /// Display as fundamental coefficients, e.g. `2w1+5w2`.
    pub fn fundamental_string(&self) -> String {
        let parts: Vec<String> = self
            .fundamental_coeffs()
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| if m.is_one() { format!("w{}", i + 1) } else { format!("{m}w{}", i + 1) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_vec(&self.lift))
    }
}

impl fmt::Debug for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `2 rho = sum of positive roots`, lift `(n-1, n-3, ..., 1-n)`.
pub fn two_rho(n: usize) -> DominantWeight {
    DominantWeight::from_ints(&(0..n).map(|i| n as i64 - 1 - 2 * i as i64).collect::<Vec<_>>()).unwrap()
}

/// A permutation of `{0, ..., n-1}` stored by images; `s_i` swaps `i-1` and `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn longest(n: usize) -> Self {
        Perm((0..n).rev().collect())
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    /// `self * s_i`.
    pub fn times_simple(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.0.swap(i - 1, i);
        p
    }

    /// `(self * other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Self) -> Self {
        Perm(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Perm(inv)
    }

    /// Coxeter length = number of inversions.
    pub fn length(&self) -> usize {
        let p = &self.0;
        (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
    }

    /// True when `self * s_i < self`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    pub fn from_word(n: usize, letters: &[usize]) -> Self {
        letters.iter().fold(Self::identity(n), |p, &i| p.times_simple(i))
    }
}

/// A reduced word `(i_1, ..., i_N)` for the longest element `w_0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        let len = n * (n - 1) / 2;
        if letters.len() != len || letters.iter().any(|&i| i == 0 || i >= n) {
            return Err(Error::Invalid(format!("{letters:?} is not a word of length {len} in 1..{}", n - 1)));
        }
        let p = Perm::from_word(n, &letters);
        if p != Perm::longest(n) || p.length() != len {
            return Err(Error::Invalid(format!("{letters:?} is not a reduced word for w0")));
        }
        Ok(ReducedWord { n, letters })
    }

    /// Parse `"212"` (single digits) or `"2,1,2"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let letters: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Invalid(format!("bad letter {x:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Invalid(format!("bad letter {c:?}"))))
                .collect::<Result<_>>()?
        };
        Self::new(n, letters)
    }

    /// `(1, 2, ..., n-1, 1, 2, ..., n-2, ..., 1, 2, 1)`.
    pub fn standard(n: usize) -> Self {
        let mut letters = Vec::new();
        for k in (1..n).rev() {
            letters.extend(1..=k);
        }
        ReducedWord { n, letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 10 {
            for i in &self.letters {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.letters.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All reduced words of `w_0`, in lexicographic order.
pub fn reduced_words(n: usize) -> Result<Vec<ReducedWord>> {
    reduced_words_bounded(n, REDUCED_WORD_BOUND)
}

pub fn reduced_words_bounded(n: usize, max: usize) -> Result<Vec<ReducedWord>> {
    if n > max {
        return Err(Error::RankTooLarge { n, max });
    }
    if n < 2 {
        return Err(Error::Invalid("need n >= 2".into()));
    }
    let target = n * (n - 1) / 2;
    let mut out = Vec::new();
    let mut stack = vec![(Perm::identity(n), Vec::new())];
    while let Some((p, word)) = stack.pop() {
        if word.len() == target {
            out.push(ReducedWord { n, letters: word });
            continue;
        }
        for i in (1..n).rev() {
            if !p.has_right_descent(i) {
                let mut w = word.clone();
                w.push(i);
                stack.push((p.times_simple(i), w));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// A parabolic subgroup `P >= B`, recorded by the simple reflections `I_P` it contains.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicType {
    n: usize,
    ip: BTreeSet<usize>,
}

impl ParabolicType {
    pub fn new(n: usize, ip: impl IntoIterator<Item = usize>) -> Result<Self> {
        let ip: BTreeSet<usize> = ip.into_iter().collect();
        if ip.iter().any(|&i| i == 0 || i >= n) {
            return Err(Error::Invalid(format!("I_P {ip:?} not inside 1..{}", n - 1)));
        }
        Ok(ParabolicType { n, ip })
    }

    pub fn borel(n: usize) -> Self {
        ParabolicType { n, ip: BTreeSet::new() }
    }

    /// Parabolic with complement `I^P = ip_complement`.
    pub fn from_complement(n: usize, complement: &BTreeSet<usize>) -> Self {
        ParabolicType { n, ip: (1..n).filter(|i| !complement.contains(i)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ip(&self) -> &BTreeSet<usize> {
        &self.ip
    }

    /// `I^P`, the simple reflections outside `P`.
    pub fn complement(&self) -> BTreeSet<usize> {
        (1..self.n).filter(|i| !self.ip.contains(i)).collect()
    }

    pub fn is_borel(&self) -> bool {
        self.ip.is_empty()
    }

    /// Block index of each row `0..n`; blocks break after `k` for `k` in `I^P`.
    pub fn blocks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        let mut cur = 0;
        for r in 0..self.n {
            out.push(cur);
            if !self.ip.contains(&(r + 1)) {
                cur += 1;
            }
        }
        out
    }

    /// Longest element of the Levi Weyl group.
    pub fn w_p(&self) -> Perm {
        let blocks = self.blocks();
        let mut images = Vec::with_capacity(self.n);
        let mut start = 0;
        while start < self.n {
            let mut end = start;
            while end + 1 < self.n && blocks[end + 1] == blocks[start] {
                end += 1;
            }
            images.extend((start..=end).rev());
            start = end + 1;
        }
        Perm(images)
    }

    /// `dim G/P`.
    pub fn dim(&self) -> usize {
        let b = self.blocks();
        (0..self.n).map(|i| (i + 1..self.n).filter(|&j| b[i] != b[j]).count()).sum()
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.ip.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Debug for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_P={self}")
    }
}

/// Sum of the positive roots outside the Levi.
pub fn lambda_p(p: &ParabolicType) -> DominantWeight {
    let n = p.n();
    let b = p.blocks();
    let mut lift = vec![0i64; n];
    for i in 0..n {
        for j in i + 1..n {
            if b[i] != b[j] {
                lift[i] += 1;
                lift[j] -= 1;
            }
        }
    }
    DominantWeight::from_ints(&lift).expect("sum of positive roots is dominant")
}

/// Positions (0-based) of the positive subexpression for `v` inside `word`,
/// found by the right-to-left greedy scan.
pub fn positive_subexpression(word: &ReducedWord, v: &Perm) -> Vec<usize> {
    let mut u = v.clone();
    let mut circled = Vec::new();
    for (t, &i) in word.letters().iter().enumerate().rev() {
        if u.has_right_descent(i) {
            circled.push(t);
            u = u.times_simple(i);
        }
    }
    circled.reverse();
    circled
}

/// Dimension of `V_lambda` by the Weyl dimension formula.
pub fn weyl_dim(lambda: &DominantWeight) -> Result<u128> {
    if !lambda.is_integral() {
        return Err(Error::NonIntegralWeight(lambda.to_string()));
    }
    let l = lambda.canonical_lift();
    let n = l.len();
    let mut num = Rational::one();
    for i in 0..n {
        for j in i + 1..n {
            let diff = &(&l[i] - &l[j]) + &Rational::from_int((j - i) as i64);
            num = &num * &(diff / Rational::from_int((j - i) as i64));
        }
    }
    let v = num.to_i64().ok_or_else(|| Error::Internal(format!("dimension {num} too large")))?;
    Ok(v as u128)
}

/// `<alpha_i + ... + alpha_j, alpha_k^v + ... + alpha_l^v>` for `i <= j`, `k <= l`.
pub fn pairing(root: (usize, usize), coroot: (usize, usize)) -> i64 {
    let d = |a: usize, b: usize| i64::from(a == b);
    let (i, j) = root;
    let (k, l) = coroot;
    d(i, k) + d(j + 1, l + 1) - d(i, l + 1) - d(j + 1, k)
}

/// Cartan integer `<alpha_i, alpha_j^v>`.
pub fn cartan(i: usize, j: usize) -> i64 {
    pairing((i, i), (j, j))
}
