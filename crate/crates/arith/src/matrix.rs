//! Dense matrices over any [`Field`], with the triangular factorizations used
//! for Gauss decompositions of group elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{Field, ZeroTest};
use crate::ArithError;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// `A = L * diag(d) * U` with `L` unit lower and `U` unit upper triangular.
#[derive(Debug, Clone)]
pub struct Ldu<F> {
    pub l: Matrix<F>,
    pub d: Vec<F>,
    pub u: Matrix<F>,
}

fn pivot_error(z: ZeroTest) -> ArithError {
    match z {
        ZeroTest::Unknown => ArithError::PrecisionExhausted,
        _ => ArithError::DivisionByZero,
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn map<G: Field>(&self, f: impl FnMut(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field, E>(&self, f: impl FnMut(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Division-free determinant (permutation expansion by dynamic programming
    /// over column subsets); exact for any commutative coefficients.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        assert!(n <= 20, "determinant too large");
        if n == 0 {
            return F::one();
        }
        let mut dp: Vec<Option<F>> = vec![None; 1 << n];
        dp[0] = Some(F::one());
        for mask in 0usize..(1 << n) {
            let Some(val) = dp[mask].clone() else { continue };
            let r = mask.count_ones() as usize;
            if r == n {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let mut term = val.mul(a);
                if above % 2 == 1 {
                    term = term.neg();
                }
                let nm = mask | (1 << c);
                dp[nm] = Some(match dp[nm].take() {
                    None => term,
                    Some(x) => x.add(&term),
                });
            }
        }
        dp[(1 << n) - 1].clone().unwrap_or_else(F::zero)
    }

    /// Minor on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> F {
        self.submatrix(rows, cols).det()
    }

    /// Doolittle factorization without pivoting. Fails when a leading principal
    /// minor vanishes (`DivisionByZero`) or cannot be decided (`PrecisionExhausted`).
    pub fn ldu(&self) -> Result<Ldu<F>, ArithError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut l = Matrix::identity(n);
        let mut u = Matrix::identity(n);
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let p = a.get(k, k).clone();
            let z = p.zero_test();
            if z != ZeroTest::NonZero {
                return Err(pivot_error(z));
            }
            let pinv = p.inv()?;
            for i in k + 1..n {
                let lik = a.get(i, k).mul(&pinv);
                l.set(i, k, lik);
            }
            for j in k + 1..n {
                let ukj = a.get(k, j).mul(&pinv);
                u.set(k, j, ukj);
            }
            for i in k + 1..n {
                let lik = l.get(i, k).clone();
                if lik.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a.get(k, j);
                    if akj.is_zero() {
                        continue;
                    }
                    let v = a.get(i, j).sub(&lik.mul(akj));
                    a.set(i, j, v);
                }
            }
            d.push(p);
        }
        Ok(Ldu { l, d, u })
    }

    /// `A = U * L` with `U` unit upper and `L` lower triangular (trailing
    /// principal minors must be nonzero).
    pub fn ul(&self) -> Result<(Matrix<F>, Matrix<F>), ArithError> {
        let n = self.rows;
        let flip = |m: &Matrix<F>| Matrix::from_fn(n, n, |i, j| m.get(n - 1 - i, n - 1 - j).clone());
        let f = self.ldu_of_flipped(&flip)?;
        let u = flip(&f.l);
        let du = Matrix::diagonal(&f.d).mul(&f.u);
        let l = flip(&du);
        Ok((u, l))
    }

    fn ldu_of_flipped(&self, flip: &dyn Fn(&Matrix<F>) -> Matrix<F>) -> Result<Ldu<F>, ArithError> {
        flip(self).ldu()
    }

    /// Inverse by Gauss-Jordan elimination with pivot search.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<F> = Matrix::identity(n);
        for k in 0..n {
            let piv = (k..n).find(|&r| a.get(r, k).zero_test() == ZeroTest::NonZero);
            let piv = match piv {
                Some(p) => p,
                None => {
                    let unknown = (k..n).any(|r| a.get(r, k).zero_test() == ZeroTest::Unknown);
                    return Err(if unknown { ArithError::PrecisionExhausted } else { ArithError::DivisionByZero });
                }
            };
            if piv != k {
                for j in 0..n {
                    let (x, y) = (a.get(k, j).clone(), a.get(piv, j).clone());
                    a.set(k, j, y);
                    a.set(piv, j, x);
                    let (x, y) = (inv.get(k, j).clone(), inv.get(piv, j).clone());
                    inv.set(k, j, y);
                    inv.set(piv, j, x);
                }
            }
            let pinv = a.get(k, k).inv()?;
            for j in 0..n {
                let v = a.get(k, j).mul(&pinv);
                a.set(k, j, v);
                let v = inv.get(k, j).mul(&pinv);
                inv.set(k, j, v);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub(&f.mul(inv.get(k, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Entries strictly above the diagonal are provably zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    #[test]
    fn det_matches_hand_value() {
        let a = m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(a.det(), Rational::from_int(2 * (3 - 2) + (1 - 3)));
    }

    #[test]
    fn ldu_reassembles() {
        let a = m(&[&[4, 3, 2], &[2, 5, 1], &[6, 1, 7]]);
        let f = a.ldu().unwrap();
        let back = f.l.mul(&Matrix::diagonal(&f.d)).mul(&f.u);
        assert_eq!(back, a);
    }

    #[test]
    fn ul_reassembles() {
        let a = m(&[&[4, 3, 2], &[2, 5, 1], &[6, 1, 7]]);
        let (u, l) = a.ul().unwrap();
        assert!(u.is_upper_triangular());
        assert!(l.is_lower_triangular());
        assert!((0..3).all(|i| u.get(i, i) == &Rational::one()));
        assert_eq!(u.mul(&l), a);
    }

    #[test]
    fn inverse_with_pivoting() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.inverse().unwrap(), a);
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.inverse().unwrap(), Matrix::from_rows(vec![vec![q(1, 1), q(-1, 1)], vec![q(-1, 1), q(2, 1)]]));
    }

    #[test]
    fn ldu_rejects_vanishing_minor() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.ldu().unwrap_err(), ArithError::DivisionByZero);
    }
}
