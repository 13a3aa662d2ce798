//! Elementary matrices of `GL_n`, the representative of `w_0`, Gauss
//! decompositions of elements of the reduced double Bruhat cell, the twist map
//! and the superpotential. Everything is generic over the scalar [`Field`],
//! so the same code runs on rational functions and on Puiseux series.
//!
//! Letters `i` are 1-based: `x_i(z) = I + z E_{i,i+1}`, `y_i(z) = I + z E_{i+1,i}`.

use tropflag_arith::{Field, Matrix};

use crate::error::Result;
use crate::weights::ReducedWord;

pub fn x_i<F: Field>(n: usize, i: usize, z: F) -> Matrix<F> {
    let mut m = Matrix::identity(n);
    m.set(i - 1, i, z);
    m
}

pub fn y_i<F: Field>(n: usize, i: usize, z: F) -> Matrix<F> {
    let mut m = Matrix::identity(n);
    m.set(i, i - 1, z);
    m
}

/// `s_i = x_i(-1) y_i(1) x_i(-1)`, the block `[[0, -1], [1, 0]]`.
pub fn s_dot<F: Field>(n: usize, i: usize) -> Matrix<F> {
    let m = F::one().neg();
    x_i(n, i, m.clone()).mul(&y_i(n, i, F::one())).mul(&x_i(n, i, m))
}

/// Inverse of [`s_dot`], the block `[[0, 1], [-1, 0]]`.
pub fn s_dot_inv<F: Field>(n: usize, i: usize) -> Matrix<F> {
    let mut m = Matrix::identity(n);
    m.set(i - 1, i - 1, F::zero());
    m.set(i, i, F::zero());
    m.set(i - 1, i, F::one());
    m.set(i, i - 1, F::one().neg());
    m
}

/// `w0_bar = s_{i_1} ... s_{i_N}` for any reduced word of `w_0`.
pub fn w0_bar<F: Field>(n: usize) -> Matrix<F> {
    ReducedWord::standard(n).letters().iter().fold(Matrix::identity(n), |acc, &i| acc.mul(&s_dot(n, i)))
}

/// `w0_bar^{-1} = w0_bar^T` (a signed permutation matrix).
pub fn w0_bar_inv<F: Field>(n: usize) -> Matrix<F> {
    w0_bar::<F>(n).transpose()
}

/// `alpha_i^v(c) = diag(1, ..., c, 1/c, ..., 1)` with `c` in position `i`.
pub fn coroot<F: Field>(n: usize, i: usize, c: &F) -> Result<Matrix<F>> {
    let mut m = Matrix::identity(n);
    m.set(i - 1, i - 1, c.clone());
    m.set(i, i, c.inv()?);
    Ok(m)
}

/// `x_{-i}(z) = y_i(z) alpha_i^v(1/z)`.
pub fn x_minus<F: Field>(n: usize, i: usize, z: &F) -> Result<Matrix<F>> {
    Ok(y_i(n, i, z.clone()).mul(&coroot(n, i, &z.inv()?)?))
}

pub fn x_word<F: Field>(n: usize, letters: &[usize], z: &[F]) -> Matrix<F> {
    letters.iter().zip(z).fold(Matrix::identity(n), |acc, (&i, zk)| acc.mul(&x_i(n, i, zk.clone())))
}

pub fn y_word<F: Field>(n: usize, letters: &[usize], z: &[F]) -> Matrix<F> {
    letters.iter().zip(z).fold(Matrix::identity(n), |acc, (&i, zk)| acc.mul(&y_i(n, i, zk.clone())))
}

pub fn x_minus_word<F: Field>(n: usize, letters: &[usize], z: &[F]) -> Result<Matrix<F>> {
    let mut acc = Matrix::identity(n);
    for (&i, zk) in letters.iter().zip(z) {
        acc = acc.mul(&x_minus(n, i, zk)?);
    }
    Ok(acc)
}

/// `b = u1 w0_bar q^{-1} u2`.
#[derive(Clone, Debug)]
pub struct GaussTriple<F> {
    pub u1: Matrix<F>,
    pub q: Vec<F>,
    pub u2: Matrix<F>,
}

/// `Phi(q, u)`: the unique lower triangular `b` with `b = u w0_bar q^{-1} u2`.
pub fn phi<F: Field>(q: &[F], u: &Matrix<F>) -> Result<Matrix<F>> {
    Ok(phi_full(q, u)?.0)
}

/// `Phi(q, u)` together with the right factor `u2`.
pub fn phi_full<F: Field>(q: &[F], u: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    let n = u.rows();
    let qinv: Vec<F> = q.iter().map(|x| x.inv()).collect::<std::result::Result<_, _>>()?;
    let g = u.mul(&w0_bar(n)).mul(&Matrix::diagonal(&qinv));
    let f = g.ldu()?;
    let b = f.l.mul(&Matrix::diagonal(&f.d));
    let u2 = f.u.inverse()?;
    Ok((b, u2))
}

/// Unique factorization `b = u1 w0_bar q^{-1} u2` from the LDU decomposition of
/// `w0_bar^{-1} b`.
pub fn gauss_factorize<F: Field>(b: &Matrix<F>) -> Result<GaussTriple<F>> {
    let n = b.rows();
    let f = w0_bar_inv::<F>(n).mul(b).ldu()?;
    let u1 = w0_bar::<F>(n).mul(&f.l).mul(&w0_bar_inv(n));
    let q = f.d.iter().map(|x| x.inv()).collect::<std::result::Result<_, _>>()?;
    Ok(GaussTriple { u1, q, u2: f.u })
}

/// `eta(b) = [(w0_bar b^T)^{-1}]_+`.
pub fn twist<F: Field>(b: &Matrix<F>) -> Result<Matrix<F>> {
    let n = b.rows();
    let g = w0_bar::<F>(n).mul(&b.transpose()).inverse()?;
    Ok(g.ldu()?.u)
}

/// The lower triangular `b` in `U w0_bar U` with `eta(b) = u1`: the lower
/// factor of the UL decomposition of `(u1^T)^{-1} w0_bar`.
pub fn inverse_twist<F: Field>(u1: &Matrix<F>) -> Result<Matrix<F>> {
    let n = u1.rows();
    let g = u1.transpose().inverse()?.mul(&w0_bar(n));
    Ok(g.ul()?.1)
}

/// `chi(u) = sum_i u_{i,i+1}`.
pub fn chi<F: Field>(u: &Matrix<F>) -> F {
    (0..u.rows() - 1).fold(F::zero(), |acc, i| acc.add(u.get(i, i + 1)))
}

/// `hw(b) = q`, `W(b) = chi(u1) + chi(u2)`, `wt(b) = w0_bar diag(b)^{-1} w0_bar^{-1}`.
#[derive(Clone, Debug)]
pub struct HwWWt<F> {
    pub hw: Vec<F>,
    pub w: F,
    pub wt: Vec<F>,
}

pub fn hw_w_wt<F: Field>(b: &Matrix<F>) -> Result<HwWWt<F>> {
    let n = b.rows();
    let g = gauss_factorize(b)?;
    let dinv: Vec<F> = (0..n).map(|i| b.get(i, i).inv()).collect::<std::result::Result<_, _>>()?;
    let t = w0_bar::<F>(n).mul(&Matrix::diagonal(&dinv)).mul(&w0_bar_inv(n));
    Ok(HwWWt { hw: g.q, w: chi(&g.u1).add(&chi(&g.u2)), wt: (0..n).map(|i| t.get(i, i).clone()).collect() })
}

pub fn superpotential<F: Field>(b: &Matrix<F>) -> Result<F> {
    let g = gauss_factorize(b)?;
    Ok(chi(&g.u1).add(&chi(&g.u2)))
}

/// `Phi(q, eta(x_{-i}(z)))`.
pub fn chart_x_minus<F: Field>(word: &ReducedWord, q: &[F], z: &[F]) -> Result<Matrix<F>> {
    let n = word.n();
    let lower = x_minus_word(n, word.letters(), z)?;
    phi(q, &twist(&lower)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropflag_arith::{q as rq, Rational};

    fn r(x: i64) -> Rational {
        Rational::from_int(x)
    }

    fn close(a: &Matrix<f64>, b: &Matrix<f64>) -> bool {
        a.entries().iter().zip(b.entries()).all(|(x, y)| (x - y).abs() < 1e-9 * (1.0 + x.abs()))
    }

    #[test]
    fn s_dot_blocks() {
        let s: Matrix<Rational> = s_dot(2, 1);
        assert_eq!(s.to_rows(), vec![vec![r(0), r(-1)], vec![r(1), r(0)]]);
        assert_eq!(s.mul(&s_dot_inv(2, 1)), Matrix::identity(2));
        for n in 2..=5 {
            let w: Matrix<Rational> = w0_bar(n);
            assert_eq!(w.mul(&w0_bar_inv(n)), Matrix::identity(n));
        }
    }

    #[test]
    fn sl2_gauss() {
        let (z, qq) = (rq(3, 1), rq(5, 1));
        let b = Matrix::from_rows(vec![vec![&z / &qq, r(0)], vec![qq.recip(), z.recip()]]);
        let g = gauss_factorize(&b).unwrap();
        assert_eq!(g.u1.get(0, 1), &z);
        assert_eq!(g.u2.get(0, 1), &(&qq / &z));
        assert_eq!(&g.q[0] / &g.q[1], qq);
        assert_eq!(superpotential(&b).unwrap(), &z + &(&qq / &z));
        let w: Matrix<Rational> = w0_bar(3);
        let g = gauss_factorize(&w).unwrap();
        assert_eq!(g.u1, Matrix::identity(3));
        assert_eq!(g.u2, Matrix::identity(3));
        assert!(g.q.iter().all(|x| x.is_one()));
    }

    #[test]
    fn phi_inverts_gauss() {
        let u = x_word(3, &[1, 2, 1], &[2.0, 0.5, 3.0]);
        let q = [6.0, 2.0, 1.0];
        let b = phi(&q, &u).unwrap();
        assert!(b.is_lower_triangular());
        let g = gauss_factorize(&b).unwrap();
        assert!(close(&g.u1, &u));
        for (a, c) in g.q.iter().zip(q) {
            assert!((a - c).abs() < 1e-12);
        }
        let back = g.u1.mul(&w0_bar(3)).mul(&Matrix::diagonal(&[1.0 / q[0], 1.0 / q[1], 1.0])).mul(&g.u2);
        assert!(close(&back, &b));
    }

    #[test]
    fn twist_round_trip() {
        for word in [[1usize, 2, 1], [2, 1, 2]] {
            let lower = x_minus_word(3, &word, &[0.7, 1.9, 2.3]).unwrap();
            let u1 = twist(&lower).unwrap();
            assert!(u1.is_upper_triangular());
            let back = inverse_twist(&u1).unwrap();
            assert!(close(&back, &lower));
        }
        let lower = x_minus_word(2, &[1], &[4.0]).unwrap();
        let u1 = twist(&lower).unwrap();
        assert!((u1.get(0, 1) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sl2_chart() {
        let w = ReducedWord::standard(2);
        let b = chart_x_minus(&w, &[3.0, 1.0], &[2.0]).unwrap();
        assert!((superpotential(&b).unwrap() - (2.0 + 1.5)).abs() < 1e-12);
    }
}
