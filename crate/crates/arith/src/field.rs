//! The field interface shared by exact, symbolic and series scalars.

use std::fmt::Debug;

use crate::rational::Rational;
use crate::ArithError;

/// Whether a value is known to be zero, known to be nonzero, or undecidable at
/// the retained precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown,
}

pub trait Field: Clone + Debug + Send + Sync + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ArithError>;
    fn zero_test(&self) -> ZeroTest;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    fn div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&other.inv()?))
    }

    fn is_zero(&self) -> bool {
        self.zero_test() == ZeroTest::Zero
    }

    fn powi(&self, e: i32) -> Result<Self, ArithError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, ArithError> {
        if Rational::is_zero(self) {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn zero_test(&self) -> ZeroTest {
        if Rational::is_zero(self) {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, ArithError> {
        if *self == 0.0 {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
    fn zero_test(&self) -> ZeroTest {
        if *self == 0.0 {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}
