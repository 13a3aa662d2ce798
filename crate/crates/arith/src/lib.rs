//! Exact arithmetic kernel: rationals, multivariate Laurent polynomials and
//! rational functions over the rationals, truncated Puiseux series with
//! cancellation-aware valuations, and matrices over any of them.

pub mod error;
pub mod field;
pub mod gcd;
pub mod laurent;
pub mod matrix;
pub mod puiseux;
pub mod ratfunc;
pub mod rational;

pub use error::ArithError;
pub use field::{Field, ZeroTest};
pub use laurent::{vars, Exponent, LaurentPoly, Vars};
pub use matrix::{Ldu, Matrix};
pub use puiseux::{recognize, PuiseuxSeries, SeriesKind};
pub use ratfunc::RatFunc;
pub use rational::{q, Rational};
