//! Tropical critical points of the type A superpotential, string polytopes,
//! canonical sections and the comparison of their valuations.

pub mod cache;
pub mod crit;
pub mod error;
pub mod group;
pub mod peel;
pub mod polytope;
pub mod quiver;
pub mod sections;
pub mod superpot;
pub mod tropsolve;
pub mod weights;

pub use error::{Error, Result};
