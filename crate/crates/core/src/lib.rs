//! Exact computation of mixed multiplicities of monomial ideals over a
//! cyclic module, together with the reduction machinery needed to check
//! them against Hilbert-Samuel multiplicities.

pub mod bhattacharya;
pub mod error;
pub mod field;
pub mod groebner;
pub mod harness;
pub mod linalg;
pub mod monomial;
pub mod monomial_ideal;
pub mod multiplicity;
pub mod poly;
pub mod reductions;
pub mod seed;

pub use error::{Error, Result};
