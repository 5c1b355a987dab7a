//! Exact experiments around the square sieve for quadratic fields generated
//! by `u(n) = f(g^n)`: arithmetic kernels, sieve-prime harvesting, character
//! sums, an exact field census, the sieve itself, and the exponent calculus
//! of the resulting bounds.

pub mod arith;
pub mod bounds;
pub mod census;
pub mod chars;
pub mod cli;
pub mod error;
pub mod harvest;
pub mod poly;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Polynomial, SequenceSpec};
