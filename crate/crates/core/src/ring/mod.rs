//! Exact arithmetic: rationals, sparse multivariate polynomials, rational
//! functions and the linear-algebra kernels built on them.

mod matrix;
mod parse;
mod poly;
mod ratfunc;
mod registry;
mod sample;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use matrix::{Matrix, RankStrategy};
pub use parse::{parse_poly, parse_rat, parse_ratfunc};
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use registry::{same_registry, VarKind, VarRegistry};
pub use sample::{RatSampler, SAMPLE_BOUND};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rat = BigRational;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
