//! Exact decision procedures for linear operators on real polynomial spaces
//! that preserve non-negative, positive or elliptic polynomials.
//!
//! Operators are written as differential operators with polynomial
//! coefficients, `T = sum_i q_i(x) D^i`. Preservation of the non-negative
//! cone on polynomials of degree at most `d = 2k` is equivalent to the
//! parametric Hankel matrix `((i+j)! q_{i+j}(y))_{i,j<=k}` being positive
//! semidefinite for every real `y`; [`decide`] checks that exactly with
//! principal minors and Sturm sequences, and produces a counterexample
//! polynomial when it fails.

pub mod cli;
pub mod decide;
pub mod decision;
pub mod error;
pub mod hankel;
pub mod linalg;
pub mod moments;
pub mod multivar;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod text;
pub mod weyl;

pub use decision::Decision;
pub use error::{Error, Result};
pub use poly::{MultiPoly, UniPoly};
pub use rational::Rational;
pub use weyl::{ConstCoeffOp, MultiWeylOp, WeylOp};
