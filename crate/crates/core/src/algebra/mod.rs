//! Exact arithmetic kernel: rationals, sparse multivariate polynomials in jet
//! coordinates, rational expressions with exact zero testing, and rational
//! linear algebra.

mod expr;
mod gcd;
pub mod linalg;
mod monomial;
mod polynomial;

pub use expr::{RationalExpr, GCD_TERM_THRESHOLD};
pub use gcd::gcd;
pub use linalg::{nullspace, rank, solve};
pub use monomial::Monomial;
pub use polynomial::Polynomial;

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n / d`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
