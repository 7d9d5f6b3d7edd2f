//! Exact prolongation of Lie-algebra vector fields to jet spaces, invariance
//! checks for differential functions, and the counting sequences
//! `i_n, j_n, s_n, h_n` of prolonged group actions.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod jetspace;

pub use algebra::{Monomial, Polynomial, Rational, RationalExpr};
pub use calculus::{ProlongedVectorField, VectorField};
pub use error::{Error, Result};
pub use invariants::{DimensionReport, LieAlgebraBasis};
pub use jetspace::{JetSpace, JetVar, MultiIndex};
