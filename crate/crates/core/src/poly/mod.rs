//! Exact sparse multivariate polynomials over the rationals.

mod monomial;
mod polynomial;
pub mod rational;
mod registry;
mod text;

pub use monomial::Monomial;
pub use polynomial::{Polynomial, Substitution};
pub use rational::{int, ratio, Rational};
pub use registry::{VarId, VarRegistry};
pub use text::parse_polynomial;

#[cfg(test)]
mod tests;
