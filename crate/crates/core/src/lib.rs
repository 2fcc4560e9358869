//! Exact construction and certification of positive linear maps on matrix
//! algebras, their biquadratic forms and entanglement witnesses.

pub mod error;
pub mod forms;
pub mod maps;
pub mod poly;
pub mod span;

pub use error::{Error, Result};
pub use forms::{qi_hou_form, BiquadraticForm};
pub use maps::{qi_hou_map, BlockMatrix, LinearMap, Permutation, PsdVerdict, RatMatrix};
pub use poly::{Monomial, Polynomial, Rational, Substitution, VarId, VarRegistry};
