//! Linear maps on real matrix algebras in Choi-block form, block matrices,
//! partial transposition and exact PSD certification.

mod linear_map;
mod matrix;
mod permutation;
mod psd;

pub use linear_map::{qi_hou_map, LinearMap, MapClassification};
pub(crate) use linear_map::check_qi_hou_params;
pub use matrix::{BlockMatrix, RatMatrix};
pub use permutation::Permutation;
pub use psd::{is_psd_exact, LdlCertificate, NegativeWitness, PsdVerdict};
