use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials belong to different variable registries")]
    RegistryMismatch,
    #[error("variable `{0}` is declared twice in one registry")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("substitution has no image for variable `{0}`")]
    MissingImage(String),
    #[error("variable `{0}` has no assigned value")]
    Unassigned(String),
    #[error("expected degree 2 in `{var}`, found degree {degree}")]
    NotQuadratic { var: String, degree: u32 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("map does not preserve hermiticity: block ({0},{1}) is not the transpose of block ({1},{0})")]
    NotHermiticityPreserving(usize, usize),
    #[error("form is not biquadratic: {0}")]
    WrongBidegree(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
