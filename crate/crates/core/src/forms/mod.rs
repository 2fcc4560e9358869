//! Biquadratic forms, the named special forms, exact identities among them,
//! decomposition certificates and a numerical nonnegativity scan.

mod biquad;
mod certificate;
mod decomposition;
mod identities;
mod nonneg;
mod replay;
mod special;

pub use biquad::{
    antisymmetric_square, biquadratic_of_map, block_term, cross_square, cyclic_form, map_from_biquadratic,
    mu_permutation, qi_hou_form, rename_to_reduced, x_var, y_var, BiquadraticForm, RenameReport, ShiftConvention,
};
pub use certificate::{validate, Certificate};
pub use decomposition::{
    decomposability_certificate, divisor_decomposition, divisor_summands, non_extremality_certificate,
    DecomposabilityCertificate, DecompositionCertificate, Summand, SummandKind, DECOMPOSABILITY_SCHEMA,
    DECOMPOSITION_SCHEMA,
};
pub use identities::{verify_identity, Identity, IdentityCheck};
pub use nonneg::{
    biquadratic_blocks, nonnegativity_scan, scan_biquadratic, CompiledPolynomial, NonnegScan, ScanOptions,
    DEFAULT_TOL,
};
pub use replay::{proof_replay_q41, replay_registry, ReplayReport};
pub use special::{
    octic_by_substitution, octic_prime_direct, octic_registry, senary_by_substitution, senary_registry,
    special_forms, SpecialForms, O_PRIME_TEXT, O_TEXT, Q_TEXT,
};
