//! MDS self-dual codes from generalized Reed-Solomon and extended generalized
//! Reed-Solomon codes over finite fields of odd characteristic.
//!
//! * [`ff`]: finite field arithmetic.
//! * [`grs`]: GRS generator matrices and the two self-dual assembly engines.
//! * [`constructions`]: the seven parameter families.
//! * [`verify`]: independent self-duality and MDS checks.
//! * [`census`]: which even lengths the known families reach for a given `q`.
//! * [`artifact`]: JSON form of constructed codes.

pub mod artifact;
pub mod census;
pub mod constructions;
pub mod ff;
pub mod grs;
pub mod matrix;
pub mod verify;

pub use census::{census_report, Census, CensusError, CensusReport};
pub use constructions::{
    build, construct, validate, ConstructionError, ConstructionParams, Theorem,
};
pub use ff::{make_field, FieldCtx, FieldElement, FieldError};
pub use grs::{CodeArtifact, ConstructionTrace, EvalVector, GrsError, ScalingVector};
pub use matrix::Matrix;
pub use verify::{check_self_dual, verify_artifact, VerificationReport, VerifyOptions};
