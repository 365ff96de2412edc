//! Error type shared by every module.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("generators do not generate: {0}")]
    GeneratorsDontGenerate(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("cochain has degree 0; the homotopy operator needs degree at least {0}")]
    DegreeTooLow(usize),
    #[error("not a cocycle: d(c){tuple:?} = {value} (expected 0)")]
    NotACocycle { tuple: Vec<u32>, value: u32 },
    #[error("fiber mismatch: {0}")]
    MismatchedFiber(String),
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("reciprocity violation: {0}")]
    ReciprocityViolation(String),
    #[error("tube invariant depends on the choice of coboundary solution: {0}")]
    BetaDependence(String),
    #[error("cyclotomic moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("theta vectors live over different bases: {0}")]
    BaseMismatch(String),
    #[error("invalid transport witness: {0}")]
    InvalidWitness(String),
    #[error("schema error at {path}: {message}")]
    SchemaError { path: String, message: String },
    #[error("dangling reference at {path}: {name}")]
    DanglingReference { path: String, name: String },
    #[error("resource bound exceeded: {0}")]
    TooLarge(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotAGroup(_) => "NotAGroup",
            Error::GeneratorsDontGenerate(_) => "GeneratorsDontGenerate",
            Error::NotAHomomorphism(_) => "NotAHomomorphism",
            Error::DegreeTooLow(_) => "DegreeTooLow",
            Error::NotACocycle { .. } => "NotACocycle",
            Error::MismatchedFiber(_) => "MismatchedFiber",
            Error::ModelViolation(_) => "ModelViolation",
            Error::ReciprocityViolation(_) => "ReciprocityViolation",
            Error::BetaDependence(_) => "BetaDependence",
            Error::ModulusMismatch(..) => "ModulusMismatch",
            Error::BaseMismatch(_) => "BaseMismatch",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::SchemaError { .. } => "SchemaError",
            Error::DanglingReference { .. } => "DanglingReference",
            Error::TooLarge(_) => "TooLarge",
        }
    }
}
