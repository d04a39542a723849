use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("polynomial has a root in the base field")]
    Reducible,
    #[error("coefficients are not integral at p")]
    NotIntegral,
    #[error("the base field has no nontrivial conjugation")]
    BaseFieldHasNoConjugation,
    #[error("element has negative valuation")]
    NegativeValuation,
    #[error("generators do not span the ambient space")]
    NotFullRank,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("lattice is not contained in the reference lattice")]
    NotContained,
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("empty vertex set")]
    EmptySet,
    #[error("vertex set is not connected")]
    Disconnected,
    #[error("vertex set is not a tubular neighborhood of a finite line")]
    NotATube,
    #[error("generated ring is not integral")]
    NonIntegral,
    #[error("generated ring is not a full order")]
    NotFull,
    #[error("matrix is central")]
    Central,
    #[error(
        "eigenvalues are p-adic but not rational; the exact model cannot represent the eigenlines"
    )]
    NonRationalEigenvalues,
    #[error("order is not a Bass order")]
    NotBass,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("empty list")]
    EmptyList,
    #[error("extension does not match the quadratic subalgebra")]
    ExtensionMismatch,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::Reducible => "Reducible",
            Error::NotIntegral => "NotIntegral",
            Error::BaseFieldHasNoConjugation => "BaseFieldHasNoConjugation",
            Error::NegativeValuation => "NegativeValuation",
            Error::NotFullRank => "NotFullRank",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::NotContained => "NotContained",
            Error::FieldMismatch => "FieldMismatch",
            Error::EmptySet => "EmptySet",
            Error::Disconnected => "Disconnected",
            Error::NotATube => "NotATube",
            Error::NonIntegral => "NonIntegral",
            Error::NotFull => "NotFull",
            Error::Central => "Central",
            Error::NonRationalEigenvalues => "NonRationalEigenvalues",
            Error::NotBass => "NotBass",
            Error::BadParams(_) => "BadParams",
            Error::EmptyList => "EmptyList",
            Error::ExtensionMismatch => "ExtensionMismatch",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::Parse(_) => "Parse",
        }
    }
}
