//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quotient is infinite: sublattice has rank {rank} in ambient rank {ambient}")]
    InfiniteQuotient { rank: usize, ambient: usize },

    #[error("blocks do not partition the index set: {0}")]
    NotAPartition(String),

    #[error("BlockTooSmall: block {block} has {size} indices, at least 3 are required")]
    BlockTooSmall { block: usize, size: usize },

    #[error("DegreeSumNotOne: block {block} has sum of 1/d_i equal to {sum}")]
    DegreeSumNotOne { block: usize, sum: String },

    #[error("MissingGenerator: {what} = {vector:?} is not in the sublattice")]
    MissingGenerator { what: String, vector: Vec<i64> },

    #[error("DivisibilityFail: d = {d} does not divide <q, m> = {pairing} for m = {m:?}")]
    DivisibilityFail { m: Vec<i64>, d: i64, pairing: i64 },

    #[error("InvalidVolumeVector: {0}")]
    InvalidVolumeVector(String),

    #[error("IndexSetTooLarge: |I| = {0} exceeds the subset-enumeration limit of 30")]
    IndexSetTooLarge(usize),

    #[error("DegenerateConfig: {0}")]
    DegenerateConfig(String),

    #[error("CellLiftFailure on cell {cell:?}: {reason}")]
    CellLiftFailure { cell: Vec<usize>, reason: String },

    #[error("UnknownMonomial: {0:?} is not an element of Xi_0")]
    UnknownMonomial(Vec<i64>),

    #[error("FactorizationCheckFailed: {0}")]
    FactorizationCheckFailed(String),

    #[error("IntertwineCheckFailed: {0}")]
    IntertwineCheckFailed(String),

    #[error("CutoffTooSmall: cutoff {cutoff} is below the block size {size}")]
    CutoffTooSmall { cutoff: usize, size: usize },

    #[error("ClassificationViolation: {0}")]
    ClassificationViolation(String),

    #[error("grading datum mismatch: {0} vs {1}")]
    DatumMismatch(String, String),

    #[error("non-integral degree: {0}")]
    NonIntegralDegree(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for violations of the toric-data axioms, as opposed to malformed
    /// input or failed internal certificates.
    pub fn is_domain_failure(&self) -> bool {
        matches!(
            self,
            Error::BlockTooSmall { .. }
                | Error::DegreeSumNotOne { .. }
                | Error::MissingGenerator { .. }
                | Error::DivisibilityFail { .. }
                | Error::InvalidVolumeVector(_)
                | Error::UnknownMonomial(_)
        )
    }

    /// True for errors that signal a failed internal certificate.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(
            self,
            Error::CellLiftFailure { .. }
                | Error::FactorizationCheckFailed(_)
                | Error::IntertwineCheckFailed(_)
                | Error::ClassificationViolation(_)
        )
    }
}
