//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("mixed moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("polynomial must be monic and nonzero")]
    NonMonic,

    #[error("not a valid skew-symmetric tuple: {0}")]
    NotSkew(String),

    #[error("characteristic 2 is not supported by this operation")]
    UnsupportedCharacteristic,

    #[error("enumeration guard exceeded: needs {needed}, limit {limit}")]
    ResourceGuard { needed: u128, limit: u128 },

    #[error("internal verification failed: {0}")]
    Internal(String),

    #[error("invalid isomorphism certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
