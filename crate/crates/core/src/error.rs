use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent {exponent} appears twice in family {family}")]
    DuplicateExponent { family: char, exponent: u64 },
    #[error("exponent {exponent} is not a residue modulo {modulus}")]
    ExponentOutOfRange { exponent: u64, modulus: u64 },
    #[error("degenerate arrangement: {0}")]
    EmptyArrangement(String),
    #[error("line {0} is not part of the arrangement")]
    LineNotPresent(String),
    #[error("modulus {n} does not embed into {target}")]
    NotEmbeddable { n: u64, target: u64 },
    #[error("field carries roots of order {field}, arrangement needs order {arrangement}")]
    ModulusMismatch { arrangement: u64, field: u64 },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid combinatorics: {0}")]
    InvalidCombinatorics(String),
    #[error("sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
