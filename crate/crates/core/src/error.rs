use thiserror::Error;

/// Errors produced by the numerics core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("index {index} out of range for extent {extent}")]
    InvalidIndex { index: usize, extent: usize },

    #[error("waveguide label {label} lies outside an array of {sites} sites")]
    InvalidLabel { label: i64, sites: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("duplicate input mode {0}")]
    DuplicateInput(usize),

    #[error("size limit exceeded: {what} = {value} (limit {limit})")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
