use thiserror::Error;

/// Errors produced by structure I/O, type computation, and search.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing or ill-typed field `{field}` in {path}")]
    BadField { path: String, field: String },

    #[error("duplicate relation name `{name}` in signature")]
    DuplicateRelation { name: String },

    #[error("relation `{name}` declared with arity {arity}, must be >= 1")]
    BadArity { name: String, arity: usize },

    #[error("tuple {tuple:?} for relation `{relation}` has {got} entries, arity is {expected}")]
    ArityMismatch {
        relation: String,
        tuple: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("element {element} out of range for universe of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("unknown relation `{name}`")]
    UnknownRelation { name: String },

    #[error("tuple has a repeated element: {element}")]
    RepeatedElement { element: usize },

    #[error("tuple element {element} lies in the partition base")]
    ElementInBase { element: usize },

    #[error("invalid structure: {detail}")]
    InvalidStructure { detail: String },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("unknown part index {index} (partition has {parts} parts)")]
    UnknownPart { index: usize, parts: usize },

    #[error("census too large: {tuples} tuples exceed budget {budget}")]
    CensusTooLarge { tuples: u64, budget: u64 },

    #[error("exhaustive search limited to structures of size <= {limit}, got {size}")]
    ExhaustiveTooLarge { size: usize, limit: usize },

    #[error("parameter out of bounds: {reason}")]
    BadParameter { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
