use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({a}, {b}) is out of range for a graph with n = {n}, m = {m}")]
    EdgeOutOfRange { a: usize, b: usize, n: usize, m: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),

    #[error("({a}, {b}) is not an edge of the graph")]
    NotAnEdge { a: usize, b: usize },

    #[error("edge order is not a permutation of the edge set: {0}")]
    BadEdgeOrder(String),

    #[error("vertex {0} is already matched")]
    AlreadyMatched(Vertex),

    #[error("not a permutation of 1..={len}: {reason}")]
    NotAPermutation { len: usize, reason: String },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("advice tape underrun: needed {needed} bit(s) at position {position}, tape holds {len}")]
    TapeUnderrun { needed: usize, position: usize, len: usize },

    #[error("value {value} does not fit in {width} bit(s)")]
    FieldOverflow { value: u64, width: u32 },

    #[error("random bit string exhausted after {0} bit(s)")]
    BitsExhausted(u64),

    #[error("advice inconsistent with the replayed input: {0}")]
    AdviceInconsistency(String),

    #[error("online algorithm violated the matching protocol: {0}")]
    ProtocolViolation(String),

    #[error("monotone partition infeasible: {reason} (largest k admitted by the size guarantee: {max_admissible_k})")]
    PartitionInfeasible { reason: String, max_admissible_k: i64 },

    #[error("enumeration budget exceeded: {entries} matrix entries > {limit}")]
    BudgetExceeded { entries: u128, limit: u128 },

    #[error("input is not part of the enumerated family")]
    NotInFamily,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
