//! Crate-wide error type. Every variant names the violated invariant, so
//! callers (and the CLI) can report validation failures precisely.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("LoopPresent: diagonal entry ({0},{0}) is set; tournaments have no loops")]
    LoopPresent(usize),
    #[error("NotAntisymmetric: pair ({0},{1}) must have exactly one direction")]
    NotAntisymmetric(usize, usize),
    #[error("InvalidSize: size must be at least 1")]
    InvalidSize,
    #[error("NotATournament: the {0}-cycle is a tournament only for size 3")]
    NotATournament(usize),
    #[error("DuplicateVertex: vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("OutOfRange: vertex {vertex} is not below {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("TooLarge: exhaustive isomorphism search supports at most {cap} vertices, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("NotAPartition: {0}")]
    NotAPartition(String),
    #[error("PatternTooLarge: pattern has {pattern} vertices but target only {target}")]
    PatternTooLarge { pattern: usize, target: usize },
    #[error("NonPositiveWeight: {0}")]
    NonPositiveWeight(String),
    #[error("WeightsNotNormalized: weights sum to {0}, expected 1")]
    WeightsNotNormalized(String),
    #[error("BadDiagonal: values[{i}][{i}] = {value}, expected 1/2")]
    BadDiagonal { i: usize, value: String },
    #[error("NotComplementary: values[{i}][{j}] + values[{j}][{i}] = {sum}, expected 1")]
    NotComplementary { i: usize, j: usize, sum: String },
    #[error("ValueOutOfRange: values[{i}][{j}] = {value} is outside [0, 1]")]
    ValueOutOfRange { i: usize, j: usize, value: String },
    #[error("Empty: at least one part is required")]
    Empty,
    #[error("UnsupportedPattern: {0}")]
    UnsupportedPattern(String),
    #[error("CapExceeded: {0}")]
    CapExceeded(String),
    #[error("InconsistentCrossValues: blocks {i} and {j} lie in distinct components but values[{i}][{j}] = {value}")]
    InconsistentCrossValues { i: usize, j: usize, value: String },
    #[error("ParseError: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
