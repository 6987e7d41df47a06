//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while validating or manipulating lattices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("gram matrix has odd diagonal entry at index {0}")]
    NotEven(usize),
    #[error("gram matrix is not positive-definite (leading minor {0} is non-positive)")]
    NotPositiveDefinite(usize),
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not in the dual lattice")]
    NotInDualLattice,
}

/// Errors from the finite quotient group and its representations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank {0} exceeds the configured cap {1}")]
    RankTooLarge(usize, usize),
    #[error("no nonzero intertwiner exists for the requested pair")]
    NoIntertwiner,
    #[error("intertwiner space has dimension > 1")]
    NonUniqueSolution,
}

/// Errors from the symbolic Fock-space engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("mode parity does not match the sector of the vector")]
    ModeParityMismatch,
    #[error("exponent window is too small to hold the leading term")]
    WindowTooSmall,
    #[error("input vector is not homogeneous in a single coset")]
    InhomogeneousInput,
    #[error("coset norm {0} is not a half-integer; scalar 2^(-{0}) leaves the coefficient ring")]
    ScalarNotRepresentable(String),
}

/// Errors from fusion-ring operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("label does not belong to the enumerated set")]
    UnknownLabel,
}

/// Top-level error for CLI and library entry points.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
