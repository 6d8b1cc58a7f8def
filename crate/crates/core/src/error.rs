//! Error type shared by every module of the crate.
//!
//! Structural problems with input documents, violated coordinate conditions
//! and requests outside the supported scope are all reported through
//! [`Error`]. Each variant carries enough context to point at the offending
//! element (edge index, corner index, vertex index) so that the command line
//! front end can print a useful witness.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A JSON document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A triangulation document is structurally inconsistent.
    #[error("invalid triangulation: {0}")]
    Triangulation(String),

    /// An edge is referenced by a number of triangle slots other than two.
    #[error("edge multiplicity: edge {edge} is used {count} times (expected 2)")]
    EdgeMultiplicity {
        /// Offending edge.
        edge: usize,
        /// Number of triangle slots referencing it.
        count: usize,
    },

    /// The triangulation is not locally planar but the operation needs it.
    #[error("triangulation is not locally planar: {0}")]
    NotLocallyPlanar(String),

    /// A corner vector violates one of the coordinate conditions.
    #[error("coordinate violation: {0}")]
    Coordinates(String),

    /// An edge vector cannot be converted to corner coordinates.
    #[error("edge vector not realizable: {0}")]
    EdgeVector(String),

    /// An index is out of range for the triangulation at hand.
    #[error("index out of range: {0}")]
    Index(String),

    /// Two objects built over different triangulations were combined.
    #[error("arity mismatch: {0}")]
    Arity(String),

    /// An input that is valid but outside the supported scope.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Internal invariant failure; indicates a bug or corrupted input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
