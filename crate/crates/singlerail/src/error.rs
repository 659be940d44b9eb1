//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or driving a simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// An occupation vector or state was built for a different mode count.
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    /// A mode index points outside the state it is supposed to address.
    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeOutOfRange { mode: usize, mode_count: usize },

    /// An occupation carries more photons in total than the cutoff admits.
    #[error("total photon number {total} exceeds cutoff {cutoff}")]
    CutoffExceeded { total: u32, cutoff: u32 },

    /// A beamsplitter reflectivity must lie in the closed interval [0, 1].
    #[error("reflectivity {0} outside [0, 1]")]
    ReflectivityOutOfRange(f64),

    /// A detector efficiency must lie in the closed interval [0, 1].
    #[error("detector efficiency {0} outside [0, 1]")]
    EfficiencyOutOfRange(f64),

    /// A matrix handed to [`crate::transforms::ModeTransform`] was not unitary.
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    /// A matrix handed to [`crate::transforms::ModeTransform`] was not square.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Embedding targets must be distinct modes.
    #[error("duplicate target mode {0} in embedding")]
    DuplicateTargetMode(usize),

    /// Wrong number of target modes for the transform being embedded.
    #[error("embedding expects {expected} target modes, got {found}")]
    EmbeddingArity { expected: usize, found: usize },

    /// Attempted to normalize (or divide by the norm of) a zero state.
    #[error("state has zero norm")]
    ZeroNorm,

    /// A detection pattern addresses no modes.
    #[error("detection pattern is empty")]
    EmptyPattern,

    /// The requested cutoff is too small for the circuit being built.
    #[error("cutoff {cutoff} too small: {needed}")]
    CutoffTooSmall { cutoff: u32, needed: &'static str },

    /// Visibility is undefined for fewer than two samples or all-zero samples.
    #[error("visibility undefined: {0}")]
    VisibilityUndefined(&'static str),

    /// A configuration file could not be parsed.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Reading or writing an output file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
