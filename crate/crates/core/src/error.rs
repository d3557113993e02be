//! Error type shared by all layers of the library.
//!
//! The variants are coarse on purpose: callers (in particular the CLI)
//! dispatch on the *class* of failure, not on individual messages.
//! The classes mirror how the computation can go wrong:
//!
//! * [`Error::Validation`] — malformed input data (dimension mismatches,
//!   out-of-range indices, unparsable text, a chamber that is not a
//!   permutation of the framing parameters, ...).
//! * [`Error::Genericity`] — a torus weight paired to zero against the
//!   chamber where the theory requires a generic cocharacter; proceeding
//!   would silently misclassify attracting/repelling directions.
//! * [`Error::Pole`] — a theta factor with unit argument appeared in a
//!   denominator, so the requested value does not exist.
//! * [`Error::Divergence`] — the `q → 0` limit has a term with negative
//!   leading q-exponent; the chosen slope/chamber admits no limit.
//! * [`Error::NotQuasiPeriodic`] — an expression failed to transform by a
//!   pure monomial under `v → q v`; for stable envelopes this signals a
//!   formula bug, so it is surfaced loudly instead of being papered over.
//! * [`Error::Internal`] — a structural invariant the mathematics
//!   guarantees was violated (e.g. an inadmissible edge choice produced a
//!   cycle). These indicate a bug in this crate, never in user input.

use thiserror::Error;

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for the symbolic kernel, combinatorics, quiver
/// geometry and envelope layers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("validation error: {0}")]
    Validation(String),

    /// A weight paired to zero against the chamber (non-generic data).
    #[error("genericity error: {0}")]
    Genericity(String),

    /// A vanishing theta factor appeared at negative power.
    #[error("pole error: {0}")]
    Pole(String),

    /// The q → 0 limit diverges for the requested slope/chamber.
    #[error("divergence error: {0}")]
    Divergence(String),

    /// A ratio expected to be a pure monomial was not.
    #[error("not quasi-periodic: {0}")]
    NotQuasiPeriodic(String),

    /// A mathematical invariant was violated; this is a bug in the library.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Shorthand constructor for [`Error::Validation`].
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Shorthand constructor for [`Error::Genericity`].
    pub fn genericity(msg: impl Into<String>) -> Self {
        Error::Genericity(msg.into())
    }

    /// Shorthand constructor for [`Error::Pole`].
    pub fn pole(msg: impl Into<String>) -> Self {
        Error::Pole(msg.into())
    }

    /// Shorthand constructor for [`Error::Divergence`].
    pub fn divergence(msg: impl Into<String>) -> Self {
        Error::Divergence(msg.into())
    }

    /// Shorthand constructor for [`Error::Internal`].
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code used by the command-line front end: `2` for
    /// validation problems, `3` for genericity/pole problems, `4` for
    /// divergence of the K-theoretic limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::Genericity(_) | Error::Pole(_) | Error::NotQuasiPeriodic(_) => 3,
            Error::Divergence(_) => 4,
            Error::Internal(_) => 70,
        }
    }
}
