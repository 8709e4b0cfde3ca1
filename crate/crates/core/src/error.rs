use core::fmt;

use crate::mode::{JLevel, ModeIndex};

/// Errors raised by the algebra, Fock-space and series routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// `|q| > 1`.
    DeformationOutOfRange,
    /// The operation needs `|q| < 1` (Gram degeneracy or coefficient poles).
    Endpoint,
    ModeOutOfRange {
        mode: ModeIndex,
        level: JLevel,
    },
    /// An operator would raise the particle number beyond `n_max`.
    Truncation {
        requested: usize,
        n_max: usize,
    },
    /// Terms of a polynomial change the particle number by different amounts.
    NonUniformShift,
    /// Vector or matrix sizes disagree.
    DimensionMismatch,
    /// Two sector operators share no sector on which both are defined.
    EmptyDomain,
    /// `Y` needs a non-empty tail.
    EmptyTail,
    /// Inconsistent linear system while solving series coefficients.
    IllPosed {
        order: usize,
    },
    /// Series coefficients requested beyond the solved order.
    Unsolved {
        requested: usize,
        solved: usize,
    },
    /// Angular momentum arguments outside their allowed range.
    InvalidCoupling,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DeformationOutOfRange => {
                f.write_str("deformation parameter must satisfy |q| <= 1")
            }
            Error::Endpoint => f.write_str("operation undefined at |q| = 1"),
            Error::ModeOutOfRange { mode, level } => {
                write!(f, "mode {} is not a projection of j = {}", mode, level)
            }
            Error::Truncation { requested, n_max } => {
                write!(
                    f,
                    "sector {} exceeds truncation n_max = {}",
                    requested, n_max
                )
            }
            Error::NonUniformShift => {
                f.write_str("polynomial terms change particle number by different amounts")
            }
            Error::DimensionMismatch => f.write_str("dimension mismatch"),
            Error::EmptyDomain => f.write_str("operators share no common sector"),
            Error::EmptyTail => f.write_str("Y operator needs at least one tail index"),
            Error::IllPosed { order } => write!(
                f,
                "series coefficient system inconsistent at order {}",
                order
            ),
            Error::Unsolved { requested, solved } => {
                write!(
                    f,
                    "series order {} requested but only {} solved",
                    requested, solved
                )
            }
            Error::InvalidCoupling => f.write_str("invalid angular momentum coupling arguments"),
        }
    }
}

impl core::error::Error for Error {}
