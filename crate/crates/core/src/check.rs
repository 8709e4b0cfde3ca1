//! Identity-check records.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg::{compare, BlockOperator, SectorResidual};
use crate::scalar::Scalar;

/// Default relative residual bound for the float backend.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-10;

/// Pass criterion for a residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    /// Every entry of the difference must vanish exactly.
    Exact,
    /// Relative residual must not exceed the bound.
    Relative(f64),
}

impl Tolerance {
    /// `Exact` for exact scalars, `Relative(float_tol)` otherwise.
    pub fn for_scalar<S: Scalar>(float_tol: f64) -> Self {
        if S::EXACT {
            Tolerance::Exact
        } else {
            Tolerance::Relative(float_tol)
        }
    }

    pub fn accepts(self, r: &SectorResidual) -> bool {
        match self {
            Tolerance::Exact => r.exact_zero,
            Tolerance::Relative(tol) => r.residual <= tol,
        }
    }
}

/// Result of one identity `L == R` checked sector by sector.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// Human-readable parameter description, e.g. `alpha=1 beta=0 mu=-1`.
    pub params: String,
    pub sectors: Vec<SectorResidual>,
    pub passed: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        params: impl Into<String>,
        sectors: Vec<SectorResidual>,
        tol: Tolerance,
    ) -> Self {
        let passed = !sectors.is_empty() && sectors.iter().all(|r| tol.accepts(r));
        Check {
            name: name.into(),
            params: params.into(),
            sectors,
            passed,
        }
    }

    /// Records a scalar comparison as a single pseudo-sector.
    pub fn scalar(
        name: impl Into<String>,
        params: impl Into<String>,
        residual: f64,
        exact_zero: bool,
        tol: Tolerance,
    ) -> Self {
        Self::new(
            name,
            params,
            alloc::vec![SectorResidual {
                sector: 0,
                residual,
                exact_zero
            }],
            tol,
        )
    }

    pub fn max_residual(&self) -> f64 {
        self.sectors
            .iter()
            .map(|r| r.residual.abs())
            .fold(0.0, f64::max)
    }
}

/// Compares `lhs` and `rhs` on their common sectors.
pub fn check_identity<S: Scalar>(
    name: impl Into<String>,
    params: impl Into<String>,
    lhs: &BlockOperator<S>,
    rhs: &BlockOperator<S>,
    tol: Tolerance,
) -> Result<Check, Error> {
    Ok(Check::new(name, params, compare(lhs, rhs)?, tol))
}
