//! Quon algebra on truncated Fock spaces.
//!
//! Quons are created and annihilated by operators obeying
//! `b_m b†_n − q b†_n b_m = δ_{mn}`, interpolating between Bose (`q = 1`) and
//! Fermi (`q = −1`) statistics. This crate realises that algebra exactly on a
//! single `j`-level, builds the transition number operators `N_{αβ}` both
//! directly and as a series in the `Y` operators, assembles the su(2)
//! generators from them and checks every operator identity as a matrix
//! identity on the word basis.
//!
//! - [`scalar`]: coefficient backends (exact rationals, surds, `f64`).
//! - [`algebra`]: operator polynomials and normal ordering.
//! - [`fock`]: word basis, operator matrices, Gram matrices, positivity.
//! - [`number`]: transition number operators, `Y` recursion, series solver.
//! - [`su2`]: `J₀`, `J±`, Casimir, Clebsch-Gordan coefficients, coupling.
//! - [`check`]: identity-check records shared by all verification routines.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod check;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod mode;
pub mod number;
pub mod scalar;
pub mod su2;

pub use algebra::{Deformation, Monomial, OperatorPolynomial, QuonAlgebra, Term};
pub use error::Error;
pub use fock::{FockSpace, FockVector, GramMatrix, PositivityReport, Sector};
pub use linalg::{BlockOperator, OperatorMatrix};
pub use mode::{Generator, GeneratorKind, JLevel, ModeIndex, Word};
pub use scalar::{Field, Rational, Real, Scalar, SqrtScalar, Surd};
