//! Configuration, identity language, verification suites and report files
//! for `quon-core`.

pub mod config;
pub mod eval;
pub mod export;
pub mod expr;
pub mod numeric;
pub mod report;
pub mod suites;

pub use config::{Plan, QList, RunConfig, Suite};
pub use expr::{parse_identity, parse_identity_for, Identity, ParseError};
pub use numeric::BackendKind;
pub use report::{Record, Report};
pub use suites::run_plan;
