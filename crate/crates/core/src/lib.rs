//! Exact computer algebra for free-field superconformal vertex operator
//! superalgebras, their parity-twisted (Ramond) sectors, and the
//! mirror-twisted sectors of `V ⊗ V` obtained through the Δ-operator
//! construction.

pub mod algebra;
pub mod cli;
pub mod delta;
pub mod error;
pub mod fock;
pub mod scalar;
pub mod series;
pub mod suites;
pub mod twisted;
pub mod vosa;

pub use error::{AlgebraError, CalibrationError, DeltaError, ExactError, FockError, TwistError};
pub use scalar::ExactScalar;
pub use series::{FracExp, Series, Variable};
