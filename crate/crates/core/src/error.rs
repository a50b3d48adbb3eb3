use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("root-of-unity substitution only supports k = 2 (got k = {0})")]
    UnsupportedK(i64),
    #[error("exponent {0} is not a multiple of 1/k")]
    UnsupportedExponent(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator {symbol} violates the index lattice of {algebra}")]
    InvalidIndexLattice { symbol: String, algebra: String },
    #[error("element uses symbols outside {0}")]
    InvalidAlgebra(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("{terms} coefficients cannot fix the expansion through x^{order}")]
    InsufficientTerms { terms: usize, order: usize },
    #[error("the Δ operator is only available for k ∈ {{1, 2}} (got k = {0})")]
    UnsupportedK(i64),
    #[error("state is not weight-homogeneous")]
    NonHomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("result of weight {weight} leaves the truncated space (W = {truncation})")]
    TruncationOverflow { weight: String, truncation: String },
    #[error("mode {0} is not on this space's index lattice")]
    InvalidMode(String),
    #[error("L(0) is not diagonal on basis state {0}")]
    NonDiagonal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalibrationError {
    #[error("no calibration of the N=2 ansatz exists: {0}")]
    NoCalibration(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("linear system for twisted modes is underdetermined: {0}")]
    UnderdeterminedSystem(String),
    #[error("linear system for twisted modes is inconsistent: {0}")]
    InconsistentSystem(String),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Fock(#[from] FockError),
}
