use thiserror::Error;

/// Errors raised across the compiler, simulator and verifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin count {0} outside supported range 1..=4")]
    SpinCount(usize),

    #[error("spin index {index} out of range for {n} spins")]
    SpinIndex { index: usize, n: usize },

    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("coupling pair must name two distinct spins, got ({0}, {0})")]
    SamePair(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix dimension {0} is not 2^n for 1 <= n <= 4")]
    BadDimension(usize),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state trace is {got}, expected {want}")]
    BadTrace { want: f64, got: f64 },

    #[error("matrix is not diagonal (off-diagonal magnitude {0:e})")]
    NotDiagonal(f64),

    #[error("diagonal entry {index} is not unimodular (|u| = {modulus})")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("term {term} does not belong to a {n}-spin basis")]
    TermMismatch { term: String, n: usize },

    #[error("invalid product-operator term '{0}'")]
    BadTerm(String),

    #[error("pulse sequence contains a crush event; it has no unitary")]
    CrushInSequence,

    #[error("crush must allow coherence order 0")]
    CrushWithoutZeroOrder,

    #[error("rf pulse has no target spins")]
    EmptyTargets,

    #[error("no direct NMR Hamiltonian for weight-{weight} term {term}")]
    NoDirectHamiltonian { term: String, weight: usize },

    #[error("gate {gate} expects {expected} distinct operands")]
    BadOperands { gate: String, expected: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("bad basis-state label '{0}'")]
    BadBitString(String),

    #[error("temporal averaging is only defined for 2 spins, got {0}")]
    UnsupportedSpinCount(usize),

    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),

    #[error(
        "fidelity and max-deviation tests disagree (fidelity {fidelity}, max deviation {max_deviation:e})"
    )]
    InconsistentMetrics { fidelity: f64, max_deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
