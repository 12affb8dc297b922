use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the numerical kernel and the state machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix handed to the Hermitian eigensolver was not Hermitian.
    #[error("matrix is not Hermitian: max |M - M^dagger| = {dev:.3e} exceeds {tol:.0e}")]
    NonHermitian { dev: f64, tol: f64 },

    /// The Jacobi solver exhausted its sweep budget.
    #[error("eigensolver did not converge within {0} sweeps")]
    NonConvergence(usize),

    /// NaN or infinite entries where finite values are required.
    #[error("non-finite entries in input")]
    NonFinite,

    /// An amplitude vector was not unit-norm and silent rescaling is not done.
    #[error("amplitude vector has norm {norm:.12} (must be 1 within {tol:.0e})")]
    NotNormalized { norm: f64, tol: f64 },

    /// A scalar argument outside its admissible range.
    #[error("{0}")]
    Domain(String),

    /// An operation that needs a bipartite state got something else.
    #[error("operation requires exactly two subsystems, got {0}")]
    BadPartition(usize),

    /// Subsystem dimensions other than the ones an operation supports.
    #[error("unsupported dimensions: expected {expected}, got {got}")]
    BadDims { expected: String, got: String },

    /// Reservoir-oracle configuration violating its own invariants.
    #[error("invalid oracle configuration: {0}")]
    Config(String),
}
