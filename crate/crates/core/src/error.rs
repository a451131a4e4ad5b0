//! Crate-wide error type.
//!
//! Diagnostics are carried as `f64` regardless of the working scalar so the
//! error enum stays non-generic.

use thiserror::Error;

/// Everything that can go wrong across the chain / recurrence / pencil /
/// spectral / transform layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The positivity recursion for the minimal parameters left (0, 1).
    #[error("not a chain sequence: parameter {index} = {value} outside (0, 1)")]
    NotAChainSequence { index: usize, value: f64 },

    /// Backward recursion for maximal parameters failed to stabilize at the
    /// requested depth.
    #[error("backward recursion not stabilized at depth {depth} (max change {change})")]
    DepthInsufficient { depth: usize, change: f64 },

    /// A degree/index beyond the stored coefficient data (or the coefficient
    /// form cap) was requested.
    #[error("degree {requested} out of range (available {available})")]
    DegreeOutOfRange { requested: usize, available: usize },

    /// Kernel evaluation at numerically coincident points.
    #[error("kernel arguments coincide: |x - y| = {separation}")]
    CoincidentPoints { separation: f64 },

    /// Synthetic division left a remainder that should vanish.
    #[error("deflation remainder {remainder} exceeds {bound}")]
    DeflationResidual { remainder: f64, bound: f64 },

    /// Pencil assembly needs at least a 1x1 problem.
    #[error("pencil dimension {n} too small")]
    DimensionTooSmall { n: usize },

    /// Cholesky pivot failed; the B matrix is not positive definite.
    #[error("B not positive definite at pivot {index}")]
    NotPositiveDefinite { index: usize },

    /// An iterative eigensolve exceeded its sweep cap.
    #[error("eigensolver failed to converge after {sweeps} sweeps (off-norm {off_norm})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    /// Bracket expansion for bisection found no sign change.
    #[error("no sign change found while bracketing zero {index} at degree {degree}")]
    BracketFailure { index: usize, degree: usize },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature error {error} above tolerance after {intervals} intervals")]
    QuadratureBudget { intervals: usize, error: f64 },

    /// Two eigenvalues closer than the simplicity threshold; valid input
    /// guarantees simple spectra, so this flags bad data.
    #[error("eigenvalue gap {gap} below simplicity threshold {threshold}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    /// A rotation step saw |1 + i c_n| degenerate (defensive; cannot happen
    /// for finite real coefficients).
    #[error("rotation step {index} degenerate: |1 + ic| = {magnitude}")]
    DegenerateTau { index: usize, magnitude: f64 },

    /// A Moebius step in the coefficient transforms hit its pole
    /// (denominator magnitude ~ 0).
    #[error("coefficient transform pole at step {index}: |denominator| = {magnitude}")]
    TauCollision { index: usize, magnitude: f64 },

    /// An operation needing maximal parameters got a chain classified
    /// single-parameter (or undecidable).
    #[error("operation requires a multiple-parameter chain (classified {found})")]
    RequiresMultipleParameter { found: &'static str },

    /// Hypergeometric sum hit a nonpositive-integer lower parameter.
    #[error("lower parameter c + {k} vanishes in terminating 2F1")]
    PoleInC { k: usize },

    /// A closed form was requested for an example that does not provide it.
    #[error("example {example} does not support {what}")]
    UnsupportedExample {
        example: &'static str,
        what: &'static str,
    },

    /// Example/family parameter outside its admissible domain.
    #[error("parameter {name} = {value} outside domain {domain}")]
    ParameterOutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Malformed CLI/job input (bad JSON, missing fields, bad flags).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A verification battery reported a tolerance violation.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// Crate-wide result alias.
pub type Result<V> = std::result::Result<V, Error>;

impl Error {
    /// Process exit code the CLI maps this error to.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::ParameterOutOfDomain { .. }
            | Error::UnsupportedExample { .. }
            | Error::DegreeOutOfRange { .. }
            | Error::DimensionTooSmall { .. }
            | Error::NotAChainSequence { .. } => 2,
            Error::VerificationFailed(_) => 1,
            _ => 3,
        }
    }
}
