//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation outside the expression's valid interval, or an argument
    /// that makes a logarithm nonpositive.
    #[error("domain error: {0}")]
    Domain(String),

    /// Product of two expressions whose exponential factors have different
    /// inner exponents; the closed family does not contain the result.
    #[error("incompatible exponential factors: alpha = {0} vs {1}")]
    IncompatibleExponential(f64, f64),

    /// The function is outside the three closed-form envelope-inverse shapes.
    #[error("not invertible within the closed family: {0}")]
    NotInvertibleFamily(String),

    /// Bisection bracket does not straddle the target value.
    #[error("bracket error: f({lo}) = {flo}, f({hi}) = {fhi} do not straddle {target}")]
    Bracket {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
        target: f64,
    },

    /// Composition of two family members leaves the family.
    #[error("composition outside the closed family: {0}")]
    CompositionOutsideFamily(String),

    /// Expression is not monotone on any usable interval.
    #[error("expression not monotone near {0}: {1}")]
    NotMonotone(&'static str, String),

    #[error("mismatched orientations")]
    OrientationMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    /// Bisection along the normal found no sign transition of the average.
    #[error("support boundary not found: {0}")]
    BoundaryNotFound(String),

    /// Regression design matrix condition number above 1e10. The fit is
    /// still returned by the caller; this variant is only used when a fit
    /// cannot be produced at all.
    #[error("ill-conditioned fit: condition number {0:.3e}")]
    IllConditioned(f64),

    /// sigma_min iteration stagnated; best bound so far is attached.
    #[error("solver failure: {msg} (best bound {best:.6e})")]
    SolverFailure { msg: String, best: f64 },

    /// Grid too coarse to resolve the quasimode bump.
    #[error("resolution error: N_x = {nx} cannot resolve scale rho = {rho:.3e}")]
    Resolution { nx: usize, rho: f64 },

    /// Linear solve inside the time stepper broke down.
    #[error("solve failure in time stepper: {0}")]
    SolveFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
