//! Error types shared by the solver, quadrature, calibration and PDE modules.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter failed its domain constraint before any numerics ran.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The integrator drove the profile into the nonpositive region.
    ///
    /// The profile is analytically positive for every `s`, so this signals
    /// tolerances too loose for the requested tail depth.
    #[error("profile reached q <= 0 near s = {s:.6e} (tolerances too loose)")]
    NonPositiveEncountered { s: f64 },

    /// Step budget exhausted before reaching the tail floor or `s_max`.
    #[error("step limit {max_steps} exceeded at s = {s:.6e}")]
    StepLimitExceeded { s: f64, max_steps: usize },

    /// Fitted tail slope does not decay fast enough for the integrals
    /// over the whole line to converge.
    #[error("non-integrable tail: fitted exponent {exponent:.6} <= 1")]
    NonIntegrableTail { exponent: f64 },

    /// Bracket expansion failed to straddle the calibration target.
    #[error("no sign change after {expansions} bracket expansions for beta = {beta}")]
    BracketFailure { beta: f64, expansions: usize },

    /// Root refinement ran out of iterations.
    #[error("calibration did not converge within {iterations} iterations (last rel. residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Profile evaluation outside the computed range without tail
    /// extrapolation enabled.
    #[error("s = {s:.6e} outside [-{terminal_s:.6e}, {terminal_s:.6e}] and tail extrapolation not requested")]
    OutOfRange { s: f64, terminal_s: f64 },

    /// Similarity evaluation requires t > 0.
    #[error("similarity solution requires t > 0, got t = {0}")]
    NonPositiveTime(f64),

    /// A PDE step produced a non-finite nodal value.
    #[error("non-finite nodal value after step to t = {t:.6e} (dt too large)")]
    StabilityViolation { t: f64 },

    /// A PDE step undershot below the roundoff band around zero.
    #[error("negative undershoot {value:.3e} at x = {x:.4} exceeds the roundoff band {band:.3e}")]
    NegativityError { value: f64, x: f64, band: f64 },

    /// Malformed input file (CSV re-reading path).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::OutOfRange { .. } | Error::NonPositiveTime(_) | Error::Parse(_)
        )
    }
}
