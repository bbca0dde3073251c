//! Construction, calibration and independent validation of the
//! one-parameter family of self-similar probability-density solutions
//! of the nonlocal replicator-dynamics equation
//!
//! ```text
//!     u_t = [ u_xx + a t^(-2/3) x u_x
//!             + ∫ u_x^2 dx + (a/2) t^(-2/3) ∫ u^2 dx ] u.
//! ```
//!
//! The pipeline:
//!
//! 1. [`profile`] integrates the even auxiliary profile `q(s; a, mu, A)`
//!    with dense output,
//! 2. [`quadrature`] computes the functionals `I = ∫q`, `K = ∫q'^2`,
//!    `Λ = ∫q^2` over the line with power-law tail corrections,
//! 3. [`calibration`] finds the amplitude `A_β` with
//!    `K + (a/2)Λ = β`, which makes the normalized profile `g` a
//!    probability density,
//! 4. [`similarity`] assembles `u(t,x) = t^(-1/3) g(x t^(-1/3))` and its
//!    delta-approach diagnostics,
//! 5. [`pde`] cross-validates by time-stepping the full nonlocal PDE from
//!    the similarity state, and
//! 6. [`bounds`] verifies the analytic inequalities (sup-norm bound,
//!    integral lower bounds, two-sided tail envelope, limit trends) on
//!    computed solutions.

// `!(x > 0.0)` guards are used deliberately throughout: they reject NaN
// along with the out-of-domain sign, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod calibration;
pub mod error;
pub mod pde;
pub mod profile;
pub mod quadrature;
pub mod serialize;
pub mod similarity;

pub use bounds::{check_envelope, check_integral_bounds, check_limits, check_sup_bound, BoundCheck, BoundReport, LimitsReport};
pub use calibration::{calibrate, q_of_a, CalibrationResult};
pub use error::{Error, Result};
pub use profile::{
    rhs, solve_profile, ProfileEval, ProfileNode, ProfileParams, ProfileSolution, SolverConfig, TailPolicy,
    TerminationReason,
};
pub use quadrature::{functionals, identity_residual, FunctionalValues};
pub use similarity::{derive_exponents, DeltaDiagnostic, Exponents, SimilaritySolution};
pub use pde::{Grid, PdeState};
