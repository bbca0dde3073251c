//! Calibration of the profile amplitude.
//!
//! For a given `beta > 0` the target is the amplitude `A_beta` with
//!
//! ```text
//!     Q(A) := K[q(.; A)] + (a/2) Λ[q(.; A)] = beta,
//! ```
//!
//! where the profile is solved with `mu = beta + 1/3`. The integral
//! identity `(mu - 1/3) I = K + (a/2) Λ` then forces `∫ q(.; A_beta) = 1`,
//! so the calibrated profile is a probability density. `Q` is continuous
//! with `Q(0+) = 0` and `Q(inf) = inf`, which guarantees a bracket exists;
//! nothing guarantees uniqueness, so the root reported is the one reached
//! by the canonical expansion from `A = 1` (deterministic, reproducible
//! from the recorded bracket).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{solve_profile, ProfileParams, ProfileSolution, SolverConfig};
use crate::quadrature::{functionals, FunctionalValues};

/// Default relative tolerance on `|Q(A) - beta| / beta`.
pub const DEFAULT_CALIBRATION_TOL: f64 = 1e-8;
/// Tolerance on `|∫g - 1|` for a calibrated profile (one order looser than
/// the calibration tolerance, to absorb quadrature error).
pub const MASS_TOLERANCE: f64 = 1e-6;

const MAX_EXPANSIONS: usize = 60;
const MAX_REFINEMENTS: usize = 200;

/// A calibrated profile together with its convergence record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub a: f64,
    pub beta: f64,
    /// Amplitude found with `Q(A_beta) = beta`.
    pub a_beta: f64,
    /// `Q` evaluated at `a_beta`.
    pub q_at_a: f64,
    /// `∫ g ds` computed independently through the quadrature module.
    pub mass: f64,
    /// Root-refinement iterations after bracketing.
    pub iterations: usize,
    /// Bracket produced by the canonical expansion from `A = 1`.
    pub bracket: (f64, f64),
    /// Functionals of the calibrated profile.
    pub functionals: FunctionalValues,
    /// The normalized profile `g = q(.; A_beta)`.
    pub profile: ProfileSolution,
}

/// Solver configuration suited to calibration sweeps: tail-floor
/// termination with no practical `s_max` cap, so `Q(A)` is well defined
/// across many decades of `A`.
pub fn default_config() -> SolverConfig {
    SolverConfig { s_max: 1e60, ..SolverConfig::defaults_for(1.0) }
}

// The trial amplitude varies across the bracket search, so the tail floor
// of the caller's config is interpreted per unit amplitude and rescaled.
fn config_for_amplitude(cfg: &SolverConfig, amplitude: f64) -> SolverConfig {
    SolverConfig { q_floor: cfg.q_floor * amplitude, ..*cfg }
}

/// Evaluate `Q(A) = K + (a/2) Λ` at amplitude `A` with `mu = beta + 1/3`.
///
/// `cfg.q_floor` is interpreted as the tail floor of a unit-amplitude
/// profile and is scaled by `A`.
pub fn q_of_a(a: f64, beta: f64, amplitude: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(solve_q(a, beta, amplitude, cfg)?.1.q_value(a))
}

trait QValue {
    fn q_value(&self, a: f64) -> f64;
}
impl QValue for FunctionalValues {
    fn q_value(&self, a: f64) -> f64 {
        self.k + 0.5 * a * self.lam
    }
}

fn solve_q(a: f64, beta: f64, amplitude: f64, cfg: &SolverConfig) -> Result<(ProfileSolution, FunctionalValues)> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let params = ProfileParams::new(a, beta + 1.0 / 3.0, amplitude)?;
    let sol = solve_profile(&params, &config_for_amplitude(cfg, amplitude))?;
    let fv = functionals(&sol)?;
    Ok((sol, fv))
}

/// Find `A_beta` with `Q(A_beta) = beta` to relative tolerance `tol`.
///
/// Bracket expansion doubles (or halves) the amplitude starting from
/// `A = 1` until `Q - beta` changes sign, then a bisection/secant hybrid
/// refines without ever leaving the bracket.
pub fn calibrate(a: f64, beta: f64, cfg: &SolverConfig, tol: f64) -> Result<CalibrationResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }

    let f = |amplitude: f64| -> Result<f64> { Ok(q_of_a(a, beta, amplitude, cfg)? - beta) };

    // Expansion from A = 1. Q grows with A, so a negative residual expands
    // upward and a positive one downward.
    let mut lo = 1.0_f64;
    let mut hi = 1.0_f64;
    let mut f_lo = f(1.0)?;
    let mut f_hi = f_lo;
    let mut expansions = 0;
    while f_lo.signum() == f_hi.signum() {
        if f_lo == 0.0 {
            break;
        }
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::BracketFailure { beta, expansions: MAX_EXPANSIONS });
        }
        if f_lo > 0.0 {
            hi = lo;
            f_hi = f_lo;
            lo *= 0.5;
            f_lo = f(lo)?;
        } else {
            lo = hi;
            f_lo = f_hi;
            hi *= 2.0;
            f_hi = f(hi)?;
        }
    }
    let bracket = (lo, hi);

    // Refinement: secant proposals accepted only strictly inside the
    // current bracket, bisection otherwise, with the Illinois weighting to
    // stop one-sided stagnation.
    let mut iterations = 0;
    let (mut x, mut fx) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    let mut last_side = 0i8;
    let (mut w_lo, mut w_hi) = (f_lo, f_hi);
    while fx.abs() > tol * beta {
        iterations += 1;
        if iterations > MAX_REFINEMENTS {
            return Err(Error::NoConvergence { iterations: MAX_REFINEMENTS, residual: fx.abs() / beta });
        }
        let mut cand = if w_hi != w_lo {
            lo - w_lo * (hi - lo) / (w_hi - w_lo)
        } else {
            0.5 * (lo + hi)
        };
        let width = hi - lo;
        if !(cand.is_finite()) || cand <= lo + 1e-3 * width || cand >= hi - 1e-3 * width {
            cand = 0.5 * (lo + hi);
        }
        let f_cand = f(cand)?;
        if f_cand.signum() == f_lo.signum() {
            lo = cand;
            f_lo = f_cand;
            w_lo = f_cand;
            if last_side == -1 {
                w_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = cand;
            w_hi = f_cand;
            if last_side == 1 {
                w_lo *= 0.5;
            }
            last_side = 1;
        }
        x = cand;
        fx = f_cand;
    }

    let (profile, fv) = solve_q(a, beta, x, cfg)?;
    Ok(CalibrationResult {
        a,
        beta,
        a_beta: x,
        q_at_a: fv.q_value(a),
        mass: fv.i,
        iterations,
        bracket,
        functionals: fv,
        profile,
    })
}
