//! Inequality and limit checks on computed profiles.
//!
//! Every check is normalized to the form `lhs <= rhs` with
//! `margin = rhs - lhs`; a check is satisfied when the margin is no worse
//! than a small relative slack (strict analytic inequalities can only be
//! violated by numerical error, so the slack is `1e-8` relative).
//!
//! Covered statements, for the profile `q(.; a, mu, A)`:
//!
//! * sup-norm bound: `max |q'| <= mu sqrt(3A / (1 + 3 a A))`;
//! * half-line integral lower bounds:
//!   `∫_0^inf q >= A^{3/2} sqrt(1+3aA) / (2 sqrt(3) mu)` and
//!   `∫_0^inf q^2 >= A^{5/2} sqrt(1+3aA) / (3 sqrt(3) mu)`;
//! * whole-line `K` upper bound: `K <= 2 sqrt(3 A^3 mu^2 / (1+3aA))`;
//! * the two-sided tail envelope for `s >= 1`, checked in log form:
//!
//!   ```text
//!   q(1) e^{3 a q(1)}
//!   ------------------------------------------- < q(s) e^{3 a q(s)}
//!   s^{3mu} exp[3mu + (3mu/s) sqrt(3A/(1+3aA))]
//!
//!                    A e^{3 A (1+a)}
//!       <= -------------------------------------------
//!          s^{3mu} exp[3mu - (3mu/s) sqrt(3A/(1+3aA))]
//!   ```
//!
//! * limit trends in the amplitude: `I(A)` and `Λ(A)` increase past their
//!   explicit lower bounds as `A` grows, while the `K(A)` bound forces
//!   `K -> 0` as `A -> 0+`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{solve_profile, ProfileParams, ProfileSolution, SolverConfig, TailPolicy};
use crate::quadrature::{functionals, FunctionalValues};

/// Relative slack granted to strict analytic inequalities.
pub const SLACK: f64 = 1e-8;

/// One normalized inequality check (`lhs <= rhs`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl BoundCheck {
    fn new(name: String, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        Self { name, lhs, rhs, satisfied: margin >= -SLACK * scale, margin }
    }
}

/// All checks for one parameter point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: ProfileParams,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    /// Run the sup-norm, integral and envelope checks on one solution.
    pub fn for_solution(sol: &ProfileSolution, fv: &FunctionalValues, envelope_samples: usize) -> Result<Self> {
        let mut checks = vec![check_sup_bound(sol)];
        checks.extend(check_integral_bounds(sol, fv));
        checks.push(check_k_bound(sol, fv));
        checks.extend(check_envelope(sol, envelope_samples)?);
        Ok(Self { params: sol.params, checks })
    }

    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

/// Sup-norm bound on `q'`.
pub fn check_sup_bound(sol: &ProfileSolution) -> BoundCheck {
    let p = &sol.params;
    let rhs = p.mu * (3.0 * p.amplitude / (1.0 + 3.0 * p.a * p.amplitude)).sqrt();
    BoundCheck::new("sup_qp".into(), sol.sup_qp(), rhs)
}

/// Half-line lower bounds on `∫q` and `∫q^2` (the whole-line functionals
/// are halved by evenness).
pub fn check_integral_bounds(sol: &ProfileSolution, fv: &FunctionalValues) -> [BoundCheck; 2] {
    let p = &sol.params;
    let root = (1.0 + 3.0 * p.a * p.amplitude).sqrt();
    let i_bound = p.amplitude.powf(1.5) * root / (2.0 * 3.0f64.sqrt() * p.mu);
    let lam_bound = p.amplitude.powf(2.5) * root / (3.0 * 3.0f64.sqrt() * p.mu);
    [
        BoundCheck::new("i_half_lower".into(), i_bound, 0.5 * fv.i),
        BoundCheck::new("lam_half_lower".into(), lam_bound, 0.5 * fv.lam),
    ]
}

/// Whole-line upper bound on `K = ∫ q'^2`.
pub fn check_k_bound(sol: &ProfileSolution, fv: &FunctionalValues) -> BoundCheck {
    let p = &sol.params;
    let rhs = 2.0 * (3.0 * p.amplitude.powi(3) * p.mu * p.mu / (1.0 + 3.0 * p.a * p.amplitude)).sqrt();
    BoundCheck::new("k_upper".into(), fv.k, rhs)
}

/// Two-sided envelope at `samples` log-spaced abscissas in
/// `[1, terminal_s]`, evaluated in log form so very deep tails do not
/// overflow. Two checks per sample (lower and upper side).
pub fn check_envelope(sol: &ProfileSolution, samples: usize) -> Result<Vec<BoundCheck>> {
    if sol.terminal_s <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "envelope needs terminal_s > 1, got {}",
            sol.terminal_s
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 envelope samples".into()));
    }
    let p = &sol.params;
    let (a, mu, amp) = (p.a, p.mu, p.amplitude);
    let root = (3.0 * amp / (1.0 + 3.0 * a * amp)).sqrt();
    let q1 = sol.eval(1.0, TailPolicy::Reject)?.q;
    let ln_low_prefix = q1.ln() + 3.0 * a * q1 - 3.0 * mu;
    let ln_high_prefix = amp.ln() + 3.0 * amp * (1.0 + a) - 3.0 * mu;

    let ln_s_max = sol.terminal_s.ln();
    let mut checks = Vec::with_capacity(2 * samples);
    for j in 0..samples {
        let ln_s = ln_s_max * (j as f64) / (samples as f64 - 1.0);
        let s = ln_s.exp();
        let q = sol.eval(s.min(sol.terminal_s), TailPolicy::Reject)?.q;
        let ln_mid = q.ln() + 3.0 * a * q;
        let ln_lo = ln_low_prefix - 3.0 * mu * ln_s - (3.0 * mu / s) * root;
        let ln_hi = ln_high_prefix - 3.0 * mu * ln_s + (3.0 * mu / s) * root;
        checks.push(BoundCheck::new(format!("envelope_lower@s={s:.6e}"), ln_lo, ln_mid));
        checks.push(BoundCheck::new(format!("envelope_upper@s={s:.6e}"), ln_mid, ln_hi));
    }
    Ok(checks)
}

/// One amplitude point of the limits sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LimitsRow {
    pub amplitude: f64,
    pub i: f64,
    pub lam: f64,
    pub k: f64,
    pub i_lower_bound: f64,
    pub lam_lower_bound: f64,
    pub k_upper_bound: f64,
}

/// Trend report over an ascending amplitude list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitsReport {
    pub rows: Vec<LimitsRow>,
    /// `I` grows along the list (divergence trend as `A -> inf`).
    pub i_increasing: bool,
    /// `Λ` grows along the list.
    pub lam_increasing: bool,
    /// Whole-line lower bounds hold at every point.
    pub lower_bounds_hold: bool,
    /// `K` at the smallest amplitude sits below its explicit bound
    /// (which vanishes as `A -> 0+`).
    pub k_vanishes: bool,
}

/// Sweep the amplitude list (ascending, spanning several decades) at fixed
/// `(a, mu)` and report the limit trends with their quantitative handles.
///
/// As in calibration sweeps, `cfg.q_floor` is interpreted per unit
/// amplitude and rescaled by each `A`.
pub fn check_limits(a: f64, mu: f64, amplitudes: &[f64], cfg: &SolverConfig) -> Result<LimitsReport> {
    if amplitudes.len() < 2 || amplitudes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("amplitudes must be ascending with at least 2 entries".into()));
    }
    let mut rows = Vec::with_capacity(amplitudes.len());
    for &amp in amplitudes {
        let params = ProfileParams::new(a, mu, amp)?;
        let cfg_a = SolverConfig { q_floor: cfg.q_floor * amp, ..*cfg };
        let sol = solve_profile(&params, &cfg_a)?;
        let fv = functionals(&sol)?;
        let root = (1.0 + 3.0 * a * amp).sqrt();
        rows.push(LimitsRow {
            amplitude: amp,
            i: fv.i,
            lam: fv.lam,
            k: fv.k,
            i_lower_bound: 2.0 * amp.powf(1.5) * root / (3.0 * 3.0f64.sqrt() * mu),
            lam_lower_bound: 2.0 * amp.powf(2.5) * root / (3.0 * 3.0f64.sqrt() * mu),
            k_upper_bound: 2.0 * (3.0 * amp.powi(3) * mu * mu / (1.0 + 3.0 * a * amp)).sqrt(),
        });
    }
    let i_increasing = rows.windows(2).all(|w| w[0].i < w[1].i);
    let lam_increasing = rows.windows(2).all(|w| w[0].lam < w[1].lam);
    let lower_bounds_hold = rows
        .iter()
        .all(|r| r.i >= r.i_lower_bound * (1.0 - SLACK) && r.lam >= r.lam_lower_bound * (1.0 - SLACK));
    let k_vanishes = rows[0].k <= rows[0].k_upper_bound * (1.0 + SLACK);
    Ok(LimitsReport { rows, i_increasing, lam_increasing, lower_bounds_hold, k_vanishes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(a: f64, mu: f64, amp: f64) -> (ProfileSolution, FunctionalValues) {
        let sol =
            solve_profile(&ProfileParams::new(a, mu, amp).unwrap(), &SolverConfig::deep_tail_for(amp, 1e-12)).unwrap();
        let fv = functionals(&sol).unwrap();
        (sol, fv)
    }

    #[test]
    fn sup_bound_arithmetic_and_satisfaction() {
        let (sol, _) = solve(1.0, 1.0, 1.0);
        let c = check_sup_bound(&sol);
        assert!((c.rhs - 0.75f64.sqrt()).abs() < 1e-15, "bound should be sqrt(3/4), got {}", c.rhs);
        assert!(c.satisfied);
    }

    #[test]
    fn sup_bound_vanishes_with_amplitude() {
        // As A -> 0+ the bound mu sqrt(3A/(1+3aA)) -> 0 and drags the
        // sup-norm of q' to zero with it.
        let (sol, _) = solve(1.0, 1.0, 1e-4);
        let c = check_sup_bound(&sol);
        assert!(c.rhs < 0.02, "bound should be tiny, got {}", c.rhs);
        assert!(c.satisfied && c.lhs <= c.rhs);
    }

    #[test]
    fn integral_bound_arithmetic() {
        let (sol, fv) = solve(1.0, 1.0, 1.0);
        let [ci, clam] = check_integral_bounds(&sol, &fv);
        assert!((ci.lhs - 1.0 / 3.0f64.sqrt()).abs() < 1e-15, "I bound {}", ci.lhs);
        assert!((clam.lhs - 2.0 / (3.0 * 3.0f64.sqrt())).abs() < 1e-15, "Λ bound {}", clam.lhs);
        assert!(ci.satisfied && clam.satisfied);
    }

    #[test]
    fn envelope_holds_and_is_strict_at_s1() {
        let (sol, _) = solve(1.0, 1.0, 1.0);
        let checks = check_envelope(&sol, 25).unwrap();
        for c in &checks {
            assert!(c.satisfied, "{} violated: lhs {} rhs {}", c.name, c.lhs, c.rhs);
        }
        // At s = 1 the lower bound is strictly below q(1)e^{3 a q(1)}
        // because the exponential factor exceeds one.
        assert!(checks[0].margin > 0.0);
    }

    #[test]
    fn sweep_points_satisfy_everything() {
        for a in [0.5, 2.0] {
            for mu in [0.5, 3.0] {
                for amp in [0.1, 10.0] {
                    let (sol, fv) = solve(a, mu, amp);
                    let report = BoundReport::for_solution(&sol, &fv, 20).unwrap();
                    for c in &report.checks {
                        assert!(c.satisfied, "a={a} mu={mu} A={amp}: {} violated (lhs {}, rhs {})", c.name, c.lhs, c.rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn limits_trend_report() {
        let cfg = SolverConfig { s_max: 1e60, ..SolverConfig::defaults_for(1.0) };
        let amps: Vec<f64> = (-4..=2).map(|k| 10f64.powi(k)).collect();
        let report = check_limits(1.0, 1.0, &amps, &cfg).unwrap();
        assert!(report.i_increasing);
        assert!(report.lam_increasing);
        assert!(report.lower_bounds_hold);
        assert!(report.k_vanishes);
        // Arithmetic anchors for the explicit bounds.
        let k_bound_small = report.rows[0].k_upper_bound;
        assert!((k_bound_small - 3.4636e-6).abs() < 1e-9, "K bound at A=1e-4: {k_bound_small}");
        let i_bound_top = report.rows.last().unwrap().i_lower_bound;
        assert!((i_bound_top - 6677.8).abs() < 1.0, "I bound at A=100: {i_bound_top}");
    }

    #[test]
    fn rejects_unordered_amplitudes() {
        let cfg = SolverConfig::defaults_for(1.0);
        assert!(check_limits(1.0, 1.0, &[1.0, 0.5], &cfg).is_err());
        assert!(check_limits(1.0, 1.0, &[1.0], &cfg).is_err());
    }
}
