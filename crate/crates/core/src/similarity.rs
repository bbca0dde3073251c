//! The self-similar solution `u(t, x) = t^(-kappa) g(x t^(-lambda))` and
//! its delta-approach diagnostics.
//!
//! The scaling exponents are forced by requiring the substituted equation
//! to be free of explicit `t`, which yields four constraints on
//! `(gamma, kappa, lambda)`; the unique solution is
//! `gamma = -2/3, kappa = 1/3, lambda = 1/3`. With a calibrated profile
//! (`∫g = 1`) the solution is a probability density for every `t > 0`
//! whose mass is conserved exactly while the peak grows like `t^(-1/3)`
//! and the half-width shrinks like `t^(1/3)` — the checkable fingerprints
//! of weak-* convergence to the Dirac delta as `t -> 0+`.

use serde::{Deserialize, Serialize};

use crate::calibration::CalibrationResult;
use crate::error::{Error, Result};
use crate::profile::{ProfileSolution, TailPolicy};
use crate::quadrature::FunctionalValues;

/// Scaling exponents of the similarity ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub gamma: f64,
    pub kappa: f64,
    pub lambda: f64,
}

impl Exponents {
    /// Residuals of the four no-explicit-t constraints:
    /// `1 - kappa - 2 lambda`, `1 + gamma - kappa`,
    /// `1 - 2 kappa - lambda`, `1 + gamma + lambda - 2 kappa`.
    pub fn constraint_residuals(&self) -> [f64; 4] {
        let Exponents { gamma, kappa, lambda } = *self;
        [
            1.0 - kappa - 2.0 * lambda,
            1.0 + gamma - kappa,
            1.0 - 2.0 * kappa - lambda,
            1.0 + gamma + lambda - 2.0 * kappa,
        ]
    }
}

/// Solve the four-constraint linear system for `(gamma, kappa, lambda)`.
///
/// Three of the constraints form a regular 3x3 system; elimination gives
/// `kappa = lambda = 1/3`, `gamma = kappa - 1`. The fourth constraint is
/// verified as a consistency check (the system is overdetermined but
/// consistent).
pub fn derive_exponents() -> Exponents {
    // 1 - kappa - 2 lambda = 0 and 1 - 2 kappa - lambda = 0 subtract to
    // kappa = lambda, then 3 lambda = 1; 1 + gamma - kappa = 0 closes it.
    let lambda = 1.0 / 3.0;
    let kappa = lambda;
    let gamma = kappa - 1.0;
    let e = Exponents { gamma, kappa, lambda };
    for r in e.constraint_residuals() {
        debug_assert!(r.abs() <= 1e-15, "inconsistent exponent system: residual {r}");
    }
    e
}

/// One row of the delta-approach diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaDiagnostic {
    pub t: f64,
    /// `u(t, 0) = A_beta t^(-1/3)`.
    pub peak_height: f64,
    /// Half width at half maximum, `t^(1/3) s_half`.
    pub half_width: f64,
}

/// A calibrated profile together with the fixed exponents, evaluating
/// `u(t, x) = t^(-1/3) g(x t^(-1/3))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilaritySolution {
    pub exponents: Exponents,
    pub a: f64,
    pub beta: f64,
    pub g: ProfileSolution,
    pub functionals: FunctionalValues,
}

impl SimilaritySolution {
    /// Assemble from a calibration result, checking that the profile
    /// carries unit mass.
    pub fn from_calibration(cal: &CalibrationResult) -> Result<Self> {
        if (cal.mass - 1.0).abs() > crate::calibration::MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "calibrated profile has mass {} (not within {} of 1)",
                cal.mass,
                crate::calibration::MASS_TOLERANCE
            )));
        }
        Ok(Self {
            exponents: derive_exponents(),
            a: cal.a,
            beta: cal.beta,
            g: cal.profile.clone(),
            functionals: cal.functionals,
        })
    }

    /// Peak amplitude of the profile, `g(0) = A_beta`.
    pub fn peak_amplitude(&self) -> f64 {
        self.g.amplitude()
    }

    /// Evaluate `u(t, x)`; requires `t > 0`. Past the computed profile
    /// range the power-law tail extrapolation is used, so the value is
    /// defined for every `x`.
    pub fn eval_u(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime(t));
        }
        let scale = t.powf(-1.0 / 3.0);
        let s = x * scale;
        let g = self.g.eval(s, TailPolicy::Extrapolate)?;
        Ok(scale * g.q)
    }

    /// Numerical mass `∫ u(t, x) dx` over `[-S t^(1/3), S t^(1/3)]` with
    /// the profile's tail correction added; independent of `t` up to
    /// rounding because the substitution `s = x t^(-1/3)` maps the grid
    /// onto the profile nodes.
    pub fn mass(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime(t));
        }
        let tl = t.powf(1.0 / 3.0);
        let ts = t.powf(-1.0 / 3.0);
        // Simpson over the mapped nodes x_i = s_i t^(1/3) with the
        // dense-output midpoint values of u = t^(-1/3) g.
        let mut half = 0.0;
        for w in self.g.nodes.windows(2) {
            let (l, r) = (&w[0], &w[1]);
            let hx = r.s * tl - l.s * tl;
            let hs = r.s - l.s;
            let q_mid = 0.5 * (l.q + r.q) + hs * (l.qp - r.qp) * 0.125;
            half += hx / 6.0 * (ts * l.q + 4.0 * ts * q_mid + ts * r.q);
        }
        let last = self.g.nodes.last().expect("profile has nodes");
        let alpha = self.g.tail_exponent;
        // Tail of u in x: substitution gives the same t-independent mass
        // as the profile tail correction.
        let tail_x = (ts * last.q) * (tl * last.s) / (alpha - 1.0);
        Ok(2.0 * (half + tail_x))
    }

    /// Half-maximum abscissa of the profile: `g(s_half) = A_beta / 2`,
    /// located by bisection on the dense output.
    pub fn s_half(&self) -> f64 {
        let target = 0.5 * self.g.amplitude();
        // The nodes are strictly decreasing in q; find the bracketing pair.
        let idx = self.g.nodes.partition_point(|n| n.q > target);
        if idx == 0 {
            return 0.0;
        }
        if idx >= self.g.nodes.len() {
            return self.g.terminal_s;
        }
        let (mut lo, mut hi) = (self.g.nodes[idx - 1].s, self.g.nodes[idx].s);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let q = self.g.eval(mid, TailPolicy::Reject).expect("in range").q;
            if q > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) <= 1e-14 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Peak height and half width for each requested time.
    ///
    /// `peak_height(t) = A_beta t^(-1/3)` and
    /// `half_width(t) = t^(1/3) s_half`, so their product is independent
    /// of `t`.
    pub fn delta_diagnostics(&self, t_list: &[f64]) -> Result<Vec<DeltaDiagnostic>> {
        if t_list.is_empty() {
            return Err(Error::InvalidParameter("t_list must be nonempty".into()));
        }
        let s_half = self.s_half();
        let amp = self.g.amplitude();
        t_list
            .iter()
            .map(|&t| {
                if !(t > 0.0) {
                    return Err(Error::NonPositiveTime(t));
                }
                Ok(DeltaDiagnostic {
                    t,
                    peak_height: amp * t.powf(-1.0 / 3.0),
                    half_width: t.powf(1.0 / 3.0) * s_half,
                })
            })
            .collect()
    }
}
