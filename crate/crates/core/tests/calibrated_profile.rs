//! Properties of calibrated profiles that cut across modules: the
//! normalized profile must satisfy the full nonlocal profile equation
//!
//! ```text
//!     g'' g + a s g' g + K[g] g + (a/2) Λ[g] g + (1/3) g + (1/3) s g' = 0
//! ```
//!
//! with its own computed functionals, and the assembled similarity
//! solution must behave like a probability density concentrating at the
//! origin as t -> 0+.

use selfsim::{calibrate, calibration, SimilaritySolution, TailPolicy};

#[test]
fn calibrated_profile_satisfies_nonlocal_equation() {
    let cfg = calibration::default_config();
    let cal = calibrate(1.0, 1.0, &cfg, 1e-9).unwrap();
    let g = &cal.profile;
    let fv = &cal.functionals;
    let mu = g.params.mu;
    let rel_tol = g.config.rel_tol;
    let abs_tol = g.config.abs_tol;

    // The auxiliary equation residual plus the shift from replacing mu by
    // K + (a/2)Λ + 1/3 gives the nonlocal equation residual.
    let shift = fv.k + 0.5 * cal.a * fv.lam + 1.0 / 3.0 - mu;
    let mut checked = 0;
    for w in g.nodes.windows(2).step_by(53) {
        let s_mid = 0.5 * (w[0].s + w[1].s);
        let e = g.eval(s_mid, TailPolicy::Reject).unwrap();
        let r21 = g.ode_residual_at(s_mid).unwrap() + shift * e.q;
        let scale = (mu * e.q).max(abs_tol);
        assert!(
            r21.abs() <= 100.0 * rel_tol * scale,
            "residual {:.3e} vs allowance {:.3e} at s = {:.4e}",
            r21,
            100.0 * rel_tol * scale,
            s_mid
        );
        checked += 1;
    }
    assert!(checked > 20, "too few midpoints sampled");
}

#[test]
fn similarity_solution_delta_behavior() {
    let cfg = calibration::default_config();
    let cal = calibrate(1.0, 1.0, &cfg, 1e-8).unwrap();
    let sim = SimilaritySolution::from_calibration(&cal).unwrap();

    // Mass conservation across six decades of t.
    for k in -3..=3 {
        let t = 10f64.powi(k);
        let m = sim.mass(t).unwrap();
        assert!((m - 1.0).abs() <= 1e-6, "mass({t}) = {m}");
    }

    // Concentration: peak -> infinity, width -> 0, product fixed.
    let ts: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();
    let diag = sim.delta_diagnostics(&ts).unwrap();
    let product0 = diag[0].peak_height * diag[0].half_width;
    for d in &diag {
        let p = d.peak_height * d.half_width;
        assert!(((p - product0) / product0).abs() <= 1e-12);
    }
    assert!(diag.first().unwrap().peak_height > 9.0 * diag.last().unwrap().peak_height);
    assert!(diag.first().unwrap().half_width < diag.last().unwrap().half_width / 9.0);
}
