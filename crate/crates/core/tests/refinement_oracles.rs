//! Accuracy of the dense output against refined re-solves.
//!
//! The oracle throughout is the same solver run at 10x tighter
//! tolerances: wherever the coarse solution claims rel_tol accuracy, the
//! refined one is an order more accurate, so their difference measures
//! the coarse error.

use selfsim::{solve_profile, ProfileParams, SolverConfig, TailPolicy};

fn refined(cfg: &SolverConfig) -> SolverConfig {
    SolverConfig { rel_tol: cfg.rel_tol / 10.0, abs_tol: cfg.abs_tol / 10.0, ..*cfg }
}

#[test]
fn interpolated_q_matches_refined_solve() {
    let params = ProfileParams::new(1.0, 1.0, 1.0).unwrap();
    let cfg = SolverConfig::defaults_for(1.0);
    let coarse = solve_profile(&params, &cfg).unwrap();
    let fine = solve_profile(&params, &refined(&cfg)).unwrap();

    // Off-node abscissas spread over the whole range, geometrically.
    let mut worst: (f64, f64) = (0.0, 0.0);
    let mut s = 0.0137;
    while s < coarse.terminal_s.min(fine.terminal_s) {
        let qc = coarse.eval(s, TailPolicy::Reject).unwrap().q;
        let qf = fine.eval(s, TailPolicy::Reject).unwrap().q;
        let rel = ((qc - qf) / qf).abs();
        if rel > worst.1 {
            worst = (s, rel);
        }
        s *= 1.7;
    }
    assert!(
        worst.1 <= 10.0 * cfg.rel_tol,
        "worst interpolation error {:.3e} at s = {:.4e} exceeds 10x rel_tol",
        worst.1,
        worst.0
    );
}

#[test]
fn tolerance_pair_agreement_scales() {
    // Solutions at (tau, tau/10) agree to O(tau): check the agreement
    // improves by roughly an order when both tolerances tighten.
    let params = ProfileParams::new(1.0, 1.0, 1.0).unwrap();
    let probe = [0.5, 1.0, 2.0, 5.0, 20.0];
    let mut gaps = Vec::new();
    for rel_tol in [1e-7, 1e-9] {
        let cfg = SolverConfig { rel_tol, abs_tol: rel_tol * 1e-2, ..SolverConfig::defaults_for(1.0) };
        let coarse = solve_profile(&params, &cfg).unwrap();
        let fine = solve_profile(&params, &refined(&cfg)).unwrap();
        let gap = probe
            .iter()
            .map(|&s| {
                let qc = coarse.eval(s, TailPolicy::Reject).unwrap().q;
                let qf = fine.eval(s, TailPolicy::Reject).unwrap().q;
                ((qc - qf) / qf).abs()
            })
            .fold(0.0_f64, f64::max);
        gaps.push(gap);
    }
    println!("pair agreement: tau=1e-7 -> {:.3e}, tau=1e-9 -> {:.3e}", gaps[0], gaps[1]);
    assert!(gaps[0] <= 1e-5, "agreement at tau=1e-7: {:.3e}", gaps[0]);
    assert!(gaps[1] <= gaps[0], "agreement must not degrade as tau tightens");
}

#[test]
fn tail_exponent_consistent_under_refinement() {
    // The fitted slope is a solver output; a 10x tighter run must agree.
    let params = ProfileParams::new(1.0, 1.0, 1.0).unwrap();
    let cfg = SolverConfig::deep_tail_for(1.0, 1e-12);
    let coarse = solve_profile(&params, &cfg).unwrap();
    let fine = solve_profile(&params, &refined(&cfg)).unwrap();
    assert!((coarse.tail_exponent - 3.0).abs() < 0.01);
    assert!(
        (coarse.tail_exponent - fine.tail_exponent).abs() < 1e-4,
        "slopes {} vs {}",
        coarse.tail_exponent,
        fine.tail_exponent
    );
}
