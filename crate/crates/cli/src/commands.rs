//! Subcommand implementations: run the solvers, write data files and the
//! manifest, print a short human-readable summary.

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use selfsim::serialize::{fmt_float, write_profile_csv_as, write_xy_csv, ProfileRecord};
use selfsim::{
    calibrate, check_limits, solve_profile, BoundReport, CalibrationResult, Grid, LimitsReport, PdeState,
    ProfileParams, SimilaritySolution, SolverConfig,
};

use crate::manifest::Manifest;
use crate::{Command, OutArgs, SolverArgs};

#[derive(Debug)]
pub enum CliError {
    Solver(selfsim::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl From<selfsim::Error> for CliError {
    fn from(e: selfsim::Error) -> Self {
        CliError::Solver(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Profile { solver, mu, amplitude, out } => profile(solver, mu, amplitude, out),
        Command::Calibrate { solver, beta, tol, out } => run_calibrate(solver, beta, tol, out),
        Command::Similarity { solver, beta, t, x_max, n, out } => similarity(solver, beta, t, x_max, n, out),
        Command::ValidatePde { solver, beta, t0, t_end, n, x_max, cfl, snapshot_t, out } => {
            validate_pde(solver, beta, t0, t_end, n, x_max, cfl, snapshot_t, out)
        }
        Command::CheckBounds {
            solver,
            a_list,
            mu_list,
            amplitude_list,
            envelope_samples,
            with_limits,
            out,
        } => check_bounds(solver, a_list, mu_list, amplitude_list, envelope_samples, with_limits, out),
    }
}

fn out_dir(out: &OutArgs) -> Result<PathBuf> {
    let dir = out
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("SELFSIM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value).expect("value serializes");
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

// Solver config for a direct profile solve at a given amplitude.
fn profile_config(args: &SolverArgs, amplitude: f64) -> SolverConfig {
    SolverConfig {
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        s_max: args.s_max.unwrap_or(1e4),
        q_floor: args.q_floor_frac * amplitude,
        max_steps: args.max_steps,
    }
}

// Solver config for amplitude sweeps (calibration, bounds): the tail
// floor is per unit amplitude and rescaled internally, and the default
// truncation is far out so the floor terminates every solve.
fn sweep_config(args: &SolverArgs) -> SolverConfig {
    SolverConfig {
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        s_max: args.s_max.unwrap_or(1e60),
        q_floor: args.q_floor_frac,
        max_steps: args.max_steps,
    }
}

fn profile(args: SolverArgs, mu: f64, amplitude: f64, out: OutArgs) -> Result<()> {
    let dir = out_dir(&out)?;
    let params = ProfileParams::new(args.a, mu, amplitude)?;
    let cfg = profile_config(&args, amplitude);
    let sol = solve_profile(&params, &cfg)?;
    let fv = selfsim::functionals(&sol)?;

    let csv_path = dir.join("profile.csv");
    write_profile_csv_as(&sol, ("s", "q", "qp"), BufWriter::new(File::create(&csv_path)?))?;
    let record = ProfileRecord::new(&sol, Some(fv));
    let json_path = dir.join("profile.json");
    write_json(&record, &json_path)?;

    let mut m = Manifest::new(
        "profile",
        json!({"a": args.a, "mu": mu, "amplitude": amplitude, "config": sol.config}),
    );
    m.record_output(&csv_path);
    m.record_output(&json_path);
    m.notes = json!({
        "terminated_by": sol.terminated_by,
        "terminal_s": sol.terminal_s,
        "tail_exponent": sol.tail_exponent,
        "identity_residual": selfsim::identity_residual(&sol, &fv),
    });
    m.write(&dir)?;

    println!(
        "profile: {} nodes to s = {}, tail exponent {:.6} (3 mu = {:.6})",
        sol.nodes.len(),
        fmt_float(sol.terminal_s),
        sol.tail_exponent,
        3.0 * mu
    );
    Ok(())
}

/// JSON face of a calibration result: profile metadata instead of the
/// full node list (that goes to the CSV).
#[derive(Serialize)]
struct CalibrationRecord {
    a: f64,
    beta: f64,
    a_beta: f64,
    q_at_a: f64,
    mass: f64,
    iterations: usize,
    bracket: (f64, f64),
    functionals: selfsim::FunctionalValues,
    profile: ProfileRecord,
}

impl CalibrationRecord {
    fn new(cal: &CalibrationResult) -> Self {
        Self {
            a: cal.a,
            beta: cal.beta,
            a_beta: cal.a_beta,
            q_at_a: cal.q_at_a,
            mass: cal.mass,
            iterations: cal.iterations,
            bracket: cal.bracket,
            functionals: cal.functionals,
            profile: ProfileRecord::new(&cal.profile, Some(cal.functionals)),
        }
    }
}

fn run_calibrate(args: SolverArgs, beta: f64, tol: f64, out: OutArgs) -> Result<()> {
    let dir = out_dir(&out)?;
    let cfg = sweep_config(&args);
    let cal = calibrate(args.a, beta, &cfg, tol)?;

    let csv_path = dir.join("g.csv");
    write_profile_csv_as(&cal.profile, ("s", "g", "gp"), BufWriter::new(File::create(&csv_path)?))?;
    let json_path = dir.join("result.json");
    write_json(&CalibrationRecord::new(&cal), &json_path)?;

    let mut m = Manifest::new("calibrate", json!({"a": args.a, "beta": beta, "tol": tol, "config": cfg}));
    m.record_output(&csv_path);
    m.record_output(&json_path);
    m.notes = json!({
        "a_beta": cal.a_beta,
        "mass": cal.mass,
        "iterations": cal.iterations,
        "bracket": cal.bracket,
    });
    m.write(&dir)?;

    println!(
        "calibrate: A_beta = {} with Q = {} (target {}), mass = {}",
        fmt_float(cal.a_beta),
        fmt_float(cal.q_at_a),
        beta,
        fmt_float(cal.mass)
    );
    Ok(())
}

fn similarity(args: SolverArgs, beta: f64, t_list: Vec<f64>, x_max: f64, n: usize, out: OutArgs) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(selfsim::Error::InvalidParameter(format!("n must be odd and >= 3, got {n}")).into());
    }
    let dir = out_dir(&out)?;
    let cfg = sweep_config(&args);
    let cal = calibrate(args.a, beta, &cfg, 1e-8)?;
    let sim = SimilaritySolution::from_calibration(&cal)?;

    let mut outputs = Vec::new();
    for (idx, &t) in t_list.iter().enumerate() {
        let mut rows = Vec::with_capacity(n);
        let half = (n - 1) / 2;
        let dx = 2.0 * x_max / (n - 1) as f64;
        for i in 0..n {
            let x = (i as f64 - half as f64) * dx;
            rows.push((x, sim.eval_u(t, x)?));
        }
        let path = dir.join(format!("u_t{idx}.csv"));
        write_xy_csv(("x", "u"), &rows, BufWriter::new(File::create(&path)?))?;
        outputs.push(path);
    }

    let diag = sim.delta_diagnostics(&t_list)?;
    let masses: Vec<f64> = t_list.iter().map(|&t| sim.mass(t)).collect::<selfsim::Result<_>>()?;
    let diag_path = dir.join("diagnostics.json");
    write_json(
        &json!({
            "exponents": sim.exponents,
            "a": sim.a,
            "beta": sim.beta,
            "a_beta": sim.peak_amplitude(),
            "s_half": sim.s_half(),
            "t": t_list,
            "mass": masses,
            "delta_diagnostics": diag,
        }),
        &diag_path,
    )?;
    outputs.push(diag_path);

    let mut m = Manifest::new(
        "similarity",
        json!({"a": args.a, "beta": beta, "t": t_list, "x_max": x_max, "n": n, "config": cfg}),
    );
    for p in &outputs {
        m.record_output(p);
    }
    m.notes = json!({"a_beta": sim.peak_amplitude(), "mass": masses});
    m.write(&dir)?;

    for d in &diag {
        println!(
            "t = {:>12}: peak = {}, half width = {}",
            d.t,
            fmt_float(d.peak_height),
            fmt_float(d.half_width)
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct PdeHistoryRow {
    t: f64,
    dt: f64,
    mass: f64,
    sup_rel_err: f64,
}

#[allow(clippy::too_many_arguments)]
fn validate_pde(
    args: SolverArgs,
    beta: f64,
    t0: f64,
    t_end: f64,
    n: usize,
    x_max: f64,
    cfl: f64,
    snapshot_t: Vec<f64>,
    out: OutArgs,
) -> Result<()> {
    let dir = out_dir(&out)?;
    let cfg = sweep_config(&args);
    let cal = calibrate(args.a, beta, &cfg, 1e-8)?;
    let sim = SimilaritySolution::from_calibration(&cal)?;
    let grid = Grid::symmetric(x_max, n)?;
    let mut state = PdeState::from_similarity(&sim, grid, t0)?;

    let sup_rel_err = |state: &PdeState| -> selfsim::Result<f64> {
        let mut num = 0.0_f64;
        let mut den = 0.0_f64;
        for i in 0..grid.n {
            let exact = sim.eval_u(state.t, grid.x(i))?;
            num = num.max((state.u[i] - exact).abs());
            den = den.max(exact);
        }
        Ok(num / den)
    };

    let mut history = vec![PdeHistoryRow { t: t0, dt: 0.0, mass: state.mass(), sup_rel_err: 0.0 }];
    let mut snapshots = snapshot_t.clone();
    snapshots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut snapshot_paths = Vec::new();

    while state.t < t_end {
        let dt = (cfl * state.suggest_dt(args.a)).min(t_end - state.t);
        state = state.step(args.a, dt)?;
        history.push(PdeHistoryRow {
            t: state.t,
            dt,
            mass: state.mass(),
            sup_rel_err: sup_rel_err(&state)?,
        });
        while let Some(&ts) = snapshots.first() {
            if state.t + 1e-14 < ts {
                break;
            }
            snapshots.remove(0);
            let rows: Vec<(f64, f64)> = (0..grid.n).map(|i| (grid.x(i), state.u[i])).collect();
            let path = dir.join(format!("u_snapshot_{}.csv", snapshot_paths.len()));
            write_xy_csv(("x", "u"), &rows, BufWriter::new(File::create(&path)?))?;
            snapshot_paths.push(path);
        }
    }

    let final_err = history.last().unwrap().sup_rel_err;
    let max_mass_drift = history.iter().map(|r| (r.mass - 1.0).abs()).fold(0.0_f64, f64::max);
    let report_path = dir.join("report.json");
    write_json(
        &json!({
            "a": args.a,
            "beta": beta,
            "a_beta": sim.peak_amplitude(),
            "grid": grid,
            "t0": t0,
            "t_end": t_end,
            "cfl": cfl,
            "steps": history.len() - 1,
            "final_sup_rel_err": final_err,
            "max_mass_drift": max_mass_drift,
            "clipped_mass": state.clipped_mass,
            "history": history,
        }),
        &report_path,
    )?;

    let mut m = Manifest::new(
        "validate-pde",
        json!({"a": args.a, "beta": beta, "t0": t0, "t_end": t_end, "n": n, "x_max": x_max, "cfl": cfl, "config": cfg}),
    );
    m.record_output(&report_path);
    for p in &snapshot_paths {
        m.record_output(p);
    }
    m.notes = json!({
        "final_sup_rel_err": final_err,
        "max_mass_drift": max_mass_drift,
        "steps": history.len() - 1,
    });
    m.write(&dir)?;

    println!(
        "validate-pde: {} steps to t = {}, sup rel err = {:.3e}, max |mass - 1| = {:.3e}",
        history.len() - 1,
        state.t,
        final_err,
        max_mass_drift
    );
    Ok(())
}

fn check_bounds(
    args: SolverArgs,
    a_list: Vec<f64>,
    mu_list: Vec<f64>,
    amplitude_list: Vec<f64>,
    envelope_samples: usize,
    with_limits: bool,
    out: OutArgs,
) -> Result<()> {
    let dir = out_dir(&out)?;
    let mut reports: Vec<BoundReport> = Vec::new();
    for &a in &a_list {
        for &mu in &mu_list {
            for &amplitude in &amplitude_list {
                let params = ProfileParams::new(a, mu, amplitude)?;
                let cfg = SolverConfig { q_floor: args.q_floor_frac * amplitude, ..sweep_config(&args) };
                let sol = solve_profile(&params, &cfg)?;
                let fv = selfsim::functionals(&sol)?;
                reports.push(BoundReport::for_solution(&sol, &fv, envelope_samples)?);
            }
        }
    }

    let bounds_path = dir.join("bounds.json");
    write_json(&reports, &bounds_path)?;

    let mut limits: Option<LimitsReport> = None;
    let mut limits_path = None;
    if with_limits {
        let amps: Vec<f64> = (-4..=2).map(|k| 10f64.powi(k)).collect();
        let report = check_limits(1.0, 1.0, &amps, &sweep_config(&args))?;
        let path = dir.join("limits.json");
        write_json(&report, &path)?;
        limits = Some(report);
        limits_path = Some(path);
    }

    let mut m = Manifest::new(
        "check-bounds",
        json!({
            "a_list": a_list, "mu_list": mu_list, "amplitude_list": amplitude_list,
            "envelope_samples": envelope_samples, "with_limits": with_limits,
            "config": sweep_config(&args),
        }),
    );
    m.record_output(&bounds_path);
    if let Some(p) = &limits_path {
        m.record_output(p);
    }
    let all_pass = reports.iter().all(|r| r.all_satisfied());
    m.notes = json!({"all_satisfied": all_pass});
    m.write(&dir)?;

    // Human-readable table: one line per parameter point, then details
    // for any violated check.
    println!("{:<8} {:<8} {:<10} {:>7} {:>6}", "a", "mu", "A", "checks", "pass");
    for r in &reports {
        let ok = r.checks.iter().filter(|c| c.satisfied).count();
        println!(
            "{:<8} {:<8} {:<10} {:>7} {:>6}",
            r.params.a,
            r.params.mu,
            r.params.amplitude,
            r.checks.len(),
            if ok == r.checks.len() { "PASS" } else { "FAIL" }
        );
        for c in r.checks.iter().filter(|c| !c.satisfied) {
            println!("    {}: lhs = {} rhs = {} margin = {}", c.name, c.lhs, c.rhs, c.margin);
        }
    }
    if let Some(l) = &limits {
        println!(
            "limits (a=1, mu=1): I increasing = {}, Λ increasing = {}, lower bounds = {}, K -> 0 = {}",
            l.i_increasing, l.lam_increasing, l.lower_bounds_hold, l.k_vanishes
        );
    }
    if !all_pass {
        return Err(selfsim::Error::InvalidParameter("one or more bound checks failed".into()).into());
    }
    Ok(())
}
