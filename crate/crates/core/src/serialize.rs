//! CSV and JSON serialization of solver outputs.
//!
//! Gridded data goes to CSV with 17 significant digits (lossless for
//! doubles); records and reports go to JSON through serde. Identical
//! inputs serialize to byte-identical payloads.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{ProfileNode, ProfileParams, ProfileSolution, SolverConfig, TerminationReason};
use crate::quadrature::FunctionalValues;

/// Format a double with 17 significant digits, round-tripping exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON record accompanying a profile CSV: everything needed to rebuild
/// the dense solution next to the node data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub params: ProfileParams,
    pub config: SolverConfig,
    pub terminated_by: TerminationReason,
    pub terminal_s: f64,
    pub tail_exponent: f64,
    pub n_nodes: usize,
    /// The q' tail extrapolation differentiates the fitted power law; the
    /// analysis only guarantees q' -> 0, so the rate is a heuristic.
    pub qp_tail_heuristic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functionals: Option<FunctionalValues>,
}

impl ProfileRecord {
    pub fn new(sol: &ProfileSolution, functionals: Option<FunctionalValues>) -> Self {
        Self {
            params: sol.params,
            config: sol.config,
            terminated_by: sol.terminated_by,
            terminal_s: sol.terminal_s,
            tail_exponent: sol.tail_exponent,
            n_nodes: sol.nodes.len(),
            qp_tail_heuristic: true,
            functionals,
        }
    }

    /// Reassemble a dense solution from this record and re-read node data.
    pub fn with_nodes(&self, nodes: Vec<ProfileNode>) -> Result<ProfileSolution> {
        if nodes.len() != self.n_nodes {
            return Err(Error::Parse(format!(
                "record says {} nodes, CSV has {}",
                self.n_nodes,
                nodes.len()
            )));
        }
        Ok(ProfileSolution {
            params: self.params,
            config: self.config,
            nodes,
            terminal_s: self.terminal_s,
            terminated_by: self.terminated_by,
            tail_exponent: self.tail_exponent,
        })
    }
}

/// Write the node sequence as `s,q,qp` CSV.
pub fn write_profile_csv<W: Write>(sol: &ProfileSolution, w: W) -> io::Result<()> {
    write_profile_csv_as(sol, ("s", "q", "qp"), w)
}

/// Write the node sequence as CSV under the given column names
/// (calibrated profiles are emitted as `s,g,gp`).
pub fn write_profile_csv_as<W: Write>(
    sol: &ProfileSolution,
    header: (&str, &str, &str),
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "{},{},{}", header.0, header.1, header.2)?;
    for n in &sol.nodes {
        writeln!(w, "{},{},{}", fmt_float(n.s), fmt_float(n.q), fmt_float(n.qp))?;
    }
    Ok(())
}

/// Read a profile CSV (`s,q,qp` or `s,g,gp`) back into nodes.
pub fn read_profile_csv<R: BufRead>(r: R) -> Result<Vec<ProfileNode>> {
    let mut nodes = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if i == 0 {
            if line.trim() != "s,q,qp" && line.trim() != "s,g,gp" {
                return Err(Error::Parse(format!("unexpected header {line:?}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |what: &str| -> Result<f64> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", i + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: bad {what}: {e}", i + 1)))
        };
        nodes.push(ProfileNode { s: next("s")?, q: next("q")?, qp: next("qp")? });
    }
    if nodes.is_empty() {
        return Err(Error::Parse("CSV contains no data rows".into()));
    }
    Ok(nodes)
}

/// Write generic two-column CSV (used for `x, u(t,x)` slices).
pub fn write_xy_csv<W: Write>(header: (&str, &str), rows: &[(f64, f64)], mut w: W) -> io::Result<()> {
    writeln!(w, "{},{}", header.0, header.1)?;
    for (x, y) in rows {
        writeln!(w, "{},{}", fmt_float(*x), fmt_float(*y))?;
    }
    Ok(())
}
