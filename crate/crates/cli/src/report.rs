//! Report layout and writers.
//!
//! Everything outside the `runtime` block is a pure function of the
//! configuration, so two runs with the same flags produce identical reports
//! once `runtime` is dropped.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use ehcheck_core::checks::{Check, Tolerances};
use ehcheck_core::sweep::SweepRow;

pub const SCHEMA_VERSION: u32 = 1;

pub const SCAN_HEADER: [&str; 12] = [
    "B", "n", "C", "admissibility", "r0", "A", "scalar_residual", "h_residual", "E_raw", "kappa",
    "E_paper", "status",
];

pub const SPEC_HEADER: [&str; 10] = [
    "B", "n", "C", "status", "pass", "kind", "name", "value", "residual", "tolerance",
];

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub formula: &'static str,
}

/// A reported number with the residual and tolerance it was checked
/// against (null where no check applies).
#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
}

impl Quantity {
    pub fn new(value: f64, formula: &'static str) -> Self {
        Quantity {
            value,
            residual: None,
            tolerance: None,
            provenance: Provenance { formula },
        }
    }

    pub fn checked(mut self, residual: f64, tolerance: f64) -> Self {
        self.residual = Some(residual);
        self.tolerance = Some(tolerance);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecResult {
    #[serde(rename = "B")]
    pub b: f64,
    pub n: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub admissibility: &'static str,
    /// `ok`, `check-failed`, or the error code that stopped the run.
    pub status: &'static str,
    pub pass: bool,
    pub quantities: BTreeMap<&'static str, Quantity>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl SpecResult {
    pub fn new(b: f64, n: u32, c: f64, admissibility: &'static str) -> Self {
        SpecResult {
            b,
            n,
            c,
            admissibility,
            status: "ok",
            pass: true,
            quantities: BTreeMap::new(),
            checks: Vec::new(),
            detail: None,
        }
    }

    pub fn fail(&mut self, err: &ehcheck_core::Error) {
        self.status = err.code();
        self.pass = false;
        self.detail = Some(err.to_string());
    }

    pub fn push_checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        if self.status == "ok" && self.checks.iter().any(|c| !c.pass) {
            self.status = "check-failed";
            self.pass = false;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub command: &'static str,
    pub family: &'static str,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    pub n: Vec<u32>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    pub tolerances: Tolerances,
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lapse: Option<[f64; 2]>,
    pub max_specs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub specs: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Runtime {
    pub workers: usize,
    pub parallel: bool,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<SpecResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<SweepRow>,
    pub summary: Summary,
    pub runtime: Runtime,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Writes through a temporary file in the target directory, then renames it
/// into place.
fn write_atomic(path: &Path, body: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(body)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot move the report into {}", path.display()))?;
    Ok(())
}

pub fn to_json(report: &Report) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json(report: &Report, path: &Path) -> Result<()> {
    write_atomic(path, to_json(report)?.as_bytes())
}

pub fn to_csv(report: &Report) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if report.config.command == "scan" {
        w.write_record(SCAN_HEADER)?;
        for row in &report.rows {
            w.write_record([
                fmt_f64(row.b),
                row.n.to_string(),
                fmt_f64(row.c),
                row.admissibility.to_string(),
                fmt_opt(row.r0),
                fmt_opt(row.a),
                fmt_opt(row.scalar_residual),
                fmt_opt(row.h_residual),
                fmt_opt(row.e_raw),
                fmt_opt(row.kappa),
                fmt_opt(row.e_paper),
                row.status.to_string(),
            ])?;
        }
    } else {
        w.write_record(SPEC_HEADER)?;
        for res in &report.results {
            let lead = [fmt_f64(res.b), res.n.to_string(), fmt_f64(res.c), res.status.to_string(), res.pass.to_string()];
            for (name, q) in &res.quantities {
                let tail = ["quantity".to_string(), name.to_string(), fmt_f64(q.value), fmt_opt(q.residual), fmt_opt(q.tolerance)];
                w.write_record(lead.iter().chain(&tail))?;
            }
            for c in &res.checks {
                let tail = ["check".to_string(), c.name.to_string(), fmt_f64(c.value), String::new(), fmt_f64(c.tolerance)];
                w.write_record(lead.iter().chain(&tail))?;
            }
        }
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn write_csv(report: &Report, path: &Path) -> Result<()> {
    write_atomic(path, &to_csv(report)?)
}
