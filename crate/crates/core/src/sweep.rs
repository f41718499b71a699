//! Batch evaluation over `(B, n, C)` grids and random spec batches.
//!
//! Specs are independent, so evaluation is a data-parallel map. With the
//! `parallel` feature the map runs on a rayon pool; without it (or with
//! [`Execution::Sequential`]) it runs in order on the calling thread. Either
//! way results come back in input order.

use serde::Serialize;

use crate::checks::{expected_scalar, Tolerances};
use crate::einstein_5d::sample_radii;
use crate::energy::{default_r_max, total_energy};
use crate::error::{Error, Result};
use crate::families::{admissibility, construct, smoothness_residual, FamilySpec};
use crate::frame_geometry::curvature;
use crate::radial_profiles::Family;

/// Largest grid accepted by [`run_sweep`] unless overridden.
pub const DEFAULT_MAX_SPECS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `workers = 0` uses the rayon default (one per core).
    Parallel { workers: usize },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { workers: 0 }
        } else {
            Execution::Sequential
        }
    }
}

/// `items.map(f)` in input order, parallel when requested and compiled in.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel { workers } => parallel_map(items, workers, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if workers == 0 {
        return items.par_iter().map(&f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.par_iter().map(&f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], _workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Cartesian grid, iterated with `B` outermost and `C` innermost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub family: Family,
    pub b: Vec<f64>,
    pub n: Vec<u32>,
    pub c: Vec<f64>,
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.b.len().saturating_mul(self.n.len()).saturating_mul(self.c.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<(f64, u32, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &b in &self.b {
            for &n in &self.n {
                for &c in &self.c {
                    out.push((b, n, c));
                }
            }
        }
        out
    }
}

/// `count` evenly spaced values on `[lo, hi]`, endpoints exact (just `lo`
/// when `count = 1`).
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let mut v: Vec<f64> = (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect();
            v[count - 1] = hi;
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "B")]
    pub b: f64,
    pub n: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub admissibility: &'static str,
    pub r0: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    /// Largest `|scalar - expected| / max(|expected|, B)` over the sample radii.
    pub scalar_residual: Option<f64>,
    /// `(h(r0) - n) / n`.
    pub h_residual: Option<f64>,
    #[serde(rename = "E_raw")]
    pub e_raw: Option<f64>,
    pub kappa: Option<f64>,
    /// `A sqrt(B)`.
    #[serde(rename = "E_paper")]
    pub e_paper: Option<f64>,
    /// `ok`, `check-failed`, or the error code that stopped the evaluation.
    pub status: &'static str,
}

impl SweepRow {
    /// Rows that are neither passing nor a correctly flagged gap point.
    pub fn is_failure(&self) -> bool {
        !matches!(self.status, "ok" | "inadmissible-C")
    }
}

/// Scalar residual on every fourth sample radius.
fn scalar_residual(spec: &FamilySpec) -> Result<f64> {
    let metric = spec.metric();
    let target = expected_scalar(spec.family, spec.b);
    let mut worst = 0.0f64;
    for r in sample_radii(spec).into_iter().step_by(4) {
        let s = curvature(&metric, r)?.scalar;
        worst = worst.max((s - target).abs() / target.abs().max(spec.b));
    }
    Ok(worst)
}

pub fn evaluate(family: Family, b: f64, n: u32, c: f64, tol: &Tolerances) -> SweepRow {
    let mut row = SweepRow {
        b,
        n,
        c,
        admissibility: admissibility(family, b, n, c).code(),
        r0: None,
        a: None,
        scalar_residual: None,
        h_residual: None,
        e_raw: None,
        kappa: None,
        e_paper: None,
        status: "ok",
    };
    let spec = match construct(family, b, n, c) {
        Ok(s) => s,
        Err(e) => {
            row.status = e.code();
            return row;
        }
    };
    row.r0 = Some(spec.r0);
    row.a = Some(spec.a);
    if family != Family::Hyperbolic {
        row.h_residual = Some(smoothness_residual(&spec) / f64::from(spec.n));
    }
    match scalar_residual(&spec) {
        Ok(s) => {
            row.scalar_residual = Some(s);
            if !(s <= tol.curvature) {
                row.status = "check-failed";
            }
        }
        Err(e) => {
            row.status = e.code();
            return row;
        }
    }
    if family.is_hyperbolic_ansatz() {
        row.e_paper = Some(spec.a * spec.b.sqrt());
        match total_energy(&spec, default_r_max(&spec), tol.energy) {
            Ok(rep) => {
                row.e_raw = Some(rep.raw_limit);
                row.kappa = rep.kappa;
            }
            Err(e) => row.status = e.code(),
        }
    }
    row
}

/// Evaluates every grid point; rows follow [`SweepGrid::points`] order
/// whatever the execution mode.
pub fn run_sweep(grid: &SweepGrid, tol: &Tolerances, exec: Execution, cap: usize) -> Result<Vec<SweepRow>> {
    if grid.b.is_empty() {
        return Err(Error::EmptyRange("B"));
    }
    if grid.n.is_empty() {
        return Err(Error::EmptyRange("n"));
    }
    if grid.c.is_empty() {
        return Err(Error::EmptyRange("C"));
    }
    if grid.len() > cap {
        return Err(Error::CapExceeded {
            size: grid.len(),
            cap,
        });
    }
    let points = grid.points();
    Ok(map_ordered(&points, exec, |&(b, n, c)| {
        evaluate(grid.family, b, n, c, tol)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::type2_constants;

    #[test]
    fn order_is_lexicographic() {
        let grid = SweepGrid {
            family: Family::TypeI,
            b: vec![1.0, 2.0],
            n: vec![3, 4],
            c: vec![-1.0, 0.0, 0.01],
        };
        let p = grid.points();
        assert_eq!(p.len(), 12);
        assert_eq!(p[0], (1.0, 3, -1.0));
        assert_eq!(p[1], (1.0, 3, 0.0));
        assert_eq!(p[3], (1.0, 4, -1.0));
        assert_eq!(p[11], (2.0, 4, 0.01));
    }

    #[test]
    fn parallel_matches_sequential() {
        let k = type2_constants(1.0, 3, 0.0);
        let grid = SweepGrid {
            family: Family::TypeII,
            b: vec![1.0],
            n: vec![3, 4],
            c: linspace(k.c1 - 1.0, k.c4 + 1.0, 9),
        };
        let tol = Tolerances::default();
        let seq = run_sweep(&grid, &tol, Execution::Sequential, DEFAULT_MAX_SPECS).unwrap();
        let par = run_sweep(&grid, &tol, Execution::Parallel { workers: 3 }, DEFAULT_MAX_SPECS).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn gap_rows_flagged() {
        let k = type2_constants(1.0, 3, 0.0);
        let row = evaluate(Family::TypeII, 1.0, 3, 0.5 * (k.c2 + k.c4), &Tolerances::default());
        assert_eq!(row.admissibility, "inadmissible-C");
        assert_eq!(row.status, "inadmissible-C");
        assert!(!row.is_failure());
        let row = evaluate(Family::TypeII, 1.0, 3, 0.0, &Tolerances::default());
        assert_eq!(row.status, "ok");
        assert!((row.kappa.unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn range_errors() {
        let mut grid = SweepGrid {
            family: Family::TypeI,
            b: vec![1.0],
            n: vec![],
            c: vec![0.0],
        };
        let tol = Tolerances::default();
        assert_eq!(
            run_sweep(&grid, &tol, Execution::Sequential, 10).unwrap_err().code(),
            "empty-range"
        );
        grid.n = vec![3, 4, 5];
        grid.c = linspace(-1.0, 0.0, 4);
        assert_eq!(
            run_sweep(&grid, &tol, Execution::Sequential, 10).unwrap_err().code(),
            "cap-exceeded"
        );
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
