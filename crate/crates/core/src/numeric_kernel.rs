//! Scalar numerical primitives: depressed cubics, bracketed root finding,
//! finite differences and limit extrapolation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default residual tolerance for cubic roots and root finding.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
/// Default relative tolerance for finite-difference derivatives.
pub const DEFAULT_DERIVATIVE_TOL: f64 = 1e-8;

/// Number of grid points used to bracket roots.
const SCAN_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicBranchKind {
    /// Positive discriminant: one real root from Cardano's formula.
    CardanoReal,
    /// Non-positive discriminant: three real roots from the cosine formula.
    Trigonometric,
}

/// Real roots of `t^3 + p t + q = 0` and the branch that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicBranch {
    pub discriminant: f64,
    pub branch: CubicBranchKind,
    /// Descending, multiplicity preserved.
    pub roots: Vec<f64>,
}

impl CubicBranch {
    pub fn largest(&self) -> f64 {
        self.roots[0]
    }
}

/// `p^3/27 + q^2/4`.
pub fn discriminant(p: f64, q: f64) -> f64 {
    p * p * p / 27.0 + q * q / 4.0
}

pub fn cubic_value(p: f64, q: f64, t: f64) -> f64 {
    (t * t + p) * t + q
}

/// Magnitude scale of the terms of the cubic at `t`; residuals are judged
/// against `tol * cubic_scale`.
pub fn cubic_scale(p: f64, q: f64, t: f64) -> f64 {
    1.0 + t.abs().powi(3) + (p * t).abs() + q.abs()
}

fn polish(p: f64, q: f64, mut t: f64) -> f64 {
    for _ in 0..3 {
        let fx = cubic_value(p, q, t);
        let dfx = 3.0 * t * t + p;
        if fx == 0.0 || dfx == 0.0 {
            break;
        }
        let next = t - fx / dfx;
        if !next.is_finite() || cubic_value(p, q, next).abs() >= fx.abs() {
            break;
        }
        t = next;
    }
    t
}

/// The single real root of a depressed cubic with positive discriminant.
///
/// Uses the cancellation-free pairing of the two cube roots (`u v = -p/3`).
pub fn cardano_real_root(p: f64, q: f64) -> f64 {
    let s = discriminant(p, q).max(0.0).sqrt();
    let a = if q > 0.0 { -0.5 * q - s } else { -0.5 * q + s };
    if a == 0.0 {
        return 0.0;
    }
    let u = a.cbrt();
    let v = -p / (3.0 * u);
    polish(p, q, u + v)
}

/// Three real roots of a depressed cubic with `p <= 0`, descending.
///
/// The cosine argument is clamped to `[-1, 1]` so that `Δ = 0` (double
/// roots) and slightly positive rounding noise stay on this branch.
pub fn trigonometric_roots(p: f64, q: f64) -> Result<[f64; 3]> {
    if p == 0.0 {
        if q == 0.0 {
            return Ok([0.0; 3]);
        }
        return Err(Error::InvalidInput(format!(
            "trigonometric branch needs p < 0 (p = 0, q = {q})"
        )));
    }
    if p > 0.0 {
        return Err(Error::InvalidInput(format!(
            "trigonometric branch needs p < 0 (p = {p})"
        )));
    }
    let root = (-3.0 * p).sqrt();
    let arg = (-3.0 * q * root / (2.0 * p * p)).clamp(-1.0, 1.0);
    let alpha = arg.acos();
    let m = 2.0 * root / 3.0;
    let mut roots = [0.0; 3];
    for (k, slot) in roots.iter_mut().enumerate() {
        *slot = polish(p, q, m * ((alpha - 2.0 * PI * k as f64) / 3.0).cos());
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Solves `t^3 + p t + q = 0`, branching on the sign of the discriminant.
///
/// `Δ = 0` goes to the trigonometric branch. Every returned root is checked
/// against `tol * cubic_scale(p, q, t)`.
pub fn solve_depressed_cubic(p: f64, q: f64, tol: f64) -> Result<CubicBranch> {
    if !p.is_finite() || !q.is_finite() || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "cubic coefficients must be finite and tol positive (p={p}, q={q}, tol={tol})"
        )));
    }
    let disc = discriminant(p, q);
    let (branch, roots) = if disc > 0.0 {
        (CubicBranchKind::CardanoReal, vec![cardano_real_root(p, q)])
    } else {
        (CubicBranchKind::Trigonometric, trigonometric_roots(p, q)?.to_vec())
    };
    for &t in &roots {
        let residual = cubic_value(p, q, t).abs();
        if residual > tol * cubic_scale(p, q, t) {
            return Err(Error::CubicResidual { root: t, residual });
        }
    }
    Ok(CubicBranch {
        discriminant: disc,
        branch,
        roots,
    })
}

fn scan_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    if lo > 0.0 {
        let (llo, lhi) = (lo.ln(), hi.ln());
        (0..points)
            .map(|i| match i {
                0 => lo,
                i if i == points - 1 => hi,
                i => (llo + (lhi - llo) * i as f64 / last).exp(),
            })
            .collect()
    } else {
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / last)
            .collect()
    }
}

/// Largest root of `f` on `[lo, hi]`.
///
/// A grid (logarithmic when `lo > 0`) is scanned downward from `hi`; the
/// first sign change found is refined by bisection down to adjacent floats.
pub fn bisect_largest_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}]")));
    }
    let grid = scan_grid(lo, hi, SCAN_POINTS);
    let mut upper = hi;
    let mut f_upper = f(hi);
    if f_upper == 0.0 {
        return Ok(hi);
    }
    let mut bracket = None;
    for &x in grid.iter().rev().skip(1) {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() != f_upper.signum() {
            bracket = Some((x, fx, upper));
            break;
        }
        upper = x;
        f_upper = fx;
    }
    let (mut a, mut fa, mut b) = bracket.ok_or(Error::NoRoot { lo, hi })?;
    let mut fb = f(b);
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let (root, value) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    if value.abs() > tol {
        return Err(Error::RootNotConverged { value, tol });
    }
    Ok(root)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// Open interval a function may be sampled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn above(lo: f64) -> Self {
        Domain {
            lo,
            hi: f64::INFINITY,
        }
    }
}

/// How the base step of [`fd_derivative_with`] is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// `eps^(1/3)` and `eps^(1/4)` relative steps. Small enough for
    /// functions with a singularity close by, such as `f` near its root.
    Conservative,
    /// `eps^(1/5)` and `eps^(1/6)`, balancing the O(h^4) truncation of the
    /// Richardson step against rounding, relative to `|r|`. For functions
    /// analytic on a neighbourhood of size comparable to `|r|`.
    Balanced,
}

/// Base step for a central difference at `r`.
pub fn fd_step(r: f64, order: DerivOrder, rule: StepRule) -> f64 {
    let scale = match rule {
        StepRule::Conservative => r.abs().max(1.0),
        StepRule::Balanced if r != 0.0 => r.abs(),
        StepRule::Balanced => 1.0,
    };
    let power = match (rule, order) {
        (StepRule::Conservative, DerivOrder::First) => 1.0 / 3.0,
        (StepRule::Conservative, DerivOrder::Second) => 0.25,
        (StepRule::Balanced, DerivOrder::First) => 0.2,
        (StepRule::Balanced, DerivOrder::Second) => 1.0 / 6.0,
    };
    f64::EPSILON.powf(power) * scale
}

/// Central-difference derivative with one Richardson step (`h` and `2h`),
/// using [`StepRule::Conservative`].
///
/// Fails when the widest stencil point `r ± 2h` leaves `domain`.
pub fn fd_derivative<F>(f: F, r: f64, order: DerivOrder, domain: Domain) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    fd_derivative_with(f, r, order, domain, StepRule::Conservative)
}

pub fn fd_derivative_with<F>(f: F, r: f64, order: DerivOrder, domain: Domain, rule: StepRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let h = fd_step(r, order, rule);
    if r - 2.0 * h <= domain.lo {
        return Err(Error::TooCloseToBoundary {
            r,
            boundary: domain.lo,
        });
    }
    if r + 2.0 * h >= domain.hi {
        return Err(Error::TooCloseToBoundary {
            r,
            boundary: domain.hi,
        });
    }
    let estimate = |h: f64| match order {
        DerivOrder::First => (f(r + h) - f(r - h)) / (2.0 * h),
        DerivOrder::Second => (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h),
    };
    let fine = estimate(h);
    let coarse = estimate(2.0 * h);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// How the sampled values approach their limit as `x -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayModel {
    /// `L + c1/x^2 + c2/x^4 + ...`
    EvenPowers,
    /// `L + c1/x + c2/x^2 + ...`
    AllPowers,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtrapolationResult {
    pub limit: f64,
    pub error_estimate: f64,
    pub samples_used: usize,
}

/// Extrapolates samples `(x, value)` to `x -> inf` under the even-power model.
pub fn extrapolate_limit(samples: &[(f64, f64)]) -> Result<ExtrapolationResult> {
    extrapolate_limit_with(samples, DecayModel::EvenPowers)
}

/// Neville extrapolation to `h = 0` with `h = x^-2` or `h = x^-1`.
///
/// The error estimate is the size of the last correction in the tableau.
pub fn extrapolate_limit_with(
    samples: &[(f64, f64)],
    model: DecayModel,
) -> Result<ExtrapolationResult> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples(samples.len()));
    }
    if samples
        .windows(2)
        .any(|w| !(w[1].0 > w[0].0) || w[0].0 <= 0.0)
    {
        return Err(Error::InvalidInput(
            "extrapolation samples need strictly increasing positive x".into(),
        ));
    }
    if samples.iter().any(|s| !s.1.is_finite()) {
        return Err(Error::InvalidInput("non-finite sample value".into()));
    }
    let h: Vec<f64> = samples
        .iter()
        .map(|&(x, _)| match model {
            DecayModel::EvenPowers => 1.0 / (x * x),
            DecayModel::AllPowers => 1.0 / x,
        })
        .collect();
    let n = samples.len();
    let mut row: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut previous_diagonal = row[n - 1];
    // After level k, row[i] holds the polynomial through samples i-k..=i.
    for k in 1..n {
        previous_diagonal = row[n - 1];
        for i in (k..n).rev() {
            row[i] = row[i] + (row[i] - row[i - 1]) * h[i] / (h[i - k] - h[i]);
        }
    }
    let limit = row[n - 1];
    if !limit.is_finite() {
        return Err(Error::InvalidInput("extrapolated limit is not finite".into()));
    }
    Ok(ExtrapolationResult {
        limit,
        error_estimate: (limit - previous_diagonal).abs(),
        samples_used: n,
    })
}
