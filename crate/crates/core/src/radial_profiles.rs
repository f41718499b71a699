//! Closed-form radial profiles `f(r)` for the metric families.
//!
//! Every family is written as `f^2 = 1 + ε(r)`; the excess `ε` is what gets
//! evaluated, so far-field quantities built from `f^2 - 1` keep their
//! relative precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `f^2 = 1 - B/r^4`, Ricci flat.
    ClassicEh,
    /// `f^2 = 1 - 2A/r^2 - B/r^4`, zero scalar curvature.
    ZeroScalar,
    /// `f^2 = 1 + C/r^2 + A/r^4 + B r^2`, scalar curvature `-24B`.
    TypeI,
    /// `f^2 = 1 + (sqrt(1+B r^2) C + A)/r^4`, scalar curvature `-12B`.
    TypeII,
    /// `f = 1` in the hyperbolic ansatz.
    Hyperbolic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ClassicEh => "classic-eh",
            Family::ZeroScalar => "zero-scalar",
            Family::TypeI => "type-I",
            Family::TypeII => "type-II",
            Family::Hyperbolic => "hyperbolic",
        }
    }

    /// Whether the family lives in the `dr^2 / ((1 + B r^2) f^2)` ansatz.
    pub fn is_hyperbolic_ansatz(self) -> bool {
        matches!(self, Family::TypeII | Family::Hyperbolic)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `f(r)` for one family together with its domain start.
///
/// `b` is the curvature scale `B` (1/length^2); `a` and `c` are the
/// integration constants `A` and `C` of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub family: Family,
    pub b: f64,
    pub a: f64,
    pub c: f64,
    /// Largest root of `f` (0 for the hyperbolic profile).
    pub r_min: f64,
}

impl RadialProfile {
    pub fn new(family: Family, b: f64, a: f64, c: f64, r_min: f64) -> Self {
        RadialProfile {
            family,
            b,
            a,
            c,
            r_min,
        }
    }

    pub fn hyperbolic(b: f64) -> Self {
        RadialProfile::new(Family::Hyperbolic, b, 0.0, 0.0, 0.0)
    }

    pub fn classic_eh(b: f64) -> Self {
        RadialProfile::new(Family::ClassicEh, b, 0.0, 0.0, b.powf(0.25))
    }

    /// A profile whose domain start is found by bisection on `f^2`.
    ///
    /// Useful for ad-hoc `(A, C)` pairs that do not come from a smooth bolt.
    pub fn located(family: Family, b: f64, a: f64, c: f64) -> Result<Self> {
        let mut p = RadialProfile::new(family, b, a, c, 0.0);
        if family == Family::Hyperbolic {
            return Ok(p);
        }
        let hi = 1e3 * b.abs().sqrt().recip().max(1.0);
        let lo = 1e-6 * hi.min(1.0);
        let fsq = |r: f64| p.fsq_jet(r).map(|j| j.value).unwrap_or(f64::NAN);
        p.r_min = crate::numeric_kernel::bisect_largest_root(fsq, lo, hi, 1e-10)?;
        Ok(p)
    }

    /// `ε = f^2 - 1` and its first two radial derivatives.
    pub fn fsq_excess(&self, r: f64) -> Result<Jet> {
        if r == 0.0 {
            return Err(Error::SingularRadius);
        }
        let (a, b, c) = (self.a, self.b, self.c);
        let r2 = r * r;
        let r4 = r2 * r2;
        let jet = match self.family {
            Family::Hyperbolic => Jet::constant(0.0),
            Family::ClassicEh => Jet::new(-b / r4, 4.0 * b / (r4 * r), -20.0 * b / (r4 * r2)),
            Family::ZeroScalar => Jet::new(
                -2.0 * a / r2 - b / r4,
                4.0 * a / (r2 * r) + 4.0 * b / (r4 * r),
                -12.0 * a / r4 - 20.0 * b / (r4 * r2),
            ),
            Family::TypeI => Jet::new(
                c / r2 + a / r4 + b * r2,
                -2.0 * c / (r2 * r) - 4.0 * a / (r4 * r) + 2.0 * b * r,
                6.0 * c / r4 + 20.0 * a / (r4 * r2) + 2.0 * b,
            ),
            Family::TypeII => {
                // S = sqrt(1 + B r^2), S' = B r / S, S'' = B / S^3
                let s = (1.0 + b * r2).sqrt();
                let s1 = b * r / s;
                let s2 = b / (s * s * s);
                let num = s * c + a;
                Jet::new(
                    num / r4,
                    s1 * c / r4 - 4.0 * num / (r4 * r),
                    s2 * c / r4 - 8.0 * s1 * c / (r4 * r) + 20.0 * num / (r4 * r2),
                )
            }
        };
        Ok(jet)
    }

    /// `f^2` and its derivatives. Defined wherever `r != 0`, including
    /// where `f^2 < 0`.
    pub fn fsq_jet(&self, r: f64) -> Result<Jet> {
        Ok(self.fsq_excess(r)? + 1.0)
    }

    /// `f^2`, `(f^2)'` or `(f^2)''`.
    pub fn eval_fsq(&self, r: f64, derivative: u8) -> Result<f64> {
        Ok(self.fsq_jet(r)?.order(derivative))
    }

    /// Rough magnitude of the terms summed into `f^2` at `r`, used to judge
    /// when a computed `f^2` is zero up to rounding.
    pub fn fsq_scale(&self, r: f64) -> f64 {
        let r2 = r * r;
        let r4 = r2 * r2;
        let (a, b, c) = (self.a.abs(), self.b.abs(), self.c.abs());
        1.0 + match self.family {
            Family::Hyperbolic => 0.0,
            Family::ClassicEh => b / r4,
            Family::ZeroScalar => 2.0 * a / r2 + b / r4,
            Family::TypeI => c / r2 + a / r4 + b * r2,
            Family::TypeII => ((1.0 + b * r2).sqrt() * c + a) / r4,
        }
    }

    /// `f`, `f'`, `f''` with `f >= 0`.
    ///
    /// At `r = r_min` only the value is defined; derivatives there are an
    /// error because `f'` diverges at a simple root of `f^2`.
    pub fn f_jet(&self, r: f64) -> Result<Jet> {
        if self.family == Family::Hyperbolic {
            return Ok(Jet::constant(1.0));
        }
        if r < self.r_min {
            return Err(Error::OutsideDomain {
                r,
                r_min: self.r_min,
            });
        }
        let fsq = self.fsq_jet(r)?;
        let rounding = 64.0 * f64::EPSILON * self.fsq_scale(r);
        if fsq.value <= 0.0 {
            if fsq.value >= -rounding {
                return Ok(Jet::new(0.0, f64::INFINITY, f64::NAN));
            }
            return Err(Error::NegativeSquare {
                r,
                value: fsq.value,
            });
        }
        Ok(fsq.sqrt())
    }

    /// `f`, `f'` or `f''` at `r`.
    pub fn eval(&self, r: f64, derivative: u8) -> Result<f64> {
        if derivative > 0 && self.family != Family::Hyperbolic && r <= self.r_min {
            return Err(Error::OutsideDomain {
                r,
                r_min: self.r_min,
            });
        }
        let jet = self.f_jet(r)?;
        let v = jet.order(derivative);
        if !v.is_finite() {
            return Err(Error::OutsideDomain {
                r,
                r_min: self.r_min,
            });
        }
        Ok(v)
    }
}
