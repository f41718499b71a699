//! Static five-dimensional extensions `-v(r)^2 dt^2 + g` of the 4D families
//! and their vacuum Einstein residuals `R̃_ij = (2/3) Λ g̃_ij`.
//!
//! The nonexistence (type I) and uniqueness (type II) arguments both reduce
//! to two balance equations obtained from `R̃11 = R̃44` and `R̃22 = R̃44`.
//! The reports below evaluate those equations for the general lapse solving
//! the first one, and cross-check them against the frame engine.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{type1_construct, type2_construct, FamilySpec};
use crate::frame_geometry::{curvature_5d, RadialFunction};
use crate::jet::Jet;
use crate::radial_profiles::Family;

/// Number of radii in [`sample_radii`].
pub const SAMPLE_COUNT: usize = 64;

/// Lapse functions `v(r)`.
#[derive(Debug, Clone)]
pub enum Lapse {
    /// `v = (c1/2) r^2 + c2`, the general solution of the type-I radial
    /// balance equation.
    AffineInRSquared { c1: f64, c2: f64 },
    /// `v = c1 sqrt(1 + B r^2) + c2`, the general solution of the type-II
    /// radial balance equation.
    HyperbolicLapse { c1: f64, c2: f64, b: f64 },
    Custom(Arc<dyn RadialFunction>),
}

impl RadialFunction for Lapse {
    fn jet(&self, r: f64) -> Result<Jet> {
        match self {
            Lapse::AffineInRSquared { c1, c2 } => {
                Ok(Jet::new(0.5 * c1 * r * r + c2, c1 * r, *c1))
            }
            Lapse::HyperbolicLapse { c1, c2, b } => {
                let x = Jet::variable(r);
                Ok((x * x * *b + 1.0).sqrt() * *c1 + *c2)
            }
            Lapse::Custom(f) => f.jet(r),
        }
    }
}

impl Lapse {
    /// The same lapse multiplied by `lambda` (a rescaling of `t`).
    pub fn scaled(&self, lambda: f64) -> Lapse {
        match self {
            Lapse::AffineInRSquared { c1, c2 } => Lapse::AffineInRSquared {
                c1: lambda * c1,
                c2: lambda * c2,
            },
            Lapse::HyperbolicLapse { c1, c2, b } => Lapse::HyperbolicLapse {
                c1: lambda * c1,
                c2: lambda * c2,
                b: *b,
            },
            Lapse::Custom(f) => Lapse::Custom(Arc::new(Scaled(f.clone(), lambda))),
        }
    }
}

#[derive(Debug)]
struct Scaled(Arc<dyn RadialFunction>, f64);

impl RadialFunction for Scaled {
    fn jet(&self, r: f64) -> Result<Jet> {
        Ok(self.0.jet(r)? * self.1)
    }
}

#[derive(Debug, Clone)]
pub struct StaticExtension {
    pub base: FamilySpec,
    pub lapse: Lapse,
    /// Cosmological constant; `-6B` unless deliberately perturbed.
    pub lambda: f64,
}

impl StaticExtension {
    pub fn new(base: FamilySpec, lapse: Lapse) -> Self {
        StaticExtension {
            lambda: -6.0 * base.b,
            base,
            lapse,
        }
    }

    /// `(R̃00 + (2/3)Λ, R̃ii - (2/3)Λ)` at one radius.
    pub fn defects(&self, r: f64) -> Result<[f64; 5]> {
        let ric = curvature_5d(&self.base.metric(), &self.lapse, r)?;
        let target = 2.0 / 3.0 * self.lambda;
        let mut out = [0.0; 5];
        out[0] = ric[0] + target;
        for i in 1..5 {
            out[i] = ric[i] - target;
        }
        Ok(out)
    }
}

/// 64 log-spaced radii on `[1.05 L, 100 L]`, `L` the spec's length scale.
pub fn sample_radii(spec: &FamilySpec) -> Vec<f64> {
    let l = spec.length_scale();
    let (lo, hi) = ((1.05 * l).ln(), (100.0 * l).ln());
    (0..SAMPLE_COUNT)
        .map(|i| (lo + (hi - lo) * i as f64 / (SAMPLE_COUNT - 1) as f64).exp())
        .collect()
}

/// Max-norm Einstein residual over `radii` in the orthonormal frame.
pub fn einstein_residual(ext: &StaticExtension, radii: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in radii {
        for d in ext.defects(r)? {
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

fn r00_samples(ext: &StaticExtension, radii: &[f64]) -> Result<Vec<f64>> {
    let metric = ext.base.metric();
    radii
        .iter()
        .map(|&r| Ok(curvature_5d(&metric, &ext.lapse, r)?[0]))
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Type-I static extension with `v = (c1/2) r^2 + c2`.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub spec: FamilySpec,
    pub c1: f64,
    pub c2: f64,
    pub radii: Vec<f64>,
    /// `f^2 v'' - (f^2/r) v'` (from `R̃11 = R̃44`).
    pub radial_balance: Vec<f64>,
    /// `(f f') v' - (4C/r^4) v` (from `R̃22 = R̃44`).
    pub angular_balance: Vec<f64>,
    /// Coefficients of `r^2, r^-2, r^-4` in the angular balance for this
    /// lapse: `(c1 B, -3 C c1, -(2 A c1 + 4 C c2))`.
    pub angular_coefficients: [f64; 3],
    /// Largest disagreement between the balances and the frame-engine
    /// differences `v (R̃44 - R̃11)`, `v (R̃22 - R̃44)`.
    pub frame_mismatch: f64,
    pub r00: Vec<f64>,
    /// `R̃00` the vacuum equations demand, `-(2/3)Λ = 4B`.
    pub required_r00: f64,
    pub einstein_residual: f64,
}

impl ObstructionReport {
    pub fn max_radial_balance(&self) -> f64 {
        max_abs(&self.radial_balance)
    }

    pub fn max_angular_balance(&self) -> f64 {
        max_abs(&self.angular_balance)
    }

    /// Both balance equations hold at every sampled radius.
    pub fn constraints_hold(&self, tol: f64) -> bool {
        self.max_radial_balance() <= tol && self.max_angular_balance() <= tol
    }

    /// The angular balance vanishes identically only if every coefficient
    /// does; with `B > 0` the leading one forces `c1 = 0`.
    pub fn forces_constant_lapse(&self) -> bool {
        self.angular_coefficients.iter().all(|c| *c == 0.0) && self.c1 == 0.0
    }

    /// Constraints hold, yet `R̃00` vanishes where `4B` is required.
    pub fn contradiction(&self, tol: f64) -> bool {
        self.constraints_hold(tol)
            && max_abs(&self.r00) <= tol
            && (self.einstein_residual - self.required_r00).abs() <= tol * self.required_r00
    }
}

pub fn type1_obstruction_report(b: f64, n: u32, c: f64, c1: f64, c2: f64) -> Result<ObstructionReport> {
    let spec = type1_construct(b, n, c)?;
    let ext = StaticExtension::new(spec, Lapse::AffineInRSquared { c1, c2 });
    let radii = sample_radii(&spec);
    let profile = spec.profile();
    let metric = spec.metric();
    let mut radial = Vec::with_capacity(radii.len());
    let mut angular = Vec::with_capacity(radii.len());
    let mut mismatch = 0.0f64;
    for &r in &radii {
        let v = ext.lapse.jet(r)?;
        let fsq = profile.fsq_jet(r)?;
        let half_dfsq = -c / r.powi(3) - 2.0 * spec.a / r.powi(5) + b * r;
        let rb = fsq.value * v.d2 - fsq.value / r * v.d1;
        let ab = half_dfsq * v.d1 - 4.0 * c / r.powi(4) * v.value;
        let ric = curvature_5d(&metric, &ext.lapse, r)?;
        let scale = 1.0 + rb.abs() + ab.abs() + v.value.abs() * (b + c.abs() / r.powi(4));
        mismatch = mismatch
            .max((v.value * (ric[4] - ric[1]) - rb).abs() / scale)
            .max((v.value * (ric[2] - ric[4]) - ab).abs() / scale);
        radial.push(rb);
        angular.push(ab);
    }
    let r00 = r00_samples(&ext, &radii)?;
    let residual = einstein_residual(&ext, &radii)?;
    Ok(ObstructionReport {
        spec,
        c1,
        c2,
        radii,
        radial_balance: radial,
        angular_balance: angular,
        angular_coefficients: [c1 * b, -3.0 * c * c1, -(2.0 * spec.a * c1 + 4.0 * c * c2)],
        frame_mismatch: mismatch,
        r00,
        required_r00: 4.0 * b,
        einstein_residual: residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessBranch {
    /// Constraint vanishes with `C = 0, c2 = 0`: the Eguchi-Hanson-AdS lapse.
    HyperbolicLapse,
    /// Constraint vanishes with `A = 0, c1 = 0`: constant lapse, `R̃00 = 0`.
    ConstantLapse,
    /// Constraint is nonzero somewhere.
    Violated,
}

/// Type-II static extension with `v = c1 sqrt(1 + B r^2) + c2`.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub spec: FamilySpec,
    pub c1: f64,
    pub c2: f64,
    pub radii: Vec<f64>,
    /// `h^2 v'' - (h^2/r + f' h^2/f - h' h) v'` with `h = sqrt(1 + B r^2) f`.
    pub radial_balance: Vec<f64>,
    /// `C (4 + 3 B r^2) c1 - 4 A c2`.
    pub constraint: Vec<f64>,
    /// Largest disagreement with the frame engine:
    /// `v (R̃11 - R̃44) = -radial_balance`,
    /// `v (R̃22 - R̃44) = -(B / 2r^4) constraint`.
    pub frame_mismatch: f64,
    pub r00: Vec<f64>,
    pub einstein_residual: f64,
    pub branch: UniquenessBranch,
}

impl UniquenessReport {
    pub fn max_radial_balance(&self) -> f64 {
        max_abs(&self.radial_balance)
    }

    pub fn max_constraint(&self) -> f64 {
        max_abs(&self.constraint)
    }
}

pub fn type2_uniqueness_report(b: f64, n: u32, c: f64, c1: f64, c2: f64) -> Result<UniquenessReport> {
    let spec = type2_construct(b, n, c)?;
    uniqueness_for(spec, c1, c2)
}

/// [`type2_uniqueness_report`] for an already constructed type-II member.
pub fn uniqueness_for(spec: FamilySpec, c1: f64, c2: f64) -> Result<UniquenessReport> {
    if spec.family != Family::TypeII {
        return Err(Error::InvalidInput(format!(
            "uniqueness report needs a type-II spec, got {}",
            spec.family
        )));
    }
    let (b, c, a) = (spec.b, spec.c, spec.a);
    let ext = StaticExtension::new(spec, Lapse::HyperbolicLapse { c1, c2, b });
    let radii = sample_radii(&spec);
    let metric = spec.metric();
    let profile = spec.profile();
    let mut radial = Vec::with_capacity(radii.len());
    let mut constraint = Vec::with_capacity(radii.len());
    let mut mismatch = 0.0f64;
    for &r in &radii {
        let v = ext.lapse.jet(r)?;
        let h = metric.radial.jet(r)?;
        let f = profile.f_jet(r)?;
        let h2 = h.value * h.value;
        let rb = h2 * v.d2 - (h2 / r + f.d1 * h2 / f.value - h.d1 * h.value) * v.d1;
        let k = c * (4.0 + 3.0 * b * r * r) * c1 - 4.0 * a * c2;
        let ric = curvature_5d(&metric, &ext.lapse, r)?;
        let angular = -b / (2.0 * r.powi(4)) * k;
        let scale = 1.0 + rb.abs() + angular.abs() + v.value.abs() * b;
        mismatch = mismatch
            .max((v.value * (ric[1] - ric[4]) + rb).abs() / scale)
            .max((v.value * (ric[2] - ric[4]) - angular).abs() / scale);
        radial.push(rb);
        constraint.push(k);
    }
    // A and C carry units of r0^4
    let r04 = spec.r0.powi(4);
    let scale = (c1.abs() * (c.abs() + r04) * (4.0 + 3.0 * b * radii[radii.len() - 1].powi(2))
        + 4.0 * c2.abs() * (a.abs() + r04))
        .max(f64::MIN_POSITIVE);
    let vanishes = max_abs(&constraint) <= 1e-12 * scale || max_abs(&constraint) == 0.0;
    let branch = match (vanishes, c1 == 0.0) {
        (false, _) => UniquenessBranch::Violated,
        (true, false) => UniquenessBranch::HyperbolicLapse,
        (true, true) => UniquenessBranch::ConstantLapse,
    };
    Ok(UniquenessReport {
        spec,
        c1,
        c2,
        r00: r00_samples(&ext, &radii)?,
        einstein_residual: einstein_residual(&ext, &radii)?,
        radii,
        radial_balance: radial,
        constraint,
        frame_mismatch: mismatch,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::hyperbolic;

    #[test]
    fn eguchi_hanson_ads_is_vacuum() {
        let spec = type2_construct(1.0, 3, 0.0).unwrap();
        let ext = StaticExtension::new(spec, Lapse::HyperbolicLapse { c1: 1.0, c2: 0.0, b: 1.0 });
        assert!(einstein_residual(&ext, &sample_radii(&spec)).unwrap() < 1e-9);
    }

    #[test]
    fn product_lapse_misses_r00() {
        let spec = type2_construct(1.0, 3, 0.0).unwrap();
        let ext = StaticExtension::new(spec, Lapse::AffineInRSquared { c1: 0.0, c2: 1.0 });
        let res = einstein_residual(&ext, &sample_radii(&spec)).unwrap();
        assert!((res - 4.0).abs() < 1e-9, "{res}");
    }

    #[test]
    fn ads5() {
        let spec = hyperbolic(0.7).unwrap();
        let ext = StaticExtension::new(spec, Lapse::HyperbolicLapse { c1: 1.0, c2: 0.0, b: 0.7 });
        assert!(einstein_residual(&ext, &sample_radii(&spec)).unwrap() < 1e-9);
    }

    #[test]
    fn type_one_constant_lapse_contradiction() {
        let rep = type1_obstruction_report(1.0, 3, 0.0, 0.0, 1.0).unwrap();
        assert!(rep.constraints_hold(1e-12));
        assert!(rep.contradiction(1e-9));
        assert!(rep.forces_constant_lapse());
        assert!((rep.einstein_residual - 4.0).abs() < 1e-9);
    }

    #[test]
    fn type_one_quadratic_lapse() {
        let rep = type1_obstruction_report(1.0, 3, 0.05, 1.0, 0.0).unwrap();
        assert!(rep.max_radial_balance() < 1e-9);
        assert!(rep.max_angular_balance() > 1e-3);
        assert!(rep.frame_mismatch < 1e-12, "{}", rep.frame_mismatch);
        assert!(!rep.contradiction(1e-9));
        // the polynomial form reproduces the sampled balance
        for (r, ab) in rep.radii.iter().zip(&rep.angular_balance) {
            let [k2, km2, km4] = rep.angular_coefficients;
            let poly = k2 * r * r + km2 / (r * r) + km4 / r.powi(4);
            assert!((poly - ab).abs() <= 1e-10 * (1.0 + ab.abs()));
        }
    }

    #[test]
    fn type_two_branches() {
        let rep = type2_uniqueness_report(1.0, 3, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(rep.branch, UniquenessBranch::HyperbolicLapse);
        assert!(rep.einstein_residual < 1e-9);
        assert!(rep.max_radial_balance() < 1e-9);

        let rep = type2_uniqueness_report(1.0, 3, 0.0, 1.0, 0.1).unwrap();
        assert_eq!(rep.branch, UniquenessBranch::Violated);
        for k in &rep.constraint {
            assert!((k - 0.625).abs() < 1e-14);
        }

        let rep = type2_uniqueness_report(1.0, 3, 0.5, 1.0, 0.0).unwrap();
        assert_eq!(rep.branch, UniquenessBranch::Violated);
        assert!(rep.frame_mismatch < 1e-12, "{}", rep.frame_mismatch);
        // C (4 + 3 B r^2) at r = 2
        let r = 2.0;
        assert_eq!(0.5 * (4.0 + 3.0 * r * r), 8.0);
    }

    #[test]
    fn time_rescaling_invariance() {
        let spec = type2_construct(1.0, 4, 0.3).unwrap();
        let lapse = Lapse::HyperbolicLapse { c1: 1.0, c2: 0.2, b: 1.0 };
        let a = StaticExtension::new(spec, lapse.clone());
        let b = StaticExtension::new(spec, lapse.scaled(3.7));
        for r in sample_radii(&spec) {
            let (da, db) = (a.defects(r).unwrap(), b.defects(r).unwrap());
            for k in 0..5 {
                assert!((da[k] - db[k]).abs() <= 1e-10 * (1.0 + da[k].abs()));
            }
        }
    }
}
