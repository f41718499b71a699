//! Verification suite for one constructed family member.
//!
//! Every check records the measured value next to the tolerance it was held
//! to, so reports stay self-describing.

use serde::{Deserialize, Serialize};

use crate::einstein_5d::sample_radii;
use crate::energy::{default_r_max, total_energy};
use crate::error::Result;
use crate::families::{
    bolt_cubic_relative, bolt_root_residual, further_root, smoothness_residual, FamilySpec,
};
use crate::frame_geometry::{
    curvature, scalar_ode_residual, weyl_asd_residual, BiaxialMetric, Orientation,
};
use crate::numeric_kernel::{fd_derivative_with, DerivOrder, Domain, StepRule};
use crate::radial_profiles::{Family, RadialProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Root and cubic residuals.
    pub residual: f64,
    /// Finite-difference versus closed-form derivatives of `f^2`.
    pub derivative: f64,
    /// Scalar, Ricci and Weyl identities, relative to `B`.
    pub curvature: f64,
    /// `|h(r0) - n| / n`.
    pub smoothness: f64,
    /// Finite-difference curvature oracle.
    pub oracle: f64,
    /// Bianchi and pair symmetries.
    pub symmetry: f64,
    /// Energy extrapolation error relative to `(|A| + |C|) sqrt(B) / 4`.
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            derivative: 1e-8,
            curvature: 1e-9,
            smoothness: 1e-9,
            oracle: 1e-6,
            symmetry: 1e-10,
            energy: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|value| <= tolerance`; NaN fails.
    pub fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            value,
            tolerance,
            pass: value.abs() <= tolerance,
        }
    }
}

/// Scalar curvature the family is built to have.
pub fn expected_scalar(family: Family, b: f64) -> f64 {
    match family {
        Family::TypeI => -24.0 * b,
        Family::TypeII | Family::Hyperbolic => -12.0 * b,
        Family::ZeroScalar | Family::ClassicEh => 0.0,
    }
}

/// Frame Ricci diagonal `(R11, R22, R33, R44)` in closed form, where known.
pub fn expected_ricci(spec: &FamilySpec, r: f64) -> Option<[f64; 4]> {
    let (b, r4) = (spec.b, r.powi(4));
    match spec.family {
        Family::TypeI => {
            let (lo, hi) = (-6.0 * b - 2.0 * spec.c / r4, -6.0 * b + 2.0 * spec.c / r4);
            Some([hi, lo, lo, hi])
        }
        Family::TypeII => {
            let (lo, hi) = (-3.0 * b - spec.a * b / r4, -3.0 * b + spec.a * b / r4);
            Some([lo, hi, hi, lo])
        }
        Family::Hyperbolic => Some([-3.0 * b; 4]),
        Family::ClassicEh => Some([0.0; 4]),
        Family::ZeroScalar => None,
    }
}

/// Largest relative disagreement between finite-difference and closed-form
/// `(f^2)'` and `(f^2)''` over `radii`.
pub fn fd_derivative_defect(profile: &RadialProfile, radii: &[f64]) -> Result<f64> {
    let domain = Domain::above(profile.r_min);
    let excess = |r: f64| profile.fsq_excess(r).map(|j| j.value).unwrap_or(f64::NAN);
    let mut worst = 0.0f64;
    for &r in radii {
        let exact = profile.fsq_jet(r)?;
        let d1 = fd_derivative_with(excess, r, DerivOrder::First, domain, StepRule::Balanced)?;
        let d2 = fd_derivative_with(excess, r, DerivOrder::Second, domain, StepRule::Balanced)?;
        // derivatives are compared against the size of f^2 near r
        let scale = exact.value.abs() + r * exact.d1.abs() + r * r * exact.d2.abs();
        worst = worst
            .max((d1 - exact.d1).abs() * r / scale)
            .max((d2 - exact.d2).abs() * r * r / scale);
    }
    Ok(worst)
}

/// Largest Riemann disagreement between the closed-form and
/// finite-difference metrics, relative to the curvature magnitude.
pub fn fd_curvature_defect(profile: &RadialProfile, radii: &[f64]) -> Result<f64> {
    let exact = BiaxialMetric::for_profile(profile);
    let fd = BiaxialMetric::for_profile_fd(profile);
    let mut worst = 0.0f64;
    for &r in radii {
        let a = curvature(&exact, r)?;
        let b = curvature(&fd, r)?;
        let scale = a.magnitude().max(profile.b);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        worst = worst.max((a.riemann[i][j][k][l] - b.riemann[i][j][k][l]).abs() / scale);
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Runs every check that applies to the spec's family.
pub fn verify_spec(spec: &FamilySpec, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let profile = spec.profile();
    let metric = spec.metric();
    let radii = sample_radii(spec);
    let b = spec.b;

    if spec.family != Family::Hyperbolic {
        checks.push(Check::at_most("bolt-root", bolt_root_residual(spec), tol.residual));
        checks.push(Check::at_most(
            "bolt-smoothness",
            smoothness_residual(spec) / f64::from(spec.n),
            tol.smoothness,
        ));
        let located = RadialProfile::located(spec.family, b, spec.a, spec.c)?;
        checks.push(Check::at_most(
            "bisection-r0",
            (located.r_min - spec.r0) / spec.r0,
            tol.residual,
        ));
        checks.push(Check::at_most(
            "largest-root",
            further_root(spec).unwrap_or(0.0),
            0.0,
        ));
    }
    if spec.family == Family::TypeII {
        checks.push(Check::at_most(
            "bolt-cubic",
            bolt_cubic_relative(b, spec.n, spec.c, spec.r0 * spec.r0),
            tol.residual,
        ));
    }

    let target = expected_scalar(spec.family, b);
    let mut scalar = 0.0f64;
    let mut ricci = 0.0f64;
    let mut ode = 0.0f64;
    let mut bianchi = 0.0f64;
    let mut pairs = 0.0f64;
    for &r in &radii {
        let frame = curvature(&metric, r)?;
        scalar = scalar.max((frame.scalar - target).abs() / target.abs().max(b));
        if let Some(expected) = expected_ricci(spec, r) {
            for i in 0..4 {
                ricci = ricci.max((frame.ricci_diag[i] - expected[i]).abs() / expected[i].abs().max(b));
            }
        }
        if matches!(spec.family, Family::TypeI | Family::TypeII) {
            ode = ode.max(scalar_ode_residual(spec.family, &profile, r)?.abs() / target.abs());
        }
        let magnitude = frame.magnitude().max(b);
        bianchi = bianchi.max(frame.bianchi_defect() / magnitude);
        pairs = pairs.max(frame.pair_symmetry_defect() / magnitude);
    }
    checks.push(Check::at_most("scalar-curvature", scalar, tol.curvature));
    if matches!(spec.family, Family::TypeI | Family::TypeII) {
        checks.push(Check::at_most("scalar-ode", ode, tol.curvature));
    }
    if expected_ricci(spec, radii[0]).is_some() {
        checks.push(Check::at_most("ricci-table", ricci, tol.curvature));
    }
    checks.push(Check::at_most("bianchi", bianchi, tol.symmetry));
    checks.push(Check::at_most("pair-symmetry", pairs, tol.symmetry));
    if spec.family == Family::ClassicEh {
        let mut weyl = 0.0f64;
        for &r in &radii {
            weyl = weyl.max(weyl_asd_residual(&metric, r, Orientation::Standard)?);
        }
        checks.push(Check::at_most("weyl-anti-self-dual", weyl / b, tol.curvature));
    }

    if spec.family != Family::Hyperbolic {
        let oracle_radii: Vec<f64> = radii.iter().step_by(8).copied().collect();
        checks.push(Check::at_most(
            "fd-derivative",
            fd_derivative_defect(&profile, &oracle_radii)?,
            tol.derivative,
        ));
        checks.push(Check::at_most(
            "fd-curvature",
            fd_curvature_defect(&profile, &oracle_radii)?,
            tol.oracle,
        ));
    }

    if spec.family.is_hyperbolic_ansatz() {
        match total_energy(spec, default_r_max(spec), tol.energy) {
            Ok(rep) => {
                checks.push(Check::at_most("energy-extrapolation", rep.relative_error, tol.energy));
                if spec.a < 0.0 {
                    checks.push(Check {
                        name: "energy-sign",
                        value: rep.raw_limit,
                        tolerance: 0.0,
                        pass: rep.raw_limit < 0.0,
                    });
                }
            }
            Err(e) => {
                let estimate = match e {
                    crate::Error::NotConverged { estimate, .. } => estimate,
                    _ => f64::NAN,
                };
                checks.push(Check::at_most("energy-extrapolation", estimate, tol.energy));
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        classic_eh, hyperbolic, type1_construct, type2_construct, zero_scalar_construct,
    };

    fn assert_all_pass(spec: &FamilySpec) {
        let checks = verify_spec(spec, &Tolerances::default()).unwrap();
        for c in &checks {
            assert!(c.pass, "{} failed for {:?}: {:e}", c.name, spec.family, c.value);
        }
    }

    #[test]
    fn reference_members_pass() {
        assert_all_pass(&type1_construct(1.0, 3, 0.0).unwrap());
        assert_all_pass(&type1_construct(0.1, 5, -3.0).unwrap());
        assert_all_pass(&type2_construct(1.0, 3, 0.0).unwrap());
        assert_all_pass(&type2_construct(10.0, 7, -0.5).unwrap());
        assert_all_pass(&zero_scalar_construct(1.0, 4).unwrap());
        assert_all_pass(&classic_eh(1.0).unwrap());
        assert_all_pass(&hyperbolic(2.0).unwrap());
    }

    #[test]
    fn ricci_tables() {
        let spec = type1_construct(1.0, 4, 0.1).unwrap();
        let frame = curvature(&spec.metric(), 1.3).unwrap();
        let expected = expected_ricci(&spec, 1.3).unwrap();
        for i in 0..4 {
            assert!((frame.ricci_diag[i] - expected[i]).abs() < 1e-12);
        }
        let spec = type2_construct(1.0, 4, 0.1).unwrap();
        let frame = curvature(&spec.metric(), 1.9).unwrap();
        let expected = expected_ricci(&spec, 1.9).unwrap();
        for i in 0..4 {
            assert!((frame.ricci_diag[i] - expected[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn tampered_member_fails() {
        let mut spec = type1_construct(1.0, 3, 0.0).unwrap();
        spec.r0 *= 1.01;
        let checks = verify_spec(&spec, &Tolerances::default());
        let failed = match checks {
            Ok(c) => c.iter().any(|c| !c.pass),
            Err(_) => true,
        };
        assert!(failed);
    }
}
