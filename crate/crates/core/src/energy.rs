//! Total energy of the asymptotically locally hyperbolic (type-II) metrics.
//!
//! The boundary integrand is evaluated from the exact frame components
//! `g11 = f^-2, g22 = g33 = 1, g44 = f^2` relative to the hyperbolic
//! background, then integrated over the slice `S^3(r)/Z_n` and extrapolated
//! to `r -> inf`. Everything is written in terms of `ε = f^2 - 1` so the
//! far-field terms keep full relative precision.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::numeric_kernel::{extrapolate_limit_with, fd_derivative, DecayModel, DerivOrder, Domain};
use crate::radial_profiles::RadialProfile;

/// Default relative extrapolation tolerance for [`total_energy`].
pub const DEFAULT_ENERGY_TOL: f64 = 1e-8;

/// Default outer radius, in units of the spec's length scale.
pub const DEFAULT_R_MAX_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassAspect {
    pub r: f64,
    /// `∇̆^i g_1i`
    pub div_term: f64,
    /// `∇̆_1 tr g`
    pub trace_term: f64,
    /// `sqrt(B) (a11 - g11 tr a)`
    pub algebraic_term: f64,
    /// `(div - trace - algebraic) sqrt(1 + B r^2) / sqrt(B)`
    pub integrand: f64,
}

/// Mass aspect of any profile in the hyperbolic ansatz.
pub fn mass_aspect_for_profile(profile: &RadialProfile, r: f64) -> Result<MassAspect> {
    if !profile.family.is_hyperbolic_ansatz() {
        return Err(Error::NotAlh(profile.family.name()));
    }
    if !(r > profile.r_min) {
        return Err(Error::OutsideDomain {
            r,
            r_min: profile.r_min,
        });
    }
    let (a, b, c) = (profile.a, profile.b, profile.c);
    let eps = profile.fsq_excess(r)?;
    let (e, de) = (eps.value, eps.d1);
    let s = (1.0 + b * r * r).sqrt();
    let sb = b.sqrt();
    // f^-2 - 1 = -ε/(1+ε), (f^-2)' = -ε'/(1+ε)^2
    let phi = -e / (1.0 + e);
    let d_inv = -de / ((1.0 + e) * (1.0 + e));
    let div_term = s * (d_inv + (3.0 * phi - e) / r);
    let trace_term = s * (d_inv + de);
    // a11 = φ, tr a = φ + ε = ε^2/(1+ε), g11 tr a = φ^2
    let algebraic_term = sb * (phi - phi * phi);
    // The same combination with the O(C r) pieces cancelled by hand, using
    // ε = N/r^4, -4ε/r - ε' = -N'/r^4 and s - sqrt(B) r = 1/(s + sqrt(B) r).
    let r4 = r.powi(4);
    let integrand = s * (a + c / (s + sb * r)) / r4 + 3.0 * s * s * e * e / (sb * r * (1.0 + e))
        - s * e * e * e / ((1.0 + e) * (1.0 + e));
    Ok(MassAspect {
        r,
        div_term,
        trace_term,
        algebraic_term,
        integrand,
    })
}

pub fn mass_aspect(spec: &FamilySpec, r: f64) -> Result<MassAspect> {
    mass_aspect_for_profile(&spec.profile(), r)
}

/// `Vol(S^3/Z_n)` in the measure `σ1 ∧ σ2 ∧ σ3` (the unit round `S^3`
/// has volume `2π^2`).
pub fn volume_s3_quotient(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InadmissibleN(n));
    }
    Ok(2.0 * PI * PI / n as f64)
}

/// Hawking mass at infinity, `-(5/6) (n^2 - 4)^2 / (16 B)`.
pub fn hawking_mass_cm(b: f64, n: u32) -> f64 {
    let k = (n * n) as f64 - 4.0;
    -5.0 * k * k / (96.0 * b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub spec: FamilySpec,
    pub samples: Vec<MassAspect>,
    pub volume_factor: f64,
    /// `lim (1 / 4 Vol) ∫ integrand` extrapolated from the samples.
    pub raw_limit: f64,
    pub error_estimate: f64,
    /// `(|A| + |C|) sqrt(B) / 4`, the size of the terms the limit is built
    /// from. Stays away from zero where `A` changes sign.
    pub energy_scale: f64,
    /// `error_estimate / energy_scale` (0 when the estimate is 0).
    pub relative_error: f64,
    /// `A sqrt(B)`.
    pub closed_form: f64,
    /// `raw_limit / closed_form`, absent when `closed_form = 0`.
    pub kappa: Option<f64>,
}

/// `(1 / 4 Vol) ∫_{S^3(r)/Z_n} integrand ω̆`; the integrand is constant on
/// the slice and `ω̆ = r^3 σ1 ∧ σ2 ∧ σ3`.
pub fn normalized_slice_integral(profile: &RadialProfile, n: u32, r: f64) -> Result<f64> {
    let vol = volume_s3_quotient(n)?;
    let m = mass_aspect_for_profile(profile, r)?;
    Ok(m.integrand * r.powi(3) * vol / (4.0 * vol))
}

/// Default outer radius for a spec.
pub fn default_r_max(spec: &FamilySpec) -> f64 {
    DEFAULT_R_MAX_FACTOR * spec.length_scale()
}

/// Energy report with the extrapolation error held to `tol` relative to
/// [`EnergyReport::energy_scale`].
pub fn total_energy(spec: &FamilySpec, r_max: f64, tol: f64) -> Result<EnergyReport> {
    if !spec.family.is_hyperbolic_ansatz() {
        return Err(Error::NotAlh(spec.family.name()));
    }
    let min = 100.0 * spec.length_scale();
    if !(r_max >= min) {
        return Err(Error::InvalidInput(format!(
            "r_max = {r_max} is below 100 r0 = {min}"
        )));
    }
    let (report, limit) = energy_samples(&spec.profile(), spec.n, r_max)?;
    let energy_scale = (spec.a.abs() + spec.c.abs()) * spec.b.sqrt() / 4.0;
    let relative_error = if limit.error_estimate == 0.0 {
        0.0
    } else {
        limit.error_estimate / energy_scale
    };
    if !(relative_error <= tol) {
        return Err(Error::NotConverged {
            estimate: relative_error,
            tol,
        });
    }
    let closed_form = spec.a * spec.b.sqrt();
    Ok(EnergyReport {
        spec: *spec,
        samples: report,
        volume_factor: volume_s3_quotient(spec.n)?,
        raw_limit: limit.limit,
        error_estimate: limit.error_estimate,
        energy_scale,
        relative_error,
        closed_form,
        kappa: (closed_form != 0.0).then(|| limit.limit / closed_form),
    })
}

/// Extrapolated energy of a bare profile, for `(A, C)` pairs that are not
/// tied together by a smooth bolt.
pub fn energy_limit_for_profile(profile: &RadialProfile, n: u32, r_max: f64) -> Result<f64> {
    Ok(energy_samples(profile, n, r_max)?.1.limit)
}

fn energy_samples(
    profile: &RadialProfile,
    n: u32,
    r_max: f64,
) -> Result<(Vec<MassAspect>, crate::numeric_kernel::ExtrapolationResult)> {
    let radii = [r_max / 4.0, r_max / 2.0, r_max];
    let mut samples = Vec::with_capacity(3);
    let mut points = Vec::with_capacity(3);
    for r in radii {
        samples.push(mass_aspect_for_profile(profile, r)?);
        points.push((r, normalized_slice_integral(profile, n, r)?));
    }
    // the C-term contributes an odd 1/r tail
    let limit = extrapolate_limit_with(&points, DecayModel::AllPowers)?;
    Ok((samples, limit))
}

/// Point `(y^0, ..., y^5)` of the hyperboloid `η(y, y) = -1/B` for
/// coordinates `(t, r, θ, φ, ψ)`.
pub fn ads_embedding(b: f64, x: [f64; 5]) -> [f64; 6] {
    let [t, r, theta, phi, psi] = x;
    let sb = b.sqrt();
    let s = (1.0 + b * r * r).sqrt();
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        (sb * t).cos() / sb * s,
        r * ch * ((psi + phi) / 2.0).cos(),
        r * ch * ((psi + phi) / 2.0).sin(),
        r * sh * ((psi - phi) / 2.0).cos(),
        r * sh * ((psi - phi) / 2.0).sin(),
        (sb * t).sin() / sb * s,
    ]
}

const ETA: [f64; 6] = [-1.0, 1.0, 1.0, 1.0, 1.0, -1.0];

/// `η(y, y) + 1/B`.
pub fn hyperboloid_defect(b: f64, x: [f64; 5]) -> f64 {
    let y = ads_embedding(b, x);
    y.iter().zip(ETA).map(|(v, e)| e * v * v).sum::<f64>() + 1.0 / b
}

/// Largest deviation of the pulled-back `R^{4,2}` metric from
/// `-(1+Br^2) dt^2 + dr^2/(1+Br^2) + r^2 (σ1^2 + σ2^2 + σ3^2)` at one point,
/// with the Jacobian taken by finite differences.
pub fn embedding_pullback_defect(b: f64, x: [f64; 5]) -> Result<f64> {
    let mut jac = [[0.0; 5]; 6];
    for k in 0..5 {
        for (a, row) in jac.iter_mut().enumerate() {
            let along = |s: f64| {
                let mut p = x;
                p[k] = s;
                ads_embedding(b, p)[a]
            };
            row[k] = fd_derivative(along, x[k], DerivOrder::First, Domain::REAL_LINE)?;
        }
    }
    let [_, r, theta, _, _] = x;
    let s2 = 1.0 + b * r * r;
    let q = r * r / 4.0;
    // coordinates ordered (t, r, θ, φ, ψ)
    let mut expected = [[0.0; 5]; 5];
    expected[0][0] = -s2;
    expected[1][1] = 1.0 / s2;
    expected[2][2] = q;
    expected[3][3] = q;
    expected[4][4] = q;
    expected[3][4] = q * theta.cos();
    expected[4][3] = q * theta.cos();
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let pulled: f64 = (0..6).map(|a| ETA[a] * jac[a][i] * jac[a][j]).sum();
            worst = worst.max((pulled - expected[i][j]).abs());
        }
    }
    Ok(worst)
}

/// Largest deviation of `∂_t` from `sqrt(B) U50` at one point, where
/// `U50 = y_5 ∂/∂y^0 - y_0 ∂/∂y^5` and `y_α = η_αβ y^β`.
pub fn killing_time_defect(b: f64, x: [f64; 5]) -> Result<f64> {
    let y = ads_embedding(b, x);
    let mut u50 = [0.0; 6];
    u50[0] = ETA[5] * y[5];
    u50[5] = -ETA[0] * y[0];
    let mut worst = 0.0f64;
    for a in 0..6 {
        let along = |t: f64| {
            let mut p = x;
            p[0] = t;
            ads_embedding(b, p)[a]
        };
        let dt = fd_derivative(along, x[0], DerivOrder::First, Domain::REAL_LINE)?;
        worst = worst.max((dt - b.sqrt() * u50[a]).abs());
    }
    Ok(worst)
}

/// `U50^(0) = sqrt(1 + B r^2) / sqrt(B)`, the `ĕ0` component of `U50`.
pub fn u50_time_component(b: f64, r: f64) -> f64 {
    (1.0 + b * r * r).sqrt() / b.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{hyperbolic, type1_construct, type2_construct};
    use crate::radial_profiles::Family;

    #[test]
    fn hyperbolic_integrand_vanishes() {
        let p = RadialProfile::hyperbolic(2.0);
        for r in [0.5, 3.0, 1e3] {
            let m = mass_aspect_for_profile(&p, r).unwrap();
            assert_eq!(m.integrand, 0.0);
            assert_eq!(m.div_term - m.trace_term, 0.0);
        }
    }

    #[test]
    fn assembled_exactly() {
        let spec = type2_construct(1.0, 3, 0.5).unwrap();
        let m = mass_aspect(&spec, 7.0).unwrap();
        let direct = (m.div_term - m.trace_term - m.algebraic_term) * (1.0 + 49.0f64).sqrt();
        assert!((m.integrand - direct).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn frame_component_form() {
        // compare with the displayed f^-2, f^2 expressions at moderate r
        let spec = type2_construct(1.0, 4, -2.0).unwrap();
        let p = spec.profile();
        let r = 3.0;
        let f2 = p.fsq_jet(r).unwrap();
        let s = (1.0 + r * r).sqrt();
        let dinv = -f2.d1 / (f2.value * f2.value);
        let div = s * (dinv + (3.0 / f2.value - f2.value - 2.0) / r);
        let trace = s * (dinv + f2.d1);
        let a11 = 1.0 / f2.value - 1.0;
        let tra = a11 + f2.value - 1.0;
        let alg = a11 - tra / f2.value;
        let m = mass_aspect(&spec, r).unwrap();
        assert!((m.div_term - div).abs() < 1e-13);
        assert!((m.trace_term - trace).abs() < 1e-13);
        assert!((m.algebraic_term - alg).abs() < 1e-13);
    }

    #[test]
    fn leading_a_term() {
        let spec = type2_construct(1.0, 3, 0.0).unwrap();
        let r = 100.0;
        let m = mass_aspect(&spec, r).unwrap();
        let expected = spec.a * (1.0 + r * r).sqrt() / r.powi(4);
        assert!((m.integrand / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn c_term_asymptotics() {
        // the displayed C-term carries a relative O(1/r) correction
        let spec = type2_construct(1.0, 3, 0.5).unwrap();
        let (b, c) = (spec.b, spec.c);
        let gap = |r: f64| {
            let m = mass_aspect(&spec, r).unwrap();
            let s2 = 1.0 + b * r * r;
            let a_term = spec.a * s2.sqrt() / r.powi(4);
            let c_term = b * c / (r * r * (s2 + (s2 * b * r * r).sqrt()));
            (m.integrand - a_term) / c_term - 1.0
        };
        assert!((gap(1e3) - 2.985046278888e-3).abs() < 1e-9);
        assert!(gap(1e5).abs() < 1e-4);
        assert!((1e3 * gap(1e3) / (1e4 * gap(1e4)) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn energy_of_eguchi_hanson_ads() {
        let spec = type2_construct(1.0, 3, 0.0).unwrap();
        let rep = total_energy(&spec, default_r_max(&spec), DEFAULT_ENERGY_TOL).unwrap();
        assert_eq!(rep.closed_form, -1.5625);
        assert!((rep.kappa.unwrap() - 0.25).abs() < 1e-9);
        assert!(rep.raw_limit < 0.0);
    }

    #[test]
    fn hyperbolic_energy_is_zero() {
        let spec = hyperbolic(1.0).unwrap();
        let rep = total_energy(&spec, default_r_max(&spec), DEFAULT_ENERGY_TOL).unwrap();
        assert!(rep.raw_limit.abs() < 1e-10);
        assert_eq!(rep.kappa, None);
    }

    #[test]
    fn type_one_rejected() {
        let spec = type1_construct(1.0, 3, 0.0).unwrap();
        let err = total_energy(&spec, 1e4, 1e-8).unwrap_err();
        assert_eq!(err.code(), "not-ALH");
    }

    #[test]
    fn short_r_max_rejected() {
        let spec = type2_construct(1.0, 3, 0.0).unwrap();
        assert_eq!(total_energy(&spec, 10.0, 1e-8).unwrap_err().code(), "invalid-input");
    }

    #[test]
    fn closed_form_b4_n5() {
        let spec = type2_construct(4.0, 5, 0.0).unwrap();
        let rep = total_energy(&spec, default_r_max(&spec), DEFAULT_ENERGY_TOL).unwrap();
        assert!((spec.a + 441.0 / 256.0).abs() < 1e-12);
        assert!((rep.closed_form + 441.0 / 128.0).abs() < 1e-12);
    }

    #[test]
    fn independent_of_c_at_fixed_a() {
        let base = RadialProfile::new(Family::TypeII, 1.0, -2.0, 0.0, 0.0);
        let e0 = energy_limit_for_profile(&base, 3, 1e4).unwrap();
        for c in [-1.0, 0.3, 2.0] {
            let p = RadialProfile { c, ..base };
            let e = energy_limit_for_profile(&p, 3, 1e4).unwrap();
            assert!((e - e0).abs() < 1e-7 * e0.abs(), "{e} {e0}");
        }
    }

    #[test]
    fn hawking_mass_values() {
        assert_eq!(hawking_mass_cm(1.0, 3), -125.0 / 96.0);
        assert_eq!(hawking_mass_cm(1.0, 4), -7.5);
    }

    #[test]
    fn volume_by_quadrature() {
        assert_eq!(volume_s3_quotient(1).unwrap(), 2.0 * PI * PI);
        assert_eq!(volume_s3_quotient(0).unwrap_err().code(), "inadmissible-n");
        // σ1∧σ2∧σ3 = (1/8) sinθ dθ dφ dψ, Simpson in θ
        let n = 3;
        let m = 2000;
        let h = PI / m as f64;
        let mut sum = 0.0;
        for i in 0..=m {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * (i as f64 * h).sin();
        }
        let theta = sum * h / 3.0;
        let vol = theta * 2.0 * PI * (4.0 * PI / n as f64) / 8.0;
        assert!((vol - volume_s3_quotient(n).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn ads_embedding_spot_check() {
        let x = [0.3, 1.7, 1.1, 0.4, 2.5];
        assert!(hyperboloid_defect(0.8, x).abs() < 1e-14);
        assert!(embedding_pullback_defect(0.8, x).unwrap() < 1e-8);
        assert!(killing_time_defect(0.8, x).unwrap() < 1e-8);
        assert_eq!(u50_time_component(1.0, 0.0), 1.0);
    }

    #[test]
    fn converges_where_a_changes_sign() {
        // A(C) crosses zero near C = -1162.29 for B = 0.1, n = 4
        let spec = type2_construct(0.1, 4, -1162.288209599644).unwrap();
        assert!(spec.a.abs() < 1.0);
        let rep = total_energy(&spec, default_r_max(&spec), 1e-8).unwrap();
        assert!(rep.relative_error <= 1e-8);
        assert!(rep.energy_scale > 100.0 * rep.raw_limit.abs());
        assert!((rep.kappa.unwrap() - 0.25).abs() < 1e-5);
    }
}