//! Parameter admissibility, closed-form bolt radius `r0` and constant `A`,
//! and bolt smoothness for every family.
//!
//! Smoothness at the bolt `r = r0` (where the σ3 fiber collapses) holds when
//! the collapse rate `h(r0) = u (r f)'|_{r0}` equals `n` and ψ has period
//! `4π/n`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame_geometry::BiaxialMetric;
use crate::numeric_kernel::{
    cardano_real_root, discriminant, trigonometric_roots, DEFAULT_RESIDUAL_TOL,
};
use crate::radial_profiles::{Family, RadialProfile};

/// Tolerance on `h(r0) - n` accepted by the constructors.
pub const SMOOTHNESS_TOL: f64 = 1e-9;
/// Grid points used to confirm `r0` is the largest root of `f`.
const LARGEST_ROOT_SCAN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    /// Type II, `C < C1` or `C > C4`: one real root, Cardano's formula.
    CaseCardano,
    /// Type II, `C1 <= C <= C2`: three real roots, cosine formula.
    CaseTrig,
    /// Families with an explicit `r0`.
    ClosedForm,
    #[serde(rename = "inadmissible-C")]
    Inadmissible,
}

impl Admissibility {
    pub fn code(self) -> &'static str {
        match self {
            Admissibility::CaseCardano => "case-cardano",
            Admissibility::CaseTrig => "case-trig",
            Admissibility::ClosedForm => "closed-form",
            Admissibility::Inadmissible => "inadmissible-C",
        }
    }
}

/// A fully determined member of one family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub b: f64,
    pub n: u32,
    pub c: f64,
    pub a: f64,
    pub r0: f64,
    pub admissibility: Admissibility,
    pub psi_period: f64,
}

impl FamilySpec {
    pub fn profile(&self) -> RadialProfile {
        RadialProfile::new(self.family, self.b, self.a, self.c, self.r0)
    }

    pub fn metric(&self) -> BiaxialMetric {
        BiaxialMetric::for_profile(&self.profile())
    }

    /// Bolt collapse rate `h(r)` in the family's closed form.
    pub fn bolt_rate(&self, r: f64) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let r2 = r * r;
        let r4 = r2 * r2;
        match self.family {
            Family::TypeI => 1.0 - a / r4 + 2.0 * b * r2,
            Family::TypeII => (1.0 + b * r2).sqrt() * (1.0 - a / r4) - c / r4 - b * c / (2.0 * r2),
            Family::ZeroScalar | Family::ClassicEh => 1.0 + b / r4,
            Family::Hyperbolic => 1.0,
        }
    }

    /// Length scale used for radial grids: `r0`, or `B^-1/2` without a bolt.
    pub fn length_scale(&self) -> f64 {
        if self.r0 > 0.0 {
            self.r0
        } else {
            self.b.sqrt().recip()
        }
    }

    /// Upper end of the region searched for further roots of `f`.
    pub fn far_radius(&self) -> f64 {
        1e3 * self.b.sqrt().recip().max(1.0)
    }
}

/// Discriminant bookkeeping of the type-II bolt cubic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeIIConstants {
    /// Roots of `Δ(C) = 0` besides the double root `C = 0`.
    pub c1: f64,
    pub c2: f64,
    /// Roots of `q(C) = 0`, with the `(n^2 - 4)` factor.
    pub c3: f64,
    pub c4: f64,
    /// The same expressions with an `(n^4 - 4)` factor, kept for comparison.
    pub c3_quartic_factor: f64,
    pub c4_quartic_factor: f64,
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    /// `Δ` from its expanded polynomial in `C`.
    pub delta_expanded: f64,
}

fn check_common(b: f64, n: u32, min_n: u32) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidInput(format!("B must be positive, got {b}")));
    }
    if n < min_n {
        return Err(Error::InadmissibleN(n));
    }
    Ok(())
}

pub fn type1_c_bound(b: f64, n: u32) -> f64 {
    let k = f64::from(n) - 2.0;
    k * k / (12.0 * b)
}

/// Closed-form type-I member without verification.
pub fn type1_candidate(b: f64, n: u32, c: f64) -> Result<FamilySpec> {
    check_common(b, n, 3)?;
    let bound = type1_c_bound(b, n);
    if !(c <= bound) {
        return Err(Error::InadmissibleC { c, bound });
    }
    let nf = f64::from(n);
    let root = ((nf - 2.0).powi(2) - 12.0 * b * c).max(0.0).sqrt();
    let r0sq = (nf - 2.0 + root) / (6.0 * b);
    let a = (1.0 - 2.0 * nf + root) / 3.0 * r0sq * r0sq;
    Ok(FamilySpec {
        family: Family::TypeI,
        b,
        n,
        c,
        a,
        r0: r0sq.sqrt(),
        admissibility: Admissibility::ClosedForm,
        psi_period: 4.0 * PI / nf,
    })
}

/// Type-I member with `f(r0) = 0`, `h(r0) = n` and largest-root checks.
pub fn type1_construct(b: f64, n: u32, c: f64) -> Result<FamilySpec> {
    let spec = type1_candidate(b, n, c)?;
    verify(&spec)?;
    Ok(spec)
}

pub fn type2_constants(b: f64, n: u32, c: f64) -> TypeIIConstants {
    let nf = f64::from(n);
    let k = nf * nf - 4.0;
    let b2 = b * b;
    let p = (-k * k + 12.0 * nf * b2 * c) / (48.0 * b2);
    let q = (-k * k * k + 18.0 * nf * k * b2 * c - 54.0 * b2 * b2 * c * c) / (864.0 * b2 * b);
    let delta_expanded = (27.0 * b2 * b2 * c.powi(4)
        - 2.0 * b2 * c.powi(3) * nf * (nf * nf - 36.0)
        - 4.0 * k * k * c * c)
        / (27648.0 * b2);
    let s12 = (nf * nf + 12.0).powf(1.5);
    let s24 = (3.0 * nf * nf + 24.0).sqrt();
    let k4 = nf.powi(4) - 4.0;
    TypeIIConstants {
        c1: (nf.powi(3) - 36.0 * nf - s12) / (27.0 * b2),
        c2: (nf.powi(3) - 36.0 * nf + s12) / (27.0 * b2),
        c3: k * (3.0 * nf - s24) / (18.0 * b2),
        c4: k * (3.0 * nf + s24) / (18.0 * b2),
        c3_quartic_factor: k4 * (3.0 * nf - s24) / (18.0 * b2),
        c4_quartic_factor: k4 * (3.0 * nf + s24) / (18.0 * b2),
        p,
        q,
        delta: discriminant(p, q),
        delta_expanded,
    }
}

/// Branch classification of the type-II admissible set
/// `C <= C2` or `C > C4`.
pub fn type2_admissibility(b: f64, n: u32, c: f64) -> Admissibility {
    if b <= 0.0 || n < 3 || !c.is_finite() {
        return Admissibility::Inadmissible;
    }
    let k = type2_constants(b, n, c);
    if c > k.c4 || c < k.c1 {
        Admissibility::CaseCardano
    } else if c <= k.c2 {
        Admissibility::CaseTrig
    } else {
        Admissibility::Inadmissible
    }
}

/// `x^3 + (4 - n^2)/(4B) x^2 + (nC/4) x - B C^2 / 16` for `x = r0^2`.
pub fn bolt_cubic(b: f64, n: u32, c: f64, x: f64) -> f64 {
    let nf = f64::from(n);
    x * x * x + (4.0 - nf * nf) / (4.0 * b) * x * x + nf * c / 4.0 * x - b * c * c / 16.0
}

/// [`bolt_cubic`] divided by the sum of the magnitudes of its terms.
pub fn bolt_cubic_relative(b: f64, n: u32, c: f64, x: f64) -> f64 {
    let nf = f64::from(n);
    let scale = (x * x * x).abs()
        + ((4.0 - nf * nf) / (4.0 * b) * x * x).abs()
        + (nf * c / 4.0 * x).abs()
        + (b * c * c / 16.0).abs();
    bolt_cubic(b, n, c, x) / scale
}

/// Closed-form type-II member without verification.
///
/// The branch (Cardano or cosine) follows the `C` classification, not the
/// sign of the floating-point discriminant, so boundary values stay on the
/// branch the admissible set assigns them to.
pub fn type2_candidate(b: f64, n: u32, c: f64) -> Result<FamilySpec> {
    check_common(b, n, 3)?;
    let admissibility = type2_admissibility(b, n, c);
    let consts = type2_constants(b, n, c);
    let t = match admissibility {
        Admissibility::CaseCardano => cardano_real_root(consts.p, consts.q),
        Admissibility::CaseTrig => {
            if consts.p >= 0.0 {
                // only at C = 0 with p = q = 0, which needs n = 2
                cardano_real_root(consts.p, consts.q)
            } else {
                trigonometric_roots(consts.p, consts.q)?[0]
            }
        }
        _ => {
            return Err(Error::InadmissibleC {
                c,
                bound: consts.c2,
            })
        }
    };
    let nf = f64::from(n);
    let x = t + (nf * nf - 4.0) / (12.0 * b);
    if !(x > 0.0) {
        return Err(Error::NoPositiveRoot(x));
    }
    let r0 = x.sqrt();
    let a = -x * x - (1.0 + b * x).sqrt() * c;
    Ok(FamilySpec {
        family: Family::TypeII,
        b,
        n,
        c,
        a,
        r0,
        admissibility,
        psi_period: 4.0 * PI / nf,
    })
}

/// Type-II member with bolt-cubic, `f(r0) = 0`, `h(r0) = n` and largest-root
/// checks.
pub fn type2_construct(b: f64, n: u32, c: f64) -> Result<FamilySpec> {
    let spec = type2_candidate(b, n, c)?;
    let x = spec.r0 * spec.r0;
    let cubic = bolt_cubic_relative(b, n, c, x);
    if cubic.abs() > DEFAULT_RESIDUAL_TOL {
        return Err(Error::InvalidInput(format!(
            "bolt cubic residual {cubic:e} at r0^2 = {x}"
        )));
    }
    verify(&spec)?;
    Ok(spec)
}

pub fn zero_scalar_construct(b: f64, n: u32) -> Result<FamilySpec> {
    check_common(b, n, 2)?;
    let nf = f64::from(n);
    let ratio = b / (nf - 1.0);
    Ok(FamilySpec {
        family: Family::ZeroScalar,
        b,
        n,
        c: 0.0,
        a: -(nf - 2.0) / 2.0 * ratio.sqrt(),
        r0: ratio.powf(0.25),
        admissibility: Admissibility::ClosedForm,
        psi_period: 4.0 * PI / nf,
    })
}

/// The Ricci-flat metric `f^2 = 1 - B/r^4`, ψ of period 2π.
pub fn classic_eh(b: f64) -> Result<FamilySpec> {
    check_common(b, 2, 2)?;
    Ok(FamilySpec {
        family: Family::ClassicEh,
        b,
        n: 2,
        c: 0.0,
        a: 0.0,
        r0: b.powf(0.25),
        admissibility: Admissibility::ClosedForm,
        psi_period: 2.0 * PI,
    })
}

/// Hyperbolic space of curvature `-B` written in the type-II ansatz.
pub fn hyperbolic(b: f64) -> Result<FamilySpec> {
    check_common(b, 1, 1)?;
    Ok(FamilySpec {
        family: Family::Hyperbolic,
        b,
        n: 1,
        c: 0.0,
        a: 0.0,
        r0: 0.0,
        admissibility: Admissibility::ClosedForm,
        psi_period: 4.0 * PI,
    })
}

/// Any family by name; parameters a family does not use are ignored.
pub fn construct(family: Family, b: f64, n: u32, c: f64) -> Result<FamilySpec> {
    match family {
        Family::TypeI => type1_construct(b, n, c),
        Family::TypeII => type2_construct(b, n, c),
        Family::ZeroScalar => zero_scalar_construct(b, n),
        Family::ClassicEh => classic_eh(b),
        Family::Hyperbolic => hyperbolic(b),
    }
}

/// Admissibility class of `(B, n, C)` before construction.
pub fn admissibility(family: Family, b: f64, n: u32, c: f64) -> Admissibility {
    match family {
        Family::TypeII => type2_admissibility(b, n, c),
        Family::TypeI if !(b > 0.0 && n >= 3 && c <= type1_c_bound(b, n)) => {
            Admissibility::Inadmissible
        }
        _ => Admissibility::ClosedForm,
    }
}

/// `h(r0) - n`.
pub fn smoothness_residual(spec: &FamilySpec) -> f64 {
    spec.bolt_rate(spec.r0) - f64::from(spec.n)
}

/// `f^2(r0)` relative to the magnitude of its terms.
pub fn bolt_root_residual(spec: &FamilySpec) -> f64 {
    let p = spec.profile();
    match p.fsq_jet(spec.r0) {
        Ok(j) => j.value / p.fsq_scale(spec.r0),
        Err(_) => f64::NAN,
    }
}

/// First radius beyond `r0` (on a log grid up to [`FamilySpec::far_radius`])
/// where `f^2 <= 0`, if any.
pub fn further_root(spec: &FamilySpec) -> Option<f64> {
    if spec.r0 <= 0.0 {
        return None;
    }
    let p = spec.profile();
    let lo = spec.r0 * (1.0 + 1e-6);
    let hi = spec.far_radius().max(10.0 * lo);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..LARGEST_ROOT_SCAN)
        .map(|i| (llo + (lhi - llo) * i as f64 / (LARGEST_ROOT_SCAN - 1) as f64).exp())
        .find(|&r| p.fsq_jet(r).map(|j| j.value <= 0.0).unwrap_or(true))
}

fn verify(spec: &FamilySpec) -> Result<()> {
    let root = bolt_root_residual(spec);
    if !(root.abs() <= DEFAULT_RESIDUAL_TOL) {
        return Err(Error::InvalidInput(format!(
            "f^2(r0) = {root:e} relative to its terms"
        )));
    }
    let residual = smoothness_residual(spec);
    if !(residual.abs() <= SMOOTHNESS_TOL * f64::from(spec.n)) {
        return Err(Error::SmoothnessViolated { residual });
    }
    if let Some(r) = further_root(spec) {
        return Err(Error::NotLargestRoot { r });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_one_reference_member() {
        let s = type1_construct(1.0, 3, 0.0).unwrap();
        assert!((s.r0 - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.a + 4.0 / 27.0).abs() < 1e-15);
        assert!(smoothness_residual(&s).abs() < 1e-14);
    }

    #[test]
    fn type_one_at_the_bound() {
        let s = type1_construct(1.0, 3, 1.0 / 12.0).unwrap();
        assert!((s.r0 - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((s.a + 5.0 / 108.0).abs() < 1e-15);
        assert!(bolt_root_residual(&s).abs() < 1e-15);
    }

    #[test]
    fn type_one_above_the_bound() {
        let err = type1_construct(1.0, 4, 1.0).unwrap_err();
        assert_eq!(err.code(), "inadmissible-C");
        assert_eq!(type1_construct(1.0, 2, 0.0).unwrap_err().code(), "inadmissible-n");
    }

    #[test]
    fn discriminant_roots_and_identity() {
        let k = type2_constants(1.0, 3, 0.0);
        let c2 = (27.0 - 108.0 + 21.0 * 21f64.sqrt()) / 27.0;
        assert!((k.c2 - c2).abs() < 1e-15);
        assert!((k.c2 - 0.56423).abs() < 1e-5);
        for n in 3..=12u32 {
            let n2 = u64::from(n * n);
            let lhs = n2 * (n2 as i64 - 36).pow(2) as u64 + 108 * (n2 - 4).pow(2);
            assert_eq!(lhs, (n2 + 12).pow(3));
        }
        assert!(type2_constants(1.0, 3, k.c3).q.abs() < 1e-12);
        assert!(type2_constants(1.0, 3, k.c4).q.abs() < 1e-12);
        assert!(k.c1 < k.c3 && k.c3 < k.c2 && k.c2 < k.c4);
    }

    #[test]
    fn zero_c_type2_member() {
        let s = type2_construct(1.0, 3, 0.0).unwrap();
        assert!((s.r0 * s.r0 - 1.25).abs() < 1e-14);
        assert!((s.a + 1.5625).abs() < 1e-14);
        assert_eq!(s.admissibility, Admissibility::CaseTrig);
        assert!(smoothness_residual(&s).abs() < 1e-14);
    }

    #[test]
    fn trig_branch_member() {
        let s = type2_construct(1.0, 3, 0.5).unwrap();
        assert_eq!(s.admissibility, Admissibility::CaseTrig);
        assert!(smoothness_residual(&s).abs() < 1e-12);
        let oracle = crate::numeric_kernel::bisect_largest_root(
            |r| s.profile().eval_fsq(r, 0).unwrap(),
            0.1,
            3.0,
            1e-12,
        )
        .unwrap();
        assert!((oracle - s.r0).abs() < 1e-12);
    }

    #[test]
    fn gap_is_rejected() {
        assert_eq!(type2_construct(1.0, 3, 1.0).unwrap_err().code(), "inadmissible-C");
        let k = type2_constants(1.0, 3, 0.0);
        assert_eq!(type2_admissibility(1.0, 3, k.c2), Admissibility::CaseTrig);
        assert_eq!(type2_admissibility(1.0, 3, k.c4), Admissibility::Inadmissible);
    }

    #[test]
    fn cardano_branch_above_c4_fails_smoothness() {
        let k = type2_constants(1.0, 3, 0.0);
        let c = 2.0 * k.c4;
        let cand = type2_candidate(1.0, 3, c).unwrap();
        assert_eq!(cand.admissibility, Admissibility::CaseCardano);
        assert!(bolt_cubic_relative(1.0, 3, c, cand.r0 * cand.r0).abs() < 1e-12);
        assert!(smoothness_residual(&cand) > 1.0);
        assert_eq!(type2_construct(1.0, 3, c).unwrap_err().code(), "smoothness-violated");
    }

    #[test]
    fn zero_scalar_members() {
        let s = zero_scalar_construct(1.0, 2).unwrap();
        assert_eq!((s.a, s.r0), (0.0, 1.0));
        let s = zero_scalar_construct(4.0, 5).unwrap();
        assert!((s.a + 1.5).abs() < 1e-15);
        assert!((s.r0 - 1.0).abs() < 1e-15);
        assert!(bolt_root_residual(&s).abs() < 1e-15);
        assert!(smoothness_residual(&s).abs() < 1e-14);
        assert_eq!(zero_scalar_construct(1.0, 1).unwrap_err().code(), "inadmissible-n");
    }

    #[test]
    fn corrupted_a_breaks_smoothness() {
        for mut s in [type1_construct(1.0, 3, 0.0).unwrap(), type2_construct(1.0, 3, 0.0).unwrap()] {
            s.a += 1e-3;
            assert!(smoothness_residual(&s).abs() > 1e-4);
        }
    }
}
