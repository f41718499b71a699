//! Orthonormal-frame curvature of the biaxial ansatz
//!
//! ```text
//! g = u(r)^-2 dr^2 + b(r)^2 (σ1^2 + σ2^2) + c(r)^2 σ3^2,   dσ1 = 2 σ2∧σ3 (cyclic)
//! ```
//!
//! with coframe `e1 = dr/u, e2 = b σ1, e3 = b σ2, e4 = c σ3`, and of its
//! static extension `-v^2 dt^2 + g`.
//!
//! The engine is generic: it forms the structure functions of the coframe
//! (`de^i = ½ s^i_jk e^j∧e^k`), solves for the Levi-Civita connection with
//! the Koszul formula, and evaluates `R^i_j = dω^i_j + ω^i_k∧ω^k_j`. Indices
//! are 0-based in code: frame leg `e1` is index 0, `e4` is index 3.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numeric_kernel::{fd_derivative, DerivOrder, Domain};
use crate::radial_profiles::{Family, RadialProfile};

pub type Tensor3 = [[[f64; 4]; 4]; 4];
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

/// A function of the radius with its first two derivatives.
pub trait RadialFunction: Send + Sync + fmt::Debug {
    fn jet(&self, r: f64) -> Result<Jet>;
}

impl RadialFunction for RadialProfile {
    fn jet(&self, r: f64) -> Result<Jet> {
        self.f_jet(r)
    }
}

/// `r` itself.
#[derive(Debug, Clone, Copy)]
pub struct Radius;

impl RadialFunction for Radius {
    fn jet(&self, r: f64) -> Result<Jet> {
        Ok(Jet::variable(r))
    }
}

/// `sqrt(1 + B r^2)`.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicFactor {
    pub b: f64,
}

impl RadialFunction for HyperbolicFactor {
    fn jet(&self, r: f64) -> Result<Jet> {
        let x = Jet::variable(r);
        Ok((x * x * self.b + 1.0).sqrt())
    }
}

#[derive(Debug, Clone)]
pub struct Product(pub Arc<dyn RadialFunction>, pub Arc<dyn RadialFunction>);

impl RadialFunction for Product {
    fn jet(&self, r: f64) -> Result<Jet> {
        Ok(self.0.jet(r)? * self.1.jet(r)?)
    }
}

/// Wraps a radial function and replaces its derivatives by central
/// differences of its values. Serves as the oracle for closed-form
/// derivatives.
#[derive(Debug, Clone)]
pub struct FiniteDifferenced {
    pub inner: Arc<dyn RadialFunction>,
    pub domain: Domain,
}

impl RadialFunction for FiniteDifferenced {
    fn jet(&self, r: f64) -> Result<Jet> {
        let value = |x: f64| self.inner.jet(x).map(|j| j.value).unwrap_or(f64::NAN);
        Ok(Jet::new(
            self.inner.jet(r)?.value,
            fd_derivative(value, r, DerivOrder::First, self.domain)?,
            fd_derivative(value, r, DerivOrder::Second, self.domain)?,
        ))
    }
}

/// Which radial coefficient multiplies `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ansatz {
    /// `f^-2 dr^2 + r^2 (σ1^2 + σ2^2 + f^2 σ3^2)`
    Euclidean,
    /// `dr^2 / ((1 + B r^2) f^2) + r^2 (σ1^2 + σ2^2 + f^2 σ3^2)`
    Hyperbolic,
}

#[derive(Debug, Clone)]
pub struct BiaxialMetric {
    /// `u`, with `e1 = dr / u`.
    pub radial: Arc<dyn RadialFunction>,
    /// `b`, the size of the σ1, σ2 directions.
    pub base: Arc<dyn RadialFunction>,
    /// `c`, the size of the σ3 fiber.
    pub fiber: Arc<dyn RadialFunction>,
    pub domain_start: f64,
}

/// Radial functions `u, b, c` evaluated at one radius.
#[derive(Debug, Clone, Copy)]
pub struct FrameJets {
    pub u: Jet,
    pub b: Jet,
    pub c: Jet,
}

impl BiaxialMetric {
    pub fn new(
        radial: Arc<dyn RadialFunction>,
        base: Arc<dyn RadialFunction>,
        fiber: Arc<dyn RadialFunction>,
        domain_start: f64,
    ) -> Self {
        BiaxialMetric {
            radial,
            base,
            fiber,
            domain_start,
        }
    }

    /// Builds `u, b = r, c = r f` from a source of `f` and an ansatz.
    pub fn from_f(
        f: Arc<dyn RadialFunction>,
        ansatz: Ansatz,
        curvature_scale: f64,
        domain_start: f64,
    ) -> Self {
        let radial: Arc<dyn RadialFunction> = match ansatz {
            Ansatz::Euclidean => f.clone(),
            Ansatz::Hyperbolic => Arc::new(Product(
                Arc::new(HyperbolicFactor { b: curvature_scale }),
                f.clone(),
            )),
        };
        BiaxialMetric::new(
            radial,
            Arc::new(Radius),
            Arc::new(Product(Arc::new(Radius), f)),
            domain_start,
        )
    }

    /// The ansatz each family is stated in.
    pub fn for_profile(profile: &RadialProfile) -> Self {
        let ansatz = if profile.family.is_hyperbolic_ansatz() {
            Ansatz::Hyperbolic
        } else {
            Ansatz::Euclidean
        };
        BiaxialMetric::from_f(Arc::new(*profile), ansatz, profile.b, profile.r_min)
    }

    /// Same metric with `f'` and `f''` taken by finite differences.
    pub fn for_profile_fd(profile: &RadialProfile) -> Self {
        let ansatz = if profile.family.is_hyperbolic_ansatz() {
            Ansatz::Hyperbolic
        } else {
            Ansatz::Euclidean
        };
        let fd = FiniteDifferenced {
            inner: Arc::new(*profile),
            domain: Domain::above(profile.r_min),
        };
        BiaxialMetric::from_f(Arc::new(fd), ansatz, profile.b, profile.r_min)
    }

    /// The hyperbolic metric of sectional curvature `-B`.
    pub fn hyperbolic(b: f64) -> Self {
        BiaxialMetric::for_profile(&RadialProfile::hyperbolic(b))
    }

    pub fn jets(&self, r: f64) -> Result<FrameJets> {
        if !(r > self.domain_start) {
            return Err(Error::OutsideDomain {
                r,
                r_min: self.domain_start,
            });
        }
        let jets = FrameJets {
            u: self.radial.jet(r)?,
            b: self.base.jet(r)?,
            c: self.fiber.jet(r)?,
        };
        if !(jets.u.is_finite() && jets.b.is_finite() && jets.c.is_finite()) {
            return Err(Error::OutsideDomain {
                r,
                r_min: self.domain_start,
            });
        }
        Ok(jets)
    }
}

/// Coefficients of the six independent connection forms on their frame legs:
/// `ω21 = w21 e2, ω31 = w31 e3, ω41 = w41 e4, ω34 = w34 e2, ω42 = w42 e3,
/// ω23 = w23 e4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Connection {
    pub w21: f64,
    pub w31: f64,
    pub w41: f64,
    pub w34: f64,
    pub w42: f64,
    pub w23: f64,
}

/// Structure functions `s[i][j][k]` (antisymmetric in `j, k`) and their
/// radial derivatives.
fn structure(j: &FrameJets) -> (Tensor3, Tensor3) {
    let FrameJets { u, b, c } = *j;
    // α = u b'/b, γ = u c'/c, β = 2/c, κ = 2c/b^2
    let alpha = u.value * b.d1 / b.value;
    let alpha_d = u.d1 * b.d1 / b.value + u.value * b.d2 / b.value
        - u.value * b.d1 * b.d1 / (b.value * b.value);
    let gamma = u.value * c.d1 / c.value;
    let gamma_d = u.d1 * c.d1 / c.value + u.value * c.d2 / c.value
        - u.value * c.d1 * c.d1 / (c.value * c.value);
    let beta = 2.0 / c.value;
    let beta_d = -2.0 * c.d1 / (c.value * c.value);
    let kappa = 2.0 * c.value / (b.value * b.value);
    let kappa_d = 2.0 * c.d1 / (b.value * b.value) - 4.0 * c.value * b.d1 / b.value.powi(3);

    let mut s = [[[0.0; 4]; 4]; 4];
    let mut ds = [[[0.0; 4]; 4]; 4];
    let mut set = |i: usize, j: usize, k: usize, v: f64, dv: f64| {
        s[i][j][k] = v;
        s[i][k][j] = -v;
        ds[i][j][k] = dv;
        ds[i][k][j] = -dv;
    };
    set(1, 0, 1, alpha, alpha_d);
    set(1, 2, 3, beta, beta_d);
    set(2, 0, 2, alpha, alpha_d);
    set(2, 3, 1, beta, beta_d);
    set(3, 0, 3, gamma, gamma_d);
    set(3, 1, 2, kappa, kappa_d);
    (s, ds)
}

/// Koszul formula for an orthonormal frame: `Γ_ijk = ω_ij(e_k)`.
fn koszul(s: &Tensor3) -> Tensor3 {
    let mut g = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                g[i][j][k] = 0.5 * (s[i][j][k] + s[j][k][i] - s[k][i][j]);
            }
        }
    }
    g
}

/// Connection coefficients `Γ_ijk = ω_ij(e_k)` and their `r`-derivatives.
pub fn connection_tensor(metric: &BiaxialMetric, r: f64) -> Result<(Tensor3, Tensor3, FrameJets)> {
    let jets = metric.jets(r)?;
    let (s, ds) = structure(&jets);
    Ok((koszul(&s), koszul(&ds), jets))
}

/// Structure functions of the coframe, `de^i = ½ s^i_jk e^j∧e^k`.
pub fn structure_functions(metric: &BiaxialMetric, r: f64) -> Result<Tensor3> {
    Ok(structure(&metric.jets(r)?).0)
}

pub fn connection(metric: &BiaxialMetric, r: f64) -> Result<Connection> {
    let (g, _, _) = connection_tensor(metric, r)?;
    Ok(connection_from(&g))
}

fn connection_from(g: &Tensor3) -> Connection {
    Connection {
        w21: g[1][0][1],
        w31: g[2][0][2],
        w41: g[3][0][3],
        w34: g[2][3][1],
        w42: g[3][1][2],
        w23: g[1][2][3],
    }
}

/// Curvature of the metric at one radius, orthonormal frame.
///
/// `riemann[i][j][k][l] = R^i_jkl` with `R^i_j = ½ R^i_jkl e^k∧e^l`;
/// sectional curvatures are `K_ij = R_ijij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureFrame {
    pub r: f64,
    pub connection: Connection,
    pub riemann: Tensor4,
    pub ricci: [[f64; 4]; 4],
    pub ricci_diag: [f64; 4],
    pub scalar: f64,
    /// `K_12, K_13, K_14, K_23, K_24, K_34`.
    pub sectional: [f64; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl CurvatureFrame {
    /// `K_ij` for 0-based frame indices `i != j`.
    pub fn sectional_curvature(&self, i: usize, j: usize) -> f64 {
        self.riemann[i][j][i][j]
    }

    /// Largest absolute Riemann component, used as a scale for tolerances.
    pub fn magnitude(&self) -> f64 {
        self.riemann
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest violation of the first Bianchi identity `R_i[jkl] = 0`.
    pub fn bianchi_defect(&self) -> f64 {
        let r = &self.riemann;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let cyc = r[i][j][k][l] + r[i][k][l][j] + r[i][l][j][k];
                        worst = worst.max(cyc.abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of `R_ijkl = R_klij`.
    pub fn pair_symmetry_defect(&self) -> f64 {
        let r = &self.riemann;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        worst = worst.max((r[i][j][k][l] - r[k][l][i][j]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Weyl tensor from the 4D decomposition.
    pub fn weyl(&self) -> Tensor4 {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let ric = &self.ricci;
        let s = self.scalar;
        let mut w = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let ricci_part = d(i, k) * ric[j][l] - d(i, l) * ric[j][k]
                            - d(j, k) * ric[i][l]
                            + d(j, l) * ric[i][k];
                        let scalar_part = d(i, k) * d(j, l) - d(i, l) * d(j, k);
                        w[i][j][k][l] =
                            self.riemann[i][j][k][l] - 0.5 * ricci_part + s / 6.0 * scalar_part;
                    }
                }
            }
        }
        w
    }

    /// Frobenius norms of the self-dual and anti-self-dual Weyl blocks in the
    /// orientation `e1∧e2∧e3∧e4`.
    pub fn weyl_dual_norms(&self) -> WeylParts {
        let w = self.weyl();
        let block = |sign: f64| {
            let forms = dual_basis(sign);
            let mut norm2 = 0.0;
            for fa in &forms {
                for fb in &forms {
                    let mut acc = 0.0;
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                for l in 0..4 {
                                    acc += w[i][j][k][l] * fa[i][j] * fb[k][l];
                                }
                            }
                        }
                    }
                    let entry = 0.25 * acc;
                    norm2 += entry * entry;
                }
            }
            norm2.sqrt()
        };
        WeylParts {
            self_dual: block(1.0),
            anti_self_dual: block(-1.0),
        }
    }
}

/// Unit-norm basis of (anti-)self-dual 2-forms as antisymmetric matrices:
/// `e12 ± e34, e13 ± e42, e14 ± e23`.
fn dual_basis(sign: f64) -> [[[f64; 4]; 4]; 3] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut forms = [[[0.0; 4]; 4]; 3];
    let pairs = [((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))];
    for (f, &((a, b), (c, d))) in forms.iter_mut().zip(pairs.iter()) {
        f[a][b] = h;
        f[b][a] = -h;
        f[c][d] = sign * h;
        f[d][c] = -sign * h;
    }
    forms
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylParts {
    pub self_dual: f64,
    pub anti_self_dual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `e1∧e2∧e3∧e4`
    #[default]
    Standard,
    Reversed,
}

pub fn curvature(metric: &BiaxialMetric, r: f64) -> Result<CurvatureFrame> {
    let (g, dg, jets) = connection_tensor(metric, r)?;
    let (s, _) = structure(&jets);
    let u = jets.u.value;
    let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut v = 0.0;
                    // d(Γ_ijm) ∧ e^m, with dr = u e1
                    if k == 0 {
                        v += u * dg[i][j][l];
                    }
                    if l == 0 {
                        v -= u * dg[i][j][k];
                    }
                    for m in 0..4 {
                        v += g[i][j][m] * s[m][k][l];
                        v += g[i][m][k] * g[m][j][l] - g[i][m][l] * g[m][j][k];
                    }
                    riemann[i][j][k][l] = v;
                }
            }
        }
    }
    let mut ricci = [[0.0; 4]; 4];
    for j in 0..4 {
        for l in 0..4 {
            ricci[j][l] = (0..4).map(|i| riemann[i][j][i][l]).sum();
        }
    }
    let ricci_diag = [ricci[0][0], ricci[1][1], ricci[2][2], ricci[3][3]];
    let scalar = ricci_diag.iter().sum();
    let sectional = PAIRS.map(|(i, j)| riemann[i][j][i][j]);
    Ok(CurvatureFrame {
        r,
        connection: connection_from(&g),
        riemann,
        ricci,
        ricci_diag,
        scalar,
        sectional,
    })
}

/// Scalar-curvature ODE in `f^2`, minus its stated constant.
///
/// Type I: `-(f^2)'' - (7/r)(f^2)' - (8/r^2)(f^2 - 1) + 24B`.
/// Type II: `-((1+Br^2)(f^2)'' + (7/r + 8Br)(f^2)' + (8/r^2 + 12B) f^2 - 8/r^2) + 12B`.
pub fn scalar_ode_residual(family: Family, profile: &RadialProfile, r: f64) -> Result<f64> {
    let fsq = profile.fsq_jet(r)?;
    let b = profile.b;
    match family {
        Family::TypeI => {
            let excess = profile.fsq_excess(r)?.value;
            Ok(-fsq.d2 - 7.0 / r * fsq.d1 - 8.0 / (r * r) * excess + 24.0 * b)
        }
        Family::TypeII => Ok(-((1.0 + b * r * r) * fsq.d2
            + (7.0 / r + 8.0 * b * r) * fsq.d1
            + (8.0 / (r * r) + 12.0 * b) * fsq.value
            - 8.0 / (r * r))
            + 12.0 * b),
        other => Err(Error::InvalidInput(format!(
            "no scalar-curvature ODE for the {other} family"
        ))),
    }
}

/// Norm of the Weyl part that must vanish for the metric to be anti-self-dual
/// in the given orientation (the self-dual block for `Standard`).
pub fn weyl_asd_residual(metric: &BiaxialMetric, r: f64, orientation: Orientation) -> Result<f64> {
    let parts = curvature(metric, r)?.weyl_dual_norms();
    Ok(match orientation {
        Orientation::Standard => parts.self_dual,
        Orientation::Reversed => parts.anti_self_dual,
    })
}

/// `(R̃00, R̃11, R̃22, R̃33, R̃44)` of `-v^2 dt^2 + g` in the frame
/// `e0 = v dt, e1..e4`.
pub fn curvature_5d(metric: &BiaxialMetric, lapse: &dyn RadialFunction, r: f64) -> Result<[f64; 5]> {
    let v = lapse.jet(r)?;
    if !(v.value > 0.0) {
        return Err(Error::DegenerateLapse { r, value: v.value });
    }
    let frame = curvature(metric, r)?;
    let FrameJets { u, b, c } = metric.jets(r)?;
    // R̃^0_i0i for i = 1..4
    let mixed = [
        -(u.value * u.value * v.d2 + u.value * u.d1 * v.d1) / v.value,
        -u.value * u.value * v.d1 * b.d1 / (b.value * v.value),
        -u.value * u.value * v.d1 * b.d1 / (b.value * v.value),
        -u.value * u.value * v.d1 * c.d1 / (c.value * v.value),
    ];
    let mut out = [0.0; 5];
    out[0] = -mixed.iter().sum::<f64>();
    for i in 0..4 {
        out[i + 1] = frame.ricci_diag[i] + mixed[i];
    }
    Ok(out)
}
