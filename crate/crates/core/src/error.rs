use thiserror::Error;

/// Failures raised anywhere in the library.
///
/// Every variant maps to a stable kebab-case code (see [`Error::code`]) that
/// the report writers emit verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no sign change of the function on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("root search did not reach |f| <= {tol} (best {value:e})")]
    RootNotConverged { value: f64, tol: f64 },
    #[error("stencil around r = {r} crosses the domain boundary {boundary}")]
    TooCloseToBoundary { r: f64, boundary: f64 },
    #[error("extrapolation needs at least 3 samples, got {0}")]
    InsufficientSamples(usize),
    #[error("cubic root {root} has residual {residual:e}, above tolerance")]
    CubicResidual { root: f64, residual: f64 },
    #[error("radius {r} is outside the domain [{r_min}, inf)")]
    OutsideDomain { r: f64, r_min: f64 },
    #[error("f^2 = {value:e} < 0 at r = {r}")]
    NegativeSquare { r: f64, value: f64 },
    #[error("radius 0 is singular")]
    SingularRadius,
    #[error("C = {c} is outside the admissible set (bound {bound})")]
    InadmissibleC { c: f64, bound: f64 },
    #[error("n = {0} is outside the admissible range")]
    InadmissibleN(u32),
    #[error("the shifted cubic root {0} is not positive")]
    NoPositiveRoot(f64),
    #[error("bolt smoothness fails: h(r0) - n = {residual:e}")]
    SmoothnessViolated { residual: f64 },
    #[error("f has another root beyond r0 (near r = {r})")]
    NotLargestRoot { r: f64 },
    #[error("lapse v(r) = {value} is not positive at r = {r}")]
    DegenerateLapse { r: f64, value: f64 },
    #[error("extrapolation error estimate {estimate:e} exceeds {tol:e}")]
    NotConverged { estimate: f64, tol: f64 },
    #[error("the {0} family is not asymptotically locally hyperbolic")]
    NotAlh(&'static str),
    #[error("grid of {size} specs exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("parameter range {0} is empty")]
    EmptyRange(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NoRoot { .. } => "no-root",
            Error::RootNotConverged { .. } => "root-not-converged",
            Error::TooCloseToBoundary { .. } => "too-close-to-boundary",
            Error::InsufficientSamples(_) => "insufficient-samples",
            Error::CubicResidual { .. } => "cubic-residual",
            Error::OutsideDomain { .. } => "outside-domain",
            Error::NegativeSquare { .. } => "negative-square",
            Error::SingularRadius => "singular-radius",
            Error::InadmissibleC { .. } => "inadmissible-C",
            Error::InadmissibleN(_) => "inadmissible-n",
            Error::NoPositiveRoot(_) => "no-positive-root",
            Error::SmoothnessViolated { .. } => "smoothness-violated",
            Error::NotLargestRoot { .. } => "not-largest-root",
            Error::DegenerateLapse { .. } => "degenerate-lapse",
            Error::NotConverged { .. } => "not-converged",
            Error::NotAlh(_) => "not-ALH",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::EmptyRange(_) => "empty-range",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
