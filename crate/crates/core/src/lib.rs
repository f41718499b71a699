//! Verification toolkit for Eguchi-Hanson type metrics with negative constant
//! scalar curvature.
//!
//! The crate builds the metric families in closed form, computes their
//! orthonormal-frame curvature with a generic Cartan engine, checks the bolt
//! smoothness conditions, tests static five-dimensional extensions against the
//! vacuum Einstein equations, and evaluates the asymptotic total energy.

pub mod checks;
pub mod einstein_5d;
pub mod energy;
pub mod error;
pub mod families;
pub mod frame_geometry;
pub mod jet;
pub mod numeric_kernel;
pub mod radial_profiles;
pub mod sweep;

pub use error::{Error, Result};
pub use jet::Jet;
pub use radial_profiles::{Family, RadialProfile};
