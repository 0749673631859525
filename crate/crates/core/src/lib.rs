//! Exact perturbative solution and Borel-Écalle resummation of the
//! Wess-Zumino two-point function.
//!
//! The crate solves the one-loop Schwinger-Dyson equation coupled to the
//! renormalisation group equation in a space of formal power series with
//! coefficients in ℚ[ζ(3), ζ(5), …], analyzes the Borel transform of the
//! anomalous dimension (Padé continuation, singularity location, Gevrey
//! class), and performs an averaged Borel-Laplace resummation of γ and of
//! the two-point function G(L, a).
//!
//! Module map:
//! - [`coeffring`]: exact coefficient arithmetic and arbitrary-precision floats
//! - [`series`]: truncated formal series (coupling, Borel, kinematic, bivariate)
//! - [`model`]: Mellin coefficients, SDE fixed point, RGE solutions, bounds
//! - [`borelplane`]: Padé continuation, singularity scans, asymptotic probes
//! - [`averages`]: Écalle average weights on branch signatures
//! - [`resum`]: averaged Laplace quadrature and domain scans

pub mod averages;
pub mod borelplane;
pub mod coeffring;
pub mod error;
pub mod model;
pub mod resum;
pub mod series;

pub use error::Error;
