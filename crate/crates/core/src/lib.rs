//! Fractional velocity, scale velocity and fractional differ-integral
//! operators for strongly non-linear and singular signals.
//!
//! The crate is organised by layer:
//!
//! - [`numeric`]: finite differences, sequence limits, gamma, exact scalars;
//! - [`derham`]: exact and iterative machinery for De Rham's singular function;
//! - [`signal`]: real signals with optional analytic derivatives;
//! - [`scaleops`]: fractal variation, fractional and scale velocities,
//!   sets of change and pointwise Hölder exponents;
//! - [`fraccalc`]: Riemann–Liouville and Caputo operators by product
//!   quadrature, and checks linking them to scale velocities.

pub mod derham;
pub mod error;
pub mod fraccalc;
pub mod numeric;
pub mod scaleops;
pub mod signal;

pub use error::{Error, Result};
pub use numeric::{ExactScalar, FracOrder, LimitOptions, LimitResult};
pub use signal::Signal;
