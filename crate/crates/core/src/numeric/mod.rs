//! Shared numerical primitives: finite differences, limits of sequences,
//! the gamma function and exact rational/dyadic scalars.

mod diff;
mod exact;
mod limit;
pub(crate) mod order;

pub use diff::{central_diff, default_step, derivative, DEFAULT_REL_STEP};
pub use exact::ExactScalar;
pub use limit::{dyadic_scale, limit_extrapolate, LimitOptions, LimitResult};
pub use order::FracOrder;

use crate::error::{domain, finite, Result};

/// Euler's gamma function.
///
/// Fails at the poles `0, -1, -2, ...` and when the result overflows.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma undefined for {x}"));
    }
    if x <= 0.0 && x == x.floor() {
        return domain(format!("gamma has a pole at {x}"));
    }
    finite(x, statrs::function::gamma::gamma(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_reference_values() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-13);
        let g25 = 1.5 * 0.5 * std::f64::consts::PI.sqrt();
        assert!(rel(gamma(2.5).unwrap(), g25) < 1e-13);
        assert!(rel(gamma(2.5).unwrap(), 1.329_340_388_179_137) < 1e-12);
        // 19! = 121645100408832000
        assert!(rel(gamma(20.0).unwrap(), 121_645_100_408_832_000.0) < 1e-12);
    }

    #[test]
    fn gamma_recurrence() {
        for &x in &[0.1, 0.5, 1.3, 4.7] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gamma_poles() {
        for &x in &[0.0, -1.0, -7.0] {
            assert!(gamma(x).is_err(), "{x}");
        }
        assert!(gamma(-0.5).is_ok());
        assert!(gamma(f64::NAN).is_err());
    }
}
