//! De Rham's singular function `R_a`: dyadic expansions, the functional
//! equation and its arithmetic (digit-sum) form, fractional velocities on
//! dyadic rationals, the `d_n` / `r_n` recursions, scale-regularizing
//! sequences and a coin-flip Monte Carlo estimate.
//!
//! `R_a` is the unique continuous solution of
//!
//! ```text
//! R(0) = 0,  R(1) = 1,
//! R(x) = a R(2x)                 for 0 ≤ x < 1/2,
//! R(x) = (1 - a) R(2x - 1) + a   for 1/2 ≤ x ≤ 1.
//! ```

mod dyadic;
mod eval;
mod mc;
mod sequence;
mod velocity;

pub use dyadic::{dyadic_expand, DyadicNumber};
pub use eval::{
    arithmetic_truncation_bound, derham_eval, derham_eval_arithmetic, derham_eval_recursive,
    derham_signal, rn_iterate,
};
pub use mc::{mc_derham_estimate, McEstimate};
pub use sequence::{scale_regularizing_sequence, ScaleSequence};
pub use velocity::{derham_velocity_exact, dn_normalized, dn_recursion};

use crate::error::{domain, Result};
use crate::numeric::ExactScalar;

/// Weight parameter `a` of `R_a` and its associated order `β = -log2 a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeRhamParams {
    a: f64,
}

impl DeRhamParams {
    /// Strict constructor: `0 < a < 1` and `a ≠ 1/2`.
    pub fn new(a: f64) -> Result<Self> {
        let p = Self::for_evaluation(a)?;
        if a == 0.5 {
            return domain("a = 1/2 is the identity case and has no singular velocity");
        }
        Ok(p)
    }

    /// Accepts `a = 1/2` as well, where `R_a` is the identity.
    pub fn for_evaluation(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return domain(format!("De Rham weight must lie in (0, 1), got {a}"));
        }
        Ok(DeRhamParams { a })
    }

    /// Parameters whose order `-log2 a` equals `beta`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new((-beta).exp2())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `β = -log2 a`.
    pub fn beta(&self) -> f64 {
        -self.a.log2()
    }

    /// `2^β - 1`, the factor contributed by each binary digit 1.
    pub fn velocity_base(&self) -> f64 {
        self.beta().exp2() - 1.0
    }
}

/// `x` as a reduced fraction `p/q` with `0 ≤ p ≤ q`.
pub(crate) fn unit_fraction(x: &ExactScalar) -> Result<(u128, u128)> {
    if !x.in_unit_interval() {
        return domain(format!("{x} lies outside [0, 1]"));
    }
    let (p, q) = x.fraction();
    if q > u128::MAX / 2 {
        return domain(format!("denominator of {x} is too large"));
    }
    Ok((p as u128, q))
}
