use super::{dyadic_expand, unit_fraction, DeRhamParams};
use crate::error::{domain, Result};
use crate::numeric::ExactScalar;

/// Closed-form fractional velocity of `R_a` of order `β = -log2 a`:
/// `(2^β - 1)^(s - 1)` when `x` is a dyadic rational whose expansion
/// terminates within `depth` digits (`s` its digit sum), and 0 otherwise.
///
/// Note that the forward limit along `ε = 2^-k` evaluates to
/// `(2^β - 1)^s`, which is what [`dn_recursion`] returns.
pub fn derham_velocity_exact(x: &ExactScalar, params: &DeRhamParams, depth: usize) -> Result<f64> {
    let (p, q) = unit_fraction(x)?;
    if p == q {
        return domain("velocity is defined on [0, 1)");
    }
    let d = dyadic_expand(x, depth)?;
    if !d.is_terminating() {
        return Ok(0.0);
    }
    let s = d.digit_sum() as i32;
    Ok(params.velocity_base().powi(s - 1))
}

/// `d_n(x, a)`: `d_0 = 1`, `d_n(x) = d_{n-1}(2x)` on `[0, 1/2)` and
/// `(2^a - 1) d_{n-1}(2x - 1)` on `[1/2, 1]`. Equals `(2^a - 1)^(s_n)`
/// with `s_n` the digit sum of the first `n` binary digits of `x`.
pub fn dn_recursion(x: &ExactScalar, a_exp: f64, n: usize) -> Result<f64> {
    if !(a_exp > 0.0) || !a_exp.is_finite() {
        return domain(format!("exponent must be positive, got {a_exp}"));
    }
    let (mut p, q) = unit_fraction(x)?;
    let factor = a_exp.exp2() - 1.0;
    let mut d = 1.0;
    for _ in 0..n {
        if 2 * p < q {
            p *= 2;
        } else {
            d *= factor;
            p = 2 * p - q;
        }
    }
    Ok(d)
}

/// [`dn_recursion`] divided by `2^a - 1`, i.e. `(2^a - 1)^(s_n - 1)`, the
/// normalization of the closed form [`derham_velocity_exact`].
pub fn dn_normalized(x: &ExactScalar, a_exp: f64, n: usize) -> Result<f64> {
    Ok(dn_recursion(x, a_exp, n)? / (a_exp.exp2() - 1.0))
}
