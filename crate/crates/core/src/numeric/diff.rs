use crate::error::{finite, Error, Result};

/// Relative step used by [`default_step`].
pub const DEFAULT_REL_STEP: f64 = 1e-6;

/// Step `max(δ·|t|, δ)` with `δ = 1e-6`.
pub fn default_step(t: f64) -> f64 {
    (DEFAULT_REL_STEP * t.abs()).max(DEFAULT_REL_STEP)
}

/// Two-point central difference `(f(t+h) - f(t-h)) / 2h`.
pub fn central_diff<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let hi = finite(t + h, f(t + h))?;
    let lo = finite(t - h, f(t - h))?;
    Ok((hi - lo) / (2.0 * h))
}

/// Central difference with the default relative step.
pub fn derivative<F>(f: F, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    central_diff(f, t, default_step(t))
}
