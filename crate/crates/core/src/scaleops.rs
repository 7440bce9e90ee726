//! Fractal variation, fractional velocity, scale velocity, their limit
//! equivalence, set-of-change scans and pointwise Hölder exponents.
//!
//! For a signal `f`, a point `x` and a scale `ε > 0`:
//!
//! ```text
//! fracvar+  = (n+1)! (f(x+ε) - T_n(x, ε)) / ε^(n+β)
//! fracvar-  = (-1)^n (n+1)! (T_n(x, -ε) - f(x-ε)) / ε^(n+β)
//! S^β_ε±    = ε^β f'(x ± ε) / (1 - {β})
//! ```
//!
//! where `T_n` is the Taylor polynomial of degree `n` at `x`. Fractional
//! velocities are the `ε → 0` limits of the fractal variations; scale
//! velocities of order `β` share the limit of fractal variations of order
//! `1 - β` wherever `f'` is continuous and non-vanishing next to `x`.
//!
//! The backward scale velocity is signed as `-ε^β ∂_ε f(x - ε)`, so both
//! sides are the l'Hôpital counterparts of the matching fractal variation.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::numeric::order::frac_part;
use crate::numeric::{
    central_diff, limit_extrapolate, ExactScalar, FracOrder, LimitOptions, LimitResult,
};
use crate::signal::Signal;

/// Relative step for derivatives taken in the scale variable: `h = δ·ε`.
/// Keeps `x ± ε ± h` on the same side of `x` when `f` is singular there.
const SCALE_REL_STEP: f64 = 1e-6;

/// Default threshold below which a velocity counts as zero.
pub const DEFAULT_CHANGE_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Forward,
    Backward,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Forward => 1.0,
            Side::Backward => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Forward => "forward",
            Side::Backward => "backward",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" | "+" => Ok(Side::Forward),
            "backward" | "-" => Ok(Side::Backward),
            _ => domain(format!("side must be 'forward' or 'backward', got '{s}'")),
        }
    }
}

/// A point `(x, ε)` of scale space with the embedded value `f(x ± ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSample {
    pub x: f64,
    pub epsilon: f64,
    pub value: f64,
}

/// Scale embedding `(x, ε) ↦ f(x ± ε)`.
pub fn scale_embed(f: &Signal, x: f64, epsilon: f64, side: Side) -> Result<ScaleSample> {
    check_eps(epsilon)?;
    let value = f.eval(x + side.sign() * epsilon)?;
    Ok(ScaleSample { x, epsilon, value })
}

/// A fractional velocity together with the limit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityEstimate {
    pub order: FracOrder,
    pub side: Side,
    pub result: LimitResult,
}

impl VelocityEstimate {
    pub fn value(&self) -> f64 {
        self.result.value
    }

    pub fn converged(&self) -> bool {
        self.result.converged
    }
}

fn check_eps(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        domain(format!("scale must be positive, got {epsilon}"))
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Fractal variation of mixed order `n + β` at scale `ε`.
///
/// Needs `f', …, f^(n)` attached to the signal when `n > 0`.
pub fn fracvar(f: &Signal, x: f64, order: FracOrder, epsilon: f64, side: Side) -> Result<f64> {
    check_eps(epsilon)?;
    let n = order.n() as usize;
    if f.derivative_depth() < n {
        return Err(Error::Contract(format!(
            "order {order} needs {n} analytic derivatives, {} has {}",
            f.label(),
            f.derivative_depth()
        )));
    }
    let h = side.sign() * epsilon;
    // T_n(x, ±ε)
    let mut taylor = f.eval(x)?;
    let mut term = 1.0;
    for k in 1..=n {
        term *= h / k as f64;
        taylor += f.derivative(k, x).expect("checked depth")? * term;
    }
    let shifted = f.eval(x + h)?;
    let scale = factorial(order.n() + 1) / epsilon.powf(order.total());
    Ok(match side {
        Side::Forward => scale * (shifted - taylor),
        Side::Backward => {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            parity * scale * (taylor - shifted)
        }
    })
}

/// Fractional velocity: the limit of [`fracvar`] along `ε_k = eps0 · 2^-k`.
///
/// With a dyadic `eps0` the scales are dyadic, which is the sequence along
/// which the velocity of De Rham-type functions is attained.
pub fn fractional_velocity(
    f: &Signal,
    x: f64,
    order: FracOrder,
    side: Side,
    opts: &LimitOptions,
) -> Result<VelocityEstimate> {
    opts.validate()?;
    let result = limit_extrapolate(
        |k| fracvar(f, x, order, opts.scale(k), side),
        opts.tol,
        opts.max_terms,
    )?;
    Ok(VelocityEstimate {
        order,
        side,
        result,
    })
}

/// Limit of `±(f(x ± ε) - f(x)) / ε^γ` along `ε_k = eps0 · 2^-k` for any
/// `γ > 0`.
///
/// For `γ ≤ 1` this is [`fractional_velocity`] of order `0 + γ`. Larger
/// exponents measure singular signals whose increments decay faster than
/// `ε`, such as De Rham's function with weight `a < 1/2` at order
/// `-log2 a`; no Taylor correction is applied.
pub fn increment_velocity(
    f: &Signal,
    x: f64,
    gamma: f64,
    side: Side,
    opts: &LimitOptions,
) -> Result<LimitResult> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return domain(format!("exponent must be positive, got {gamma}"));
    }
    if gamma <= 1.0 {
        return Ok(fractional_velocity(f, x, FracOrder::fractional(gamma)?, side, opts)?.result);
    }
    opts.validate()?;
    let f0 = f.eval(x)?;
    limit_extrapolate(
        |k| {
            let eps = opts.scale(k);
            Ok(side.sign() * (f.eval(x + side.sign() * eps)? - f0) / eps.powf(gamma))
        },
        opts.tol,
        opts.max_terms,
    )
}

/// `∂/∂ε f(x ± ε)` taken as a one-sided rate: `f'(x+ε)` forward,
/// `f'(x-ε)` backward.
fn scale_slope(f: &Signal, x: f64, epsilon: f64, side: Side) -> Result<f64> {
    let s = side.sign();
    let at = x + s * epsilon;
    match f.derivative(1, at) {
        Some(r) => r,
        None => {
            let h = SCALE_REL_STEP * epsilon;
            Ok(s * central_diff(|e| f.call(x + s * e), epsilon, h)?)
        }
    }
}

/// Scale velocity `S^β_ε±[f](x) = ε^β f'(x ± ε) / (1 - {β})`, `β ∈ (0, 1]`.
///
/// Uses the analytic `f'` when attached, else a central difference in `ε`
/// with step `1e-6·ε`.
pub fn scale_velocity(f: &Signal, x: f64, beta: f64, epsilon: f64, side: Side) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return domain(format!(
            "scale velocity order must lie in (0, 1], got {beta}"
        ));
    }
    check_eps(epsilon)?;
    let slope = scale_slope(f, x, epsilon, side)?;
    Ok(epsilon.powf(beta) * slope / (1.0 - frac_part(beta)))
}

/// Both limits of the equivalence between fractal variation of order
/// `1 - β` and scale velocity of order `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceCheck {
    pub v_frac: LimitResult,
    pub v_scale: LimitResult,
    pub agree: bool,
    /// Set when `f'` was seen to vanish or change sign next to `x`.
    pub hypothesis_warning: Option<String>,
}

/// Number of samples of `f'` used to check the non-vanishing hypothesis.
const HYPOTHESIS_SAMPLES: usize = 32;

/// Runs both forward limits on the same scale sequence. They agree when
/// both converge and differ by less than `10·tol`.
pub fn limit_equivalence_check(
    f: &Signal,
    x: f64,
    beta: f64,
    opts: &LimitOptions,
) -> Result<EquivalenceCheck> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("equivalence needs beta in (0, 1), got {beta}"));
    }
    opts.validate()?;

    let mut warning = None;
    let mut sign = 0.0f64;
    for i in 1..=HYPOTHESIS_SAMPLES {
        let e = opts.eps0 * i as f64 / HYPOTHESIS_SAMPLES as f64;
        let d = scale_slope(f, x, e, Side::Forward)?;
        if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
            warning = Some(format!(
                "f' vanishes or changes sign near {} on (x, x + {}]",
                x + e,
                opts.eps0
            ));
            break;
        }
        sign = d.signum();
    }

    let frac_order = FracOrder::fractional(1.0 - beta)?;
    let v_frac = limit_extrapolate(
        |k| fracvar(f, x, frac_order, opts.scale(k), Side::Forward),
        opts.tol,
        opts.max_terms,
    )?;
    let v_scale = limit_extrapolate(
        |k| scale_velocity(f, x, beta, opts.scale(k), Side::Forward),
        opts.tol,
        opts.max_terms,
    )?;
    let agree = v_frac.converged
        && v_scale.converged
        && (v_frac.value - v_scale.value).abs() < 10.0 * opts.tol;
    Ok(EquivalenceCheck {
        v_frac,
        v_scale,
        agree,
        hypothesis_warning: warning,
    })
}

/// Grid points where the fractional velocity converged to a value whose
/// magnitude exceeds `threshold`.
///
/// `f` must be safe for concurrent calls; grid points are evaluated on
/// scoped worker threads.
pub fn set_of_change_scan(
    f: &Signal,
    grid: &[ExactScalar],
    order: FracOrder,
    side: Side,
    opts: &LimitOptions,
    threshold: f64,
) -> Result<Vec<(ExactScalar, VelocityEstimate)>> {
    if !(threshold > 0.0) {
        return domain(format!("threshold must be positive, got {threshold}"));
    }
    opts.validate()?;
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(grid.len().max(1));
    let chunk = grid.len().div_ceil(workers).max(1);
    let estimates: Vec<Result<VelocityEstimate>> = std::thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|pts| {
                s.spawn(move || {
                    pts.iter()
                        .map(|p| fractional_velocity(f, p.value(), order, side, opts))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for (p, est) in grid.iter().zip(estimates) {
        let est = est?;
        if est.converged() && est.value().abs() > threshold {
            out.push((*p, est));
        }
    }
    Ok(out)
}

/// Log-log fit of increment size against scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderFit {
    pub alpha_hat: f64,
    pub r_squared: f64,
    pub samples_used: usize,
}

/// Pointwise Hölder exponent: least-squares slope of `log|f(x±ε) - f(x)|`
/// against `log ε` over `points` geometrically spaced scales.
///
/// Samples with a zero increment are dropped; fewer than four survivors
/// is an error.
pub fn holder_exponent(
    f: &Signal,
    x: f64,
    eps_range: (f64, f64),
    points: usize,
    side: Side,
) -> Result<HolderFit> {
    let (lo, hi) = eps_range;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return domain(format!("need 0 < eps_min < eps_max, got ({lo}, {hi})"));
    }
    if points < 4 {
        return domain(format!("need at least 4 scales, got {points}"));
    }
    let f0 = f.eval(x)?;
    let span = (hi / lo).log2();
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for i in 0..points {
        let eps = lo * (span * i as f64 / (points - 1) as f64).exp2();
        let inc = (f.eval(x + side.sign() * eps)? - f0).abs();
        if inc > 0.0 {
            xs.push(eps.ln());
            ys.push(inc.ln());
        }
    }
    if xs.len() < 4 {
        return Err(Error::Estimation(format!(
            "only {} non-zero increments out of {points}",
            xs.len()
        )));
    }
    let (slope, r_squared) = least_squares(&xs, &ys);
    Ok(HolderFit {
        alpha_hat: slope,
        r_squared,
        samples_used: xs.len(),
    })
}

/// Slope and coefficient of determination of the OLS line through `(x, y)`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, r2)
}
