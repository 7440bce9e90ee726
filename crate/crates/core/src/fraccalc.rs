//! Riemann–Liouville and Caputo differ-integrals on a uniform mesh, the
//! inversion identities between them, and checks of the identities that
//! tie them to scale velocities.
//!
//! ```text
//! I^β f(x)       = 1/Γ(β) ∫_a^x f(t) (x-t)^(β-1) dt
//! C^β f(x)       = 1/Γ(1-β) ∫_a^x f'(t) (x-t)^(-β) dt = I^(1-β) f'(x)
//! D^β f(x)       = d/dx I^(1-β) f(x)
//! ```
//!
//! Integrals use the product trapezoid rule: `f` is interpolated linearly
//! on each cell and the kernel is integrated exactly against each piece.
//! Caputo derivatives use the L1 rule (difference quotients against the
//! exact kernel moments) unless `f'` is attached to the signal, in which
//! case `I^(1-β)` is applied to `f'` directly.

use crate::error::{domain, Error, Result};
use crate::numeric::order::frac_part;
use crate::numeric::{
    central_diff, gamma, limit_extrapolate, FracOrder, LimitOptions, LimitResult,
};
use crate::scaleops::{fractional_velocity, scale_velocity, Side, VelocityEstimate};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ProductTrapezoid,
}

/// Lower limit, evaluation point and uniform mesh for a differ-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub a: f64,
    pub x: f64,
    pub nodes: usize,
    pub scheme: Scheme,
}

impl QuadratureSpec {
    pub fn new(a: f64, x: f64, nodes: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            a,
            x,
            nodes,
            scheme: Scheme::ProductTrapezoid,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.x.is_finite()) {
            return domain(format!(
                "limits must be finite, got [{}, {}]",
                self.a, self.x
            ));
        }
        if !(self.a < self.x) {
            return domain(format!("need a < x, got a = {}, x = {}", self.a, self.x));
        }
        if self.nodes < 2 {
            return domain(format!("need at least 2 nodes, got {}", self.nodes));
        }
        Ok(())
    }

    /// Same lower limit and resolution, new evaluation point.
    pub fn at(&self, x: f64) -> Result<Self> {
        QuadratureSpec::new(self.a, x, self.nodes)
    }

    /// Number of cells: `nodes - 1`.
    pub fn cells(&self) -> usize {
        self.nodes - 1
    }

    pub fn step(&self) -> f64 {
        (self.x - self.a) / self.cells() as f64
    }

    fn mesh(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        let n = self.cells();
        (0..=n).map(move |j| {
            if j == n {
                self.x
            } else {
                self.a + j as f64 * h
            }
        })
    }

    fn sample(&self, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
        self.mesh().map(f).collect()
    }
}

/// Product-trapezoid weights of order `β` for every sub-mesh `[t_0, t_i]`.
///
/// `I^β v (t_i) = h^β / Γ(β+2) · (first[i]·v_0 + Σ_{j=1..i} inner[i-j]·v_j)`.
struct TrapezoidWeights {
    inner: Vec<f64>,
    first: Vec<f64>,
    scale: f64,
}

impl TrapezoidWeights {
    fn new(beta: f64, cells: usize, h: f64) -> Result<Self> {
        let p = beta + 1.0;
        let pw = |m: f64| m.powf(p);
        let mut inner = Vec::with_capacity(cells + 1);
        inner.push(1.0);
        for m in 1..=cells {
            let m = m as f64;
            inner.push(pw(m + 1.0) - 2.0 * pw(m) + pw(m - 1.0));
        }
        let mut first = Vec::with_capacity(cells + 1);
        first.push(0.0);
        for i in 1..=cells {
            let i = i as f64;
            first.push(pw(i - 1.0) - (i - 1.0 - beta) * i.powf(beta));
        }
        Ok(TrapezoidWeights {
            inner,
            first,
            scale: h.powf(beta) / gamma(beta + 2.0)?,
        })
    }

    fn apply(&self, v: &[f64], i: usize) -> f64 {
        if i == 0 {
            return 0.0;
        }
        let mut s = self.first[i] * v[0];
        for j in 1..=i {
            s += self.inner[i - j] * v[j];
        }
        self.scale * s
    }
}

/// L1 weights of order `β ∈ (0, 1)` for every sub-mesh `[t_0, t_i]`.
///
/// `C^β v (t_i) = h^-β / Γ(2-β) · Σ_{j<i} (v_{j+1} - v_j) · b[i-1-j]`.
struct L1Weights {
    b: Vec<f64>,
    scale: f64,
}

impl L1Weights {
    fn new(beta: f64, cells: usize, h: f64) -> Result<Self> {
        let q = 1.0 - beta;
        let b = (0..cells)
            .map(|m| ((m + 1) as f64).powf(q) - (m as f64).powf(q))
            .collect();
        Ok(L1Weights {
            b,
            scale: h.powf(-beta) / gamma(2.0 - beta)?,
        })
    }

    fn apply(&self, v: &[f64], i: usize) -> f64 {
        let mut s = 0.0;
        for j in 0..i {
            s += (v[j + 1] - v[j]) * self.b[i - 1 - j];
        }
        self.scale * s
    }
}

fn check_integral_order(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        domain(format!("integral order must be positive, got {beta}"))
    }
}

fn check_derivative_order(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        domain(format!("derivative order must lie in (0, 1), got {beta}"))
    }
}

/// Riemann–Liouville integral `I^β_a f(x)`, `β > 0`.
pub fn rl_integral(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_integral_order(beta)?;
    spec.validate()?;
    let v = spec.sample(|t| f.eval(t))?;
    let w = TrapezoidWeights::new(beta, spec.cells(), spec.step())?;
    Ok(w.apply(&v, spec.cells()))
}

/// `I^β_a f` at every mesh node `t_0 = a, …, t_N = x`.
pub fn rl_integral_profile(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    check_integral_order(beta)?;
    spec.validate()?;
    let v = spec.sample(|t| f.eval(t))?;
    let w = TrapezoidWeights::new(beta, spec.cells(), spec.step())?;
    Ok((0..=spec.cells()).map(|i| w.apply(&v, i)).collect())
}

/// Caputo derivative `C^β_a f(x)`, `β ∈ (0, 1)`.
pub fn caputo_derivative(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(*caputo_values(f, beta, spec, false)?
        .last()
        .expect("nonempty mesh"))
}

/// `C^β_a f` at every mesh node.
pub fn caputo_profile(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    caputo_values(f, beta, spec, true)
}

fn caputo_values(f: &Signal, beta: f64, spec: &QuadratureSpec, all: bool) -> Result<Vec<f64>> {
    check_derivative_order(beta)?;
    spec.validate()?;
    let n = spec.cells();
    let h = spec.step();
    let nodes: Vec<usize> = if all { (0..=n).collect() } else { vec![n] };
    if f.derivative_depth() >= 1 {
        let d = spec.sample(|t| f.derivative(1, t).expect("checked depth"))?;
        let w = TrapezoidWeights::new(1.0 - beta, n, h)?;
        Ok(nodes.into_iter().map(|i| w.apply(&d, i)).collect())
    } else {
        let v = spec.sample(|t| f.eval(t))?;
        let w = L1Weights::new(beta, n, h)?;
        Ok(nodes.into_iter().map(|i| w.apply(&v, i)).collect())
    }
}

/// Relative step of the outer derivative in [`rl_derivative`].
const RL_DERIVATIVE_REL_STEP: f64 = 1e-5;

/// Riemann–Liouville derivative `d/dx I^(1-β)_a f(x)`, `β ∈ (0, 1)`.
///
/// The outer derivative is a central difference in `x` with step
/// `1e-5·max(|x|, 1)`, capped at `(x-a)/2`.
pub fn rl_derivative(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_derivative_order(beta)?;
    spec.validate()?;
    let h = (RL_DERIVATIVE_REL_STEP * spec.x.abs().max(1.0)).min(0.5 * (spec.x - spec.a));
    let failure = std::cell::RefCell::new(None);
    let value = central_diff(
        |y| match spec.at(y).and_then(|s| rl_integral(f, 1.0 - beta, &s)) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        spec.x,
        h,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}

/// Residuals of the two inversion identities at `spec.x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResiduals {
    /// `|C^β (I^β f)(x) - f(x)|`
    pub left: f64,
    /// `|I^β (C^β f)(x) - (f(x) - f(a))|`
    pub right: f64,
}

/// Both inversion identities by nested quadrature on a single mesh.
///
/// The inner operator is tabulated at every node (`O(N²)` work), then the
/// outer operator is applied to the table.
pub fn inversion_check(f: &Signal, beta: f64, spec: &QuadratureSpec) -> Result<InversionResiduals> {
    check_derivative_order(beta)?;
    spec.validate()?;
    let n = spec.cells();
    let h = spec.step();
    let fa = f.eval(spec.a)?;
    let fx = f.eval(spec.x)?;

    let integral = rl_integral_profile(f, beta, spec)?;
    let left = L1Weights::new(beta, n, h)?.apply(&integral, n);

    let derivative = caputo_profile(f, beta, spec)?;
    let right = TrapezoidWeights::new(beta, n, h)?.apply(&derivative, n);

    Ok(InversionResiduals {
        left: (left - fx).abs(),
        right: (right - (fx - fa)).abs(),
    })
}

/// Which form of the bridge identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeForm {
    /// `S^α[I^β f] = ε^α (x+ε-a)^(β-1) f(a) / ((1-{α}) Γ(β)) + ε^α C^(1-β) f(x+ε) / (1-{α})`
    Theorem,
    /// The same with `f(a)` subtracted from `f`: no boundary term.
    Corollary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Scale velocity of order `α` of `y ↦ I^β_a f(y)` at scale `ε`, set
/// against the Caputo form of the same quantity.
///
/// The left side differentiates the quadrature in `ε` numerically, so `f`
/// must be C¹ on `[a, x + ε + h]` for the finite-difference step `h`, not
/// only on `[a, x)`.
pub fn bridge_theorem_check(
    f: &Signal,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    spec: &QuadratureSpec,
    form: BridgeForm,
) -> Result<BridgeCheck> {
    check_derivative_order(alpha)?;
    check_derivative_order(beta)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return domain(format!("scale must be positive, got {epsilon}"));
    }
    spec.validate()?;
    let a = spec.a;
    let fa = f.eval(a)?;
    let integrand = match form {
        BridgeForm::Theorem => f.clone(),
        BridgeForm::Corollary => f.shifted(fa),
    };
    let lhs = scale_velocity(
        &integral_map(&integrand, beta, spec, 0.0),
        spec.x,
        alpha,
        epsilon,
        Side::Forward,
    )?;

    let y = spec.x + epsilon;
    let norm = epsilon.powf(alpha) / (1.0 - frac_part(alpha));
    let caputo = caputo_derivative(f, 1.0 - beta, &spec.at(y)?)?;
    let boundary = match form {
        BridgeForm::Theorem => (y - a).powf(beta - 1.0) * fa / gamma(beta)?,
        BridgeForm::Corollary => 0.0,
    };
    let rhs = norm * (boundary + caputo);
    Ok(BridgeCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `y ↦ I^β_a g(y) - offset` as a signal, with value `-offset` at `y = a`.
/// Evaluation failures surface as NaN and are reported by the caller.
fn integral_map(g: &Signal, beta: f64, spec: &QuadratureSpec, offset: f64) -> Signal {
    let label = format!("I^{beta}_{}[{}]", spec.a, g.label());
    let g = g.clone();
    let (a, nodes) = (spec.a, spec.nodes);
    Signal::new(move |y| {
        if y == a {
            return -offset;
        }
        match QuadratureSpec::new(a, y, nodes).and_then(|s| rl_integral(&g, beta, &s)) {
            Ok(v) => v - offset,
            Err(_) => f64::NAN,
        }
    })
    .labeled(label)
}

/// Both routes to the fractional velocity of an RL integral.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionCheck {
    /// `(1/α) lim ε^(1-α) C^β f(x+ε)`
    pub caputo_route: LimitResult,
    /// Fractional velocity of order `α` of `y ↦ I^(1-β)_a f(y) - f(a)`.
    pub velocity_route: VelocityEstimate,
    pub agree: bool,
}

/// Evaluates both sides along `ε_k = eps0 · 2^-k`. They agree when both
/// converge and differ by less than `10·tol`. Here `x = a` is allowed.
pub fn limit_proposition_check(
    f: &Signal,
    a: f64,
    x: f64,
    alpha: f64,
    beta: f64,
    nodes: usize,
    opts: &LimitOptions,
) -> Result<PropositionCheck> {
    check_derivative_order(alpha)?;
    check_derivative_order(beta)?;
    opts.validate()?;
    if !(a <= x) {
        return domain(format!("need a <= x, got a = {a}, x = {x}"));
    }
    let fa = f.eval(a)?;
    let caputo_route = limit_extrapolate(
        |k| {
            let eps = opts.scale(k);
            let c = caputo_derivative(f, beta, &QuadratureSpec::new(a, x + eps, nodes)?)?;
            Ok(eps.powf(1.0 - alpha) * c / alpha)
        },
        opts.tol,
        opts.max_terms,
    )?;
    let probe = QuadratureSpec::new(a, x + opts.eps0, nodes)?;
    let map = integral_map(f, 1.0 - beta, &probe, fa);
    let velocity_route =
        fractional_velocity(&map, x, FracOrder::fractional(alpha)?, Side::Forward, opts)?;
    if let Some(e) = velocity_route.result.residuals.iter().find(|r| r.is_nan()) {
        return Err(Error::Evaluation { at: x, value: *e });
    }
    let agree = caputo_route.converged
        && velocity_route.converged()
        && (caputo_route.value - velocity_route.value()).abs() < 10.0 * opts.tol;
    Ok(PropositionCheck {
        caputo_route,
        velocity_route,
        agree,
    })
}
