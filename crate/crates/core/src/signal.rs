//! Real-valued signals with optional analytic derivatives, and the small
//! expression grammar used to name them on the command line:
//!
//! | spec              | signal                                   |
//! |-------------------|------------------------------------------|
//! | `poly:c_n,…,c_0`  | `c_n t^n + … + c_0`                      |
//! | `pow:α`           | `t^α` on `t ≥ 0`                         |
//! | `abs-pow:α@x0`    | `|t - x0|^α`                             |
//! | `derham:a@depth`  | De Rham's `R_a`, recursion depth `depth` |
//! | `sin`, `exp`      | the usual functions                      |
//!
//! Complex-valued signals are handled component-wise by the caller: every
//! operator here is linear in the signal.

use std::fmt;
use std::sync::Arc;

use crate::derham::{derham_signal, DeRhamParams};
use crate::error::{domain, finite, Error, Result};
use crate::numeric::{central_diff, default_step};

/// Shared real map. Must be safe to call concurrently.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Highest derivative order attached to the smooth grammar signals.
const STACK_DEPTH: usize = 4;

/// Relative tolerance for spot-checking analytic derivatives.
const DERIVATIVE_CHECK_TOL: f64 = 1e-3;

#[derive(Clone)]
pub struct Signal {
    eval: RealFn,
    derivatives: Vec<RealFn>,
    domain: (f64, f64),
    label: String,
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signal")
            .field("label", &self.label)
            .field("derivatives", &self.derivatives.len())
            .field("domain", &self.domain)
            .finish()
    }
}

impl Signal {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Signal {
            eval: Arc::new(f),
            derivatives: Vec::new(),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            label: "signal".to_string(),
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return domain(format!("empty domain [{lo}, {hi}]"));
        }
        self.domain = (lo, hi);
        Ok(self)
    }

    /// Attaches `f', f'', …`; entry `j` must be the `(j+1)`-th derivative.
    ///
    /// Each entry is spot-checked against a central difference of the
    /// previous one at three points of the domain.
    pub fn with_derivatives(mut self, derivatives: Vec<RealFn>) -> Result<Self> {
        let points = self.spot_points();
        for (j, d) in derivatives.iter().enumerate() {
            let lower: &RealFn = if j == 0 {
                &self.eval
            } else {
                &derivatives[j - 1]
            };
            for &t in &points {
                let numeric = central_diff(|s| lower(s), t, default_step(t))?;
                let analytic = finite(t, d(t))?;
                let scale = analytic.abs().max(1.0);
                if (analytic - numeric).abs() > DERIVATIVE_CHECK_TOL * scale {
                    return Err(Error::Contract(format!(
                        "derivative {} of {} disagrees with finite differences at {t}: {analytic} vs {numeric}",
                        j + 1,
                        self.label
                    )));
                }
            }
        }
        self.derivatives = derivatives;
        Ok(self)
    }

    fn spot_points(&self) -> [f64; 3] {
        let (lo, hi) = self.domain;
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => [0.25, 0.5, 0.75].map(|f| lo + f * (hi - lo)),
            (true, false) => [0.25, 0.5, 0.75].map(|f| lo + f),
            (false, true) => [0.75, 0.5, 0.25].map(|f| hi - f),
            (false, false) => [-0.5, 0.25, 0.75],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Number of analytic derivatives available.
    pub fn derivative_depth(&self) -> usize {
        self.derivatives.len()
    }

    /// Raw evaluation, without the finiteness check.
    pub fn call(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        finite(x, (self.eval)(x))
    }

    /// The `order`-th analytic derivative (`order ≥ 1`), if attached.
    pub fn derivative(&self, order: usize, x: f64) -> Option<Result<f64>> {
        if order == 0 {
            return Some(self.eval(x));
        }
        self.derivatives.get(order - 1).map(|d| finite(x, d(x)))
    }

    /// `f'(x)`: analytic when attached, otherwise a central difference
    /// with step `h`.
    pub fn slope_with_step(&self, x: f64, h: f64) -> Result<f64> {
        match self.derivative(1, x) {
            Some(r) => r,
            None => central_diff(|t| self.call(t), x, h),
        }
    }

    /// `f'(x)` with the default finite-difference step.
    pub fn slope(&self, x: f64) -> Result<f64> {
        self.slope_with_step(x, default_step(x))
    }

    /// `c1·f + c2·g`. Derivatives are kept up to the shorter stack.
    pub fn linear_combination(c1: f64, f: &Signal, c2: f64, g: &Signal) -> Signal {
        let combine = |a: RealFn, b: RealFn| -> RealFn { Arc::new(move |x| c1 * a(x) + c2 * b(x)) };
        let n = f.derivatives.len().min(g.derivatives.len());
        let derivatives = (0..n)
            .map(|j| combine(f.derivatives[j].clone(), g.derivatives[j].clone()))
            .collect();
        Signal {
            eval: combine(f.eval.clone(), g.eval.clone()),
            derivatives,
            domain: (f.domain.0.max(g.domain.0), f.domain.1.min(g.domain.1)),
            label: format!("{c1}*({})+{c2}*({})", f.label, g.label),
        }
    }

    /// `t ↦ f(t) - c`.
    pub fn shifted(&self, c: f64) -> Signal {
        let f = self.eval.clone();
        Signal {
            eval: Arc::new(move |x| f(x) - c),
            derivatives: self.derivatives.clone(),
            domain: self.domain,
            label: format!("({})-{c}", self.label),
        }
    }

    /// Polynomial with coefficients from highest degree down to the constant.
    pub fn polynomial(coeffs: &[f64]) -> Result<Signal> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return domain("polynomial needs at least one finite coefficient");
        }
        let mut stack: Vec<RealFn> = Vec::with_capacity(STACK_DEPTH);
        let mut current = coeffs.to_vec();
        for _ in 0..STACK_DEPTH {
            current = poly_derivative(&current);
            stack.push(horner_fn(current.clone()));
        }
        let label = format!(
            "poly:{}",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Signal {
            eval: horner_fn(coeffs.to_vec()),
            derivatives: Vec::new(),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            label,
        }
        .with_derivatives(stack)
    }

    pub fn sin() -> Signal {
        let stack: Vec<RealFn> = vec![
            Arc::new(f64::cos),
            Arc::new(|x: f64| -x.sin()),
            Arc::new(|x: f64| -x.cos()),
            Arc::new(f64::sin),
        ];
        Signal::new(f64::sin)
            .labeled("sin")
            .with_derivatives(stack)
            .expect("sin derivatives")
    }

    pub fn exp() -> Signal {
        let stack: Vec<RealFn> = (0..STACK_DEPTH)
            .map(|_| Arc::new(f64::exp) as RealFn)
            .collect();
        Signal::new(f64::exp)
            .labeled("exp")
            .with_derivatives(stack)
            .expect("exp derivatives")
    }

    /// `t^α` on `[0, ∞)`; NaN (an evaluation error) for negative `t`.
    pub fn power(alpha: f64) -> Result<Signal> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("power exponent must be positive, got {alpha}"));
        }
        let f = move |t: f64| if t >= 0.0 { t.powf(alpha) } else { f64::NAN };
        let df = move |t: f64| {
            if t >= 0.0 {
                alpha * t.powf(alpha - 1.0)
            } else {
                f64::NAN
            }
        };
        Signal::new(f)
            .labeled(format!("pow:{alpha}"))
            .with_domain(0.0, f64::INFINITY)?
            .with_derivatives(vec![Arc::new(df)])
    }

    /// `|t - x0|^α`, with no derivative attached (it is singular at `x0`).
    pub fn abs_power(alpha: f64, x0: f64) -> Result<Signal> {
        if !(alpha > 0.0) || !alpha.is_finite() || !x0.is_finite() {
            return domain(format!(
                "abs-pow needs alpha > 0 and finite x0, got {alpha}@{x0}"
            ));
        }
        Ok(Signal::new(move |t: f64| (t - x0).abs().powf(alpha))
            .labeled(format!("abs-pow:{alpha}@{x0}")))
    }

    /// Parses the command-line signal grammar (see the module docs).
    pub fn parse(spec: &str) -> Result<Signal> {
        let spec = spec.trim();
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("cannot parse number '{s}' in signal '{spec}'")))
        };
        let at_pair = |a: &str| -> Result<(String, String)> {
            a.split_once('@')
                .map(|(l, r)| (l.to_string(), r.to_string()))
                .ok_or_else(|| {
                    Error::Domain(format!("signal '{spec}' needs the form name:value@value"))
                })
        };
        match (head, arg) {
            ("sin", None) => Ok(Signal::sin()),
            ("exp", None) => Ok(Signal::exp()),
            ("poly", Some(a)) => {
                let coeffs = a.split(',').map(num).collect::<Result<Vec<_>>>()?;
                Signal::polynomial(&coeffs)
            }
            ("pow", Some(a)) => Signal::power(num(a)?),
            ("abs-pow", Some(a)) => {
                let (alpha, x0) = at_pair(a)?;
                Signal::abs_power(num(&alpha)?, num(&x0)?)
            }
            ("derham", Some(a)) => {
                let (w, depth) = at_pair(a)?;
                let depth: usize = depth
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad depth in signal '{spec}'")))?;
                Ok(derham_signal(DeRhamParams::for_evaluation(num(&w)?)?, depth))
            }
            _ => domain(format!(
                "unknown signal '{spec}'; expected poly:c_n,...,c_0 | pow:a | abs-pow:a@x0 | derham:a@depth | sin | exp"
            )),
        }
    }
}

fn horner_fn(coeffs: Vec<f64>) -> RealFn {
    Arc::new(move |x: f64| coeffs.iter().fold(0.0, |acc, &c| acc * x + c))
}

/// Derivative coefficients (highest degree first). A constant maps to `[0]`.
fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    coeffs[..n - 1]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (n - 1 - i) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_derivatives() {
        let s = Signal::parse("poly:1,0,1,0").unwrap(); // t³ + t
        assert_eq!(s.eval(2.0).unwrap(), 10.0);
        assert_eq!(s.derivative(1, 2.0).unwrap().unwrap(), 13.0);
        assert_eq!(s.derivative(2, 2.0).unwrap().unwrap(), 12.0);
        assert_eq!(s.derivative(3, 2.0).unwrap().unwrap(), 6.0);
        assert_eq!(s.derivative(4, 2.0).unwrap().unwrap(), 0.0);
        assert!(s.derivative(5, 2.0).is_none());
    }

    #[test]
    fn constant_polynomial() {
        let s = Signal::parse("poly:5").unwrap();
        assert_eq!(s.eval(-3.0).unwrap(), 5.0);
        assert_eq!(s.slope(1.0).unwrap(), 0.0);
    }

    #[test]
    fn grammar_families() {
        assert!((Signal::parse("pow:0.5").unwrap().eval(0.25).unwrap() - 0.5).abs() < 1e-16);
        assert!((Signal::parse("abs-pow:0.6@0.5").unwrap().eval(0.5).unwrap()).abs() < 1e-16);
        assert_eq!(
            Signal::parse("derham:0.25@30").unwrap().eval(0.5).unwrap(),
            0.25
        );
        assert!((Signal::parse("sin").unwrap().slope(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((Signal::parse("exp").unwrap().eval(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grammar_errors() {
        for bad in [
            "",
            "cos",
            "poly:",
            "poly:1,x",
            "pow:-1",
            "abs-pow:0.5",
            "derham:0.3",
            "derham:1.5@4",
        ] {
            assert!(Signal::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn wrong_derivative_is_rejected() {
        let s = Signal::new(|t| t * t).with_derivatives(vec![Arc::new(|t: f64| 3.0 * t)]);
        assert!(matches!(s, Err(Error::Contract(_))));
    }

    #[test]
    fn power_rejects_negative_arguments() {
        let s = Signal::power(0.5).unwrap();
        assert!(matches!(s.eval(-1.0), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn numeric_slope_fallback() {
        let s = Signal::abs_power(2.0, 0.0).unwrap();
        assert!((s.slope(1.5).unwrap() - 3.0).abs() < 1e-6);
    }

    #[test]
    fn linear_combination_keeps_common_derivatives() {
        let f = Signal::sin();
        let g = Signal::polynomial(&[1.0, 0.0]).unwrap();
        let h = Signal::linear_combination(2.0, &f, -1.0, &g);
        assert_eq!(h.derivative_depth(), 4);
        let x = 0.3;
        assert!((h.eval(x).unwrap() - (2.0 * x.sin() - x)).abs() < 1e-15);
        assert!((h.slope(x).unwrap() - (2.0 * x.cos() - 1.0)).abs() < 1e-15);
    }
}
