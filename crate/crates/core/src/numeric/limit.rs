use crate::error::{domain, Error, Result};

/// Outcome of a numerical `ε → 0` limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult {
    pub value: f64,
    pub converged: bool,
    /// Absolute differences of successive accelerated values.
    pub residuals: Vec<f64>,
    pub terms_used: usize,
    /// Why the limit was not reached, when it was not.
    pub diagnostic: Option<String>,
}

impl LimitResult {
    pub fn last_residual(&self) -> Option<f64> {
        self.residuals.last().copied()
    }
}

/// Scale sequence and stopping rule for limit processes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    /// First scale; subsequent scales are `eps0 · 2^-k`.
    pub eps0: f64,
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            eps0: 0.25,
            tol: 1e-6,
            max_terms: 40,
        }
    }
}

impl LimitOptions {
    pub fn new(eps0: f64, tol: f64) -> Self {
        LimitOptions {
            eps0,
            tol,
            ..Default::default()
        }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return domain(format!("eps0 must be positive, got {}", self.eps0));
        }
        if !(self.tol > 0.0) {
            return domain(format!("tolerance must be positive, got {}", self.tol));
        }
        if self.max_terms < 2 {
            return domain("at least two terms are needed for a limit");
        }
        Ok(())
    }

    /// `ε_k = eps0 · 2^-k`.
    pub fn scale(&self, k: usize) -> f64 {
        dyadic_scale(self.eps0, k)
    }
}

/// `eps0 · 2^-k`, exact in binary floating point.
pub fn dyadic_scale(eps0: f64, k: usize) -> f64 {
    eps0 * (-(k as f64)).exp2()
}

/// Number of consecutive residual increases that signals divergence.
const DIVERGENCE_RUN: usize = 3;

/// Divergence is not declared before this many terms, so that a
/// pre-asymptotic bump in the first coarse scales is not mistaken for it.
const MIN_TERMS_FOR_DIVERGENCE: usize = 10;

/// One Aitken Δ² step on the three most recent terms.
///
/// Only applied when the last two differences contract (|ratio| < 1);
/// otherwise the raw term is returned, so a growing sequence is never
/// mapped to a finite "antilimit".
fn aitken(v0: f64, v1: f64, v2: f64) -> f64 {
    let d1 = v1 - v0;
    let d2 = v2 - v1;
    let denom = d2 - d1;
    if d2 == 0.0 || d1 == 0.0 {
        return v2;
    }
    let ratio = d2 / d1;
    if !(ratio.abs() < 1.0) || denom.abs() <= 1e-14 * (d1.abs() + d2.abs()) {
        return v2;
    }
    let acc = v2 - d2 * d2 / denom;
    if acc.is_finite() {
        acc
    } else {
        v2
    }
}

/// Evaluates `seq(0), seq(1), ...`, accelerates with Aitken's Δ² process
/// (a Richardson step with the ratio estimated from the data) and stops
/// when two consecutive accelerated values differ by less than `tol`.
///
/// A run of three growing residuals, from the tenth term on, is reported
/// as divergence. In every
/// non-converged case the last accelerated value is still returned, with
/// `converged = false` and a diagnostic.
pub fn limit_extrapolate<F>(mut seq: F, tol: f64, max_terms: usize) -> Result<LimitResult>
where
    F: FnMut(usize) -> Result<f64>,
{
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    if max_terms < 2 {
        return domain("at least two terms are needed for a limit");
    }

    let mut raw: Vec<f64> = Vec::with_capacity(max_terms);
    let mut acc: Vec<f64> = Vec::with_capacity(max_terms);
    let mut residuals = Vec::with_capacity(max_terms);
    let mut growth_run = 0usize;

    for k in 0..max_terms {
        let v = seq(k)?;
        if !v.is_finite() {
            return Err(Error::Evaluation {
                at: k as f64,
                value: v,
            });
        }
        raw.push(v);
        let a = if k >= 2 {
            aitken(raw[k - 2], raw[k - 1], raw[k])
        } else {
            v
        };
        acc.push(a);
        if k == 0 {
            continue;
        }

        let r = (acc[k] - acc[k - 1]).abs();
        if let Some(&prev) = residuals.last() {
            if r > prev {
                growth_run += 1;
            } else {
                growth_run = 0;
            }
        }
        residuals.push(r);

        if r < tol {
            return Ok(LimitResult {
                value: a,
                converged: true,
                residuals,
                terms_used: k + 1,
                diagnostic: None,
            });
        }
        if growth_run >= DIVERGENCE_RUN && k + 1 >= MIN_TERMS_FOR_DIVERGENCE {
            return Ok(LimitResult {
                value: a,
                converged: false,
                residuals,
                terms_used: k + 1,
                diagnostic: Some(format!(
                    "residuals grew for {DIVERGENCE_RUN} consecutive terms (last {r:e})"
                )),
            });
        }
    }

    let value = *acc.last().expect("max_terms >= 2");
    let last = residuals.last().copied().unwrap_or(f64::NAN);
    Ok(LimitResult {
        value,
        converged: false,
        residuals,
        terms_used: max_terms,
        diagnostic: Some(format!(
            "no convergence within {max_terms} terms (last residual {last:e})"
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail() {
        let r = limit_extrapolate(|k| Ok(1.0 + (-(k as f64)).exp2()), 1e-8, 40).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
        assert!(r.last_residual().unwrap() < 1e-8);
    }

    #[test]
    fn linear_growth_does_not_converge() {
        let r = limit_extrapolate(|k| Ok(k as f64), 1e-8, 40).unwrap();
        assert!(!r.converged);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn exponential_growth_is_flagged_as_divergent() {
        let r = limit_extrapolate(|k| Ok((k as f64).exp2()), 1e-8, 40).unwrap();
        assert!(!r.converged);
        assert!(r.terms_used < 40);
        assert!(r.diagnostic.unwrap().contains("grew"));
    }

    #[test]
    fn early_bump_is_not_divergence() {
        // grows for the first few terms, then settles geometrically
        let seq = |k: usize| {
            Ok(if k < 5 {
                (k * k) as f64
            } else {
                16.0 + (-(k as f64)).exp2()
            })
        };
        let r = limit_extrapolate(seq, 1e-8, 60).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 16.0).abs() < 1e-8);
    }

    #[test]
    fn square_root_tail() {
        let r = limit_extrapolate(|k| Ok((1.0 + (-(k as f64)).exp2()).sqrt()), 1e-8, 40).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn constant_sequence_is_exact_after_two_terms() {
        let r = limit_extrapolate(|_| Ok(-3.25), 1e-12, 40).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, -3.25);
        assert_eq!(r.terms_used, 2);
    }

    #[test]
    fn non_finite_term_is_an_error() {
        let err = limit_extrapolate(
            |k| {
                Ok(if k == 3 {
                    f64::INFINITY
                } else {
                    1.0 / (k + 1) as f64
                })
            },
            1e-12,
            10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Evaluation { at, .. } if at == 3.0));
    }

    #[test]
    fn errors_from_sequence_propagate() {
        let err = limit_extrapolate(|_| Err(Error::Contract("boom".into())), 1e-6, 10).unwrap_err();
        assert_eq!(err, Error::Contract("boom".into()));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(limit_extrapolate(|_| Ok(1.0), 0.0, 10).is_err());
        assert!(limit_extrapolate(|_| Ok(1.0), 1e-6, 1).is_err());
    }

    #[test]
    fn dyadic_scales() {
        let o = LimitOptions::default();
        assert_eq!(o.scale(0), 0.25);
        assert_eq!(o.scale(3), 0.03125);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn constant_sequences_are_fixed_points(c in -1e6f64..1e6, tol in 1e-14f64..1.0) {
                let r = limit_extrapolate(|_| Ok(c), tol, 40).unwrap();
                prop_assert!(r.converged);
                prop_assert_eq!(r.value, c);
                prop_assert_eq!(r.terms_used, 2);
            }
        }
    }
}
