use super::unit_fraction;
use crate::error::{domain, Result};
use crate::numeric::ExactScalar;

/// Truncated binary expansion `0.d_1 d_2 … d_n` of a number in `[0, 1]`.
///
/// `1` is expanded as `0.111…` (the branch the functional equation takes
/// at `x = 1`), so its expansion is non-terminating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicNumber {
    digits: Vec<u8>,
    terminating: bool,
}

impl DyadicNumber {
    /// Builds an expansion from explicit digits (most significant first).
    pub fn from_digits(digits: Vec<u8>, terminating: bool) -> Result<Self> {
        if digits.iter().any(|&d| d > 1) {
            return domain("binary digits must be 0 or 1");
        }
        Ok(DyadicNumber {
            digits,
            terminating,
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// True when no nonzero digits follow the stored ones.
    pub fn is_terminating(&self) -> bool {
        self.terminating
    }

    /// `s_n = Σ d_k`.
    pub fn digit_sum(&self) -> u32 {
        self.digits.iter().map(|&d| d as u32).sum()
    }

    /// `Σ d_k 2^-k`.
    pub fn value(&self) -> f64 {
        let mut v = 0.0;
        let mut w = 0.5;
        for &d in &self.digits {
            if d == 1 {
                v += w;
            }
            w *= 0.5;
        }
        v
    }

    /// 1-based position of the last digit 1, if any.
    pub fn last_one(&self) -> Option<usize> {
        self.digits.iter().rposition(|&d| d == 1).map(|i| i + 1)
    }
}

/// Binary expansion of `x ∈ [0, 1]` to `depth` places, truncated (never
/// rounded). `terminating` is true iff `x = p/2^k` with `k ≤ depth`.
pub fn dyadic_expand(x: &ExactScalar, depth: usize) -> Result<DyadicNumber> {
    if depth == 0 {
        return domain("expansion depth must be at least 1");
    }
    let (mut p, q) = unit_fraction(x)?;
    if p == q {
        return Ok(DyadicNumber {
            digits: vec![1; depth],
            terminating: false,
        });
    }
    let mut digits = Vec::with_capacity(depth);
    for _ in 0..depth {
        p *= 2;
        if p >= q {
            digits.push(1);
            p -= q;
        } else {
            digits.push(0);
        }
    }
    Ok(DyadicNumber {
        digits,
        terminating: p == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_eighths() {
        let d = dyadic_expand(&ExactScalar::dyadic(5, 3).unwrap(), 4).unwrap();
        assert_eq!(d.digits(), &[1, 0, 1, 0]);
        assert_eq!(d.digit_sum(), 2);
        assert!(d.is_terminating());
        assert_eq!(d.value(), 0.625);
        assert_eq!(d.last_one(), Some(3));
    }

    #[test]
    fn one_third_does_not_terminate() {
        let d = dyadic_expand(&ExactScalar::rational(1, 3).unwrap(), 6).unwrap();
        assert_eq!(d.digits(), &[0, 1, 0, 1, 0, 1]);
        assert!(!d.is_terminating());
        // truncation, never rounding up
        assert!(d.value() < 1.0 / 3.0);
    }

    #[test]
    fn one_half_single_digit() {
        let d = dyadic_expand(&ExactScalar::dyadic(1, 1).unwrap(), 1).unwrap();
        assert_eq!(d.digits(), &[1]);
        assert_eq!(d.digit_sum(), 1);
        assert!(d.is_terminating());
    }

    #[test]
    fn terminating_only_within_depth() {
        let x = ExactScalar::dyadic(3, 5).unwrap();
        assert!(!dyadic_expand(&x, 4).unwrap().is_terminating());
        assert!(dyadic_expand(&x, 5).unwrap().is_terminating());
    }

    #[test]
    fn endpoints() {
        let zero = dyadic_expand(&ExactScalar::integer(0), 3).unwrap();
        assert_eq!(zero.digits(), &[0, 0, 0]);
        assert!(zero.is_terminating());
        let one = dyadic_expand(&ExactScalar::integer(1), 3).unwrap();
        assert_eq!(one.digits(), &[1, 1, 1]);
        assert!(!one.is_terminating());
    }

    #[test]
    fn rejects_outside_unit_interval() {
        assert!(dyadic_expand(&ExactScalar::dyadic(3, 1).unwrap(), 4).is_err());
        assert!(dyadic_expand(&ExactScalar::dyadic(-1, 2).unwrap(), 4).is_err());
        assert!(dyadic_expand(&ExactScalar::dyadic(1, 2).unwrap(), 0).is_err());
    }
}
