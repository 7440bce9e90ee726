use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};

/// Exact rational scalar, stored either as `p/q` or as the dyadic `p/2^k`.
///
/// Both forms are kept in lowest terms. Denominators are limited to 127
/// bits, which covers every finite `f64` in `[2^-74, 2^53]` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactScalar {
    Rational { p: i128, q: u128 },
    Dyadic { p: i128, k: u32 },
}

const MAX_DYADIC_EXP: u32 = 126;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl ExactScalar {
    /// `p/q`, reduced. Fails when `q = 0`.
    pub fn rational(p: i128, q: u128) -> Result<Self> {
        if q == 0 {
            return domain("rational with zero denominator");
        }
        let g = gcd(p.unsigned_abs(), q).max(1);
        Ok(ExactScalar::Rational {
            p: p / g as i128,
            q: q / g,
        })
    }

    /// `p/2^k`, reduced.
    pub fn dyadic(p: i128, k: u32) -> Result<Self> {
        if k > MAX_DYADIC_EXP {
            return domain(format!("dyadic exponent {k} exceeds {MAX_DYADIC_EXP}"));
        }
        let (mut p, mut k) = (p, k);
        while k > 0 && p % 2 == 0 {
            p /= 2;
            k -= 1;
        }
        Ok(ExactScalar::Dyadic { p, k })
    }

    pub fn integer(p: i128) -> Self {
        ExactScalar::Dyadic { p, k: 0 }
    }

    /// The exact value of a finite double, as a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return domain(format!("{x} is not finite"));
        }
        if x == 0.0 {
            return Ok(Self::integer(0));
        }
        let bits = x.to_bits();
        let sign: i128 = if bits >> 63 == 0 { 1 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i128 << 52), exp - 1075)
        };
        if e >= 0 {
            if e > 70 {
                return domain(format!("{x} is too large for an exact scalar"));
            }
            return Ok(Self::integer(sign * (mantissa << e)));
        }
        let mut m = mantissa;
        let mut k = (-e) as u32;
        while k > 0 && m % 2 == 0 {
            m /= 2;
            k -= 1;
        }
        Self::dyadic(sign * m, k)
    }

    /// Numerator and (positive) denominator in lowest terms.
    pub fn fraction(&self) -> (i128, u128) {
        match *self {
            ExactScalar::Rational { p, q } => (p, q),
            ExactScalar::Dyadic { p, k } => (p, 1u128 << k),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            ExactScalar::Rational { p, q } => p as f64 / q as f64,
            ExactScalar::Dyadic { p, k } => p as f64 * (-(k as f64)).exp2(),
        }
    }

    /// `Some(k)` when the value equals `p/2^k` in lowest terms.
    pub fn dyadic_exponent(&self) -> Option<u32> {
        let (_, q) = self.fraction();
        q.is_power_of_two().then(|| q.trailing_zeros())
    }

    pub fn is_dyadic(&self) -> bool {
        self.dyadic_exponent().is_some()
    }

    /// True when `0 ≤ self ≤ 1`.
    pub fn in_unit_interval(&self) -> bool {
        let (p, q) = self.fraction();
        p >= 0 && p.unsigned_abs() <= q
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        // Cross-multiplication in i128 is exact when both denominators fit
        // comfortably, which holds for everything this crate constructs.
        let (a, b) = self.fraction();
        let (c, d) = other.fraction();
        match (a.checked_mul(d as i128), c.checked_mul(b as i128)) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => self.value().total_cmp(&other.value()),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExactScalar::Rational { p, q } => write!(f, "{p}/{q}"),
            ExactScalar::Dyadic { p, k } => write!(f, "{p}/2^{k}"),
        }
    }
}
