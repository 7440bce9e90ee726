use std::fmt;

use crate::error::{domain, Result};

/// Mixed differentiation order `n + β` with `n ≥ 0` and `0 < β ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    n: u32,
    beta: f64,
}

impl FracOrder {
    pub fn new(n: u32, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return domain(format!("fractional part must lie in (0, 1], got {beta}"));
        }
        Ok(FracOrder { n, beta })
    }

    /// Purely fractional order `β` (integer part zero).
    pub fn fractional(beta: f64) -> Result<Self> {
        Self::new(0, beta)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn total(&self) -> f64 {
        self.n as f64 + self.beta
    }

    /// `{n + β}`; zero when `β = 1`.
    pub fn frac_part(&self) -> f64 {
        let t = self.total();
        t - t.floor()
    }

    /// `1 / (1 - {n + β})`, which is 1 for integer orders.
    pub fn normalizer(&self) -> f64 {
        1.0 / (1.0 - self.frac_part())
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            write!(f, "{}", self.beta)
        } else {
            write!(f, "{}+{}", self.n, self.beta)
        }
    }
}

/// `{β}` for a bare real order, with `{1} = 0`.
pub(crate) fn frac_part(beta: f64) -> f64 {
    beta - beta.floor()
}
