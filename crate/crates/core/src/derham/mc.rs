use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dyadic_expand;
use crate::error::{domain, Result};
use crate::numeric::ExactScalar;

/// Fraction of simulated records `t ≤ x` and its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Estimates `R_a(x) = P{t ≤ x}` where `t = 0.d_1 d_2 …` is a record of
/// coin flips.
///
/// A flip lands heads with probability `a`; heads is recorded as digit 0
/// and tails as digit 1, so `P{d_1 = 0} = a = R_a(1/2)`. Records are
/// compared with `x` digit by digit over the first `flips` places, which
/// avoids rounding `t` to a double. The stream is ChaCha8 seeded with
/// `seed`, so results are reproducible across platforms.
pub fn mc_derham_estimate(
    x: f64,
    a: f64,
    trials: usize,
    flips: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("x must lie in [0, 1], got {x}"));
    }
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("a must lie in (0, 1), got {a}"));
    }
    if trials == 0 || flips == 0 {
        return domain("trials and flips must be at least 1");
    }
    let target = dyadic_expand(&ExactScalar::from_f64(x)?, flips)?;
    let target = target.digits();
    let p_one = 1.0 - a;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut below_or_equal = true;
        for &xd in target {
            let td = u8::from(rng.random_bool(p_one));
            if td != xd {
                below_or_equal = td < xd;
                break;
            }
        }
        if below_or_equal {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    Ok(McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_event_at_one() {
        for &a in &[0.2, 0.5, 0.9] {
            let r = mc_derham_estimate(1.0, a, 1000, 32, 7).unwrap();
            assert_eq!(r.estimate, 1.0);
            assert_eq!(r.stderr, 0.0);
        }
    }

    #[test]
    fn fair_coin_at_half() {
        let r = mc_derham_estimate(0.5, 0.5, 100_000, 53, 0).unwrap();
        assert!((r.estimate - 0.5).abs() < 3.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn biased_coin_at_half() {
        let r = mc_derham_estimate(0.5, 0.25, 100_000, 53, 0).unwrap();
        assert!((r.estimate - 0.25).abs() < 3.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn reproducible_for_seed() {
        let a = mc_derham_estimate(0.3, 0.4, 5000, 40, 42).unwrap();
        let b = mc_derham_estimate(0.3, 0.4, 5000, 40, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(mc_derham_estimate(1.5, 0.3, 10, 10, 0).is_err());
        assert!(mc_derham_estimate(0.5, 1.0, 10, 10, 0).is_err());
        assert!(mc_derham_estimate(0.5, 0.3, 0, 10, 0).is_err());
        assert!(mc_derham_estimate(0.5, 0.3, 10, 0, 0).is_err());
    }
}
