use super::{unit_fraction, DeRhamParams, DyadicNumber};
use crate::error::{domain, Result};
use crate::numeric::ExactScalar;
use crate::signal::Signal;

/// `R_a(x)` by `depth` applications of the functional equation, with the
/// argument doubled exactly in rational arithmetic.
///
/// Stops early on an exact 0 or 1. If the depth runs out first, the
/// remaining factor is applied to the identity, so the error is bounded
/// by `max(a, 1-a)^depth`; for `a = 1/2` the result is exact.
pub fn derham_eval_recursive(x: &ExactScalar, params: &DeRhamParams, depth: usize) -> Result<f64> {
    let (mut p, q) = unit_fraction(x)?;
    let a = params.a();
    let mut acc = 0.0;
    let mut mult = 1.0;
    for _ in 0..depth {
        if p == 0 {
            return Ok(acc);
        }
        if p == q {
            return Ok(acc + mult);
        }
        if 2 * p < q {
            mult *= a;
            p *= 2;
        } else {
            acc += mult * a;
            mult *= 1.0 - a;
            p = 2 * p - q;
        }
    }
    Ok(acc + mult * (p as f64 / q as f64))
}

/// Same recursion on a double. Doubling and subtracting one are exact in
/// binary floating point, so this agrees with [`derham_eval_recursive`]
/// on the exact value of `x`.
pub fn derham_eval(x: f64, params: &DeRhamParams, depth: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("De Rham function is defined on [0, 1], got {x}"));
    }
    let a = params.a();
    let mut x = x;
    let mut acc = 0.0;
    let mut mult = 1.0;
    for _ in 0..depth {
        if x == 0.0 {
            return Ok(acc);
        }
        if x == 1.0 {
            return Ok(acc + mult);
        }
        if x < 0.5 {
            mult *= a;
            x *= 2.0;
        } else {
            acc += mult * a;
            mult *= 1.0 - a;
            x = 2.0 * x - 1.0;
        }
    }
    Ok(acc + mult * x)
}

/// Finite Lomnicki–Ulam sum
/// `R_a(x) = a/(1-a) · Σ_k d_k a^(k - s_k) (1-a)^(s_k)`, `s_k = d_1 + … + d_k`.
///
/// Exact for terminating expansions. For truncated ones the error is at
/// most [`arithmetic_truncation_bound`].
pub fn derham_eval_arithmetic(x: &DyadicNumber, params: &DeRhamParams) -> f64 {
    let a = params.a();
    let lead = a / (1.0 - a);
    let mut s = 0i32;
    let mut sum = 0.0;
    for (i, &d) in x.digits().iter().enumerate() {
        let k = i as i32 + 1;
        s += d as i32;
        if d == 1 {
            sum += a.powi(k - s) * (1.0 - a).powi(s);
        }
    }
    lead * sum
}

/// `a/(1-a) · m^depth / (1 - m)` with `m = max(a, 1-a)`.
pub fn arithmetic_truncation_bound(params: &DeRhamParams, depth: usize) -> f64 {
    let a = params.a();
    let m = a.max(1.0 - a);
    a / (1.0 - a) * m.powi(depth as i32) / (1.0 - m)
}

/// `r_n(x, a)`: the De Rham recursion with weight `2^-a`, bottoming out at
/// `r_0(x) = x^a` instead of the identity. Converges to `R_{2^-a}(x)`.
pub fn rn_iterate(x: &ExactScalar, a_exp: f64, n: usize) -> Result<f64> {
    if !(a_exp > 0.0 && a_exp <= 1.0) {
        return domain(format!("exponent must lie in (0, 1], got {a_exp}"));
    }
    let (mut p, q) = unit_fraction(x)?;
    let w = (-a_exp).exp2();
    let mut acc = 0.0;
    let mut mult = 1.0;
    for _ in 0..n {
        if p == 0 {
            return Ok(acc);
        }
        if p == q {
            return Ok(acc + mult);
        }
        if 2 * p < q {
            mult *= w;
            p *= 2;
        } else {
            acc += mult * w;
            mult *= 1.0 - w;
            p = 2 * p - q;
        }
    }
    Ok(acc + mult * (p as f64 / q as f64).powf(a_exp))
}

/// `R_a` as a [`Signal`] on the whole line, continued by
/// `R(x + m) = m + R(x)` for integer `m` so that one-sided increments
/// near the endpoints are defined.
pub fn derham_signal(params: DeRhamParams, depth: usize) -> Signal {
    Signal::new(move |x: f64| {
        if !x.is_finite() {
            return f64::NAN;
        }
        let m = x.floor();
        let frac = x - m;
        match derham_eval(frac, &params, depth) {
            Ok(v) => m + v,
            Err(_) => f64::NAN,
        }
    })
    .labeled(format!("derham:{}@{}", params.a(), depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham::dyadic_expand;

    fn params(a: f64) -> DeRhamParams {
        DeRhamParams::for_evaluation(a).unwrap()
    }

    fn dy(p: i128, k: u32) -> ExactScalar {
        ExactScalar::dyadic(p, k).unwrap()
    }

    #[test]
    fn half_maps_to_weight() {
        for &a in &[0.1, 0.25, 0.7] {
            assert_eq!(derham_eval_recursive(&dy(1, 1), &params(a), 10).unwrap(), a);
        }
    }

    #[test]
    fn quarter_points() {
        let a = 0.3;
        let p = params(a);
        let q1 = derham_eval_recursive(&dy(1, 2), &p, 10).unwrap();
        let q3 = derham_eval_recursive(&dy(3, 2), &p, 10).unwrap();
        assert!((q1 - a * a).abs() < 1e-16);
        assert!((q3 - (2.0 * a - a * a)).abs() < 1e-16);
    }

    #[test]
    fn fair_coin_is_identity() {
        let x = ExactScalar::from_f64(0.3137).unwrap();
        let v = derham_eval_recursive(&x, &params(0.5), 40).unwrap();
        assert!((v - 0.3137).abs() < 1e-12);
    }

    #[test]
    fn endpoints_are_exact() {
        for &a in &[0.2, 0.5, 0.8] {
            assert_eq!(
                derham_eval_recursive(&ExactScalar::integer(0), &params(a), 5).unwrap(),
                0.0
            );
            assert_eq!(
                derham_eval_recursive(&ExactScalar::integer(1), &params(a), 5).unwrap(),
                1.0
            );
            assert_eq!(derham_eval(0.0, &params(a), 5).unwrap(), 0.0);
            assert_eq!(derham_eval(1.0, &params(a), 5).unwrap(), 1.0);
        }
    }

    #[test]
    fn arithmetic_single_and_double_digit() {
        let a = 0.35;
        let p = params(a);
        let half = dyadic_expand(&dy(1, 1), 1).unwrap();
        assert!((derham_eval_arithmetic(&half, &p) - a).abs() < 1e-16);
        let three_quarters = dyadic_expand(&dy(3, 2), 2).unwrap();
        let rec = derham_eval_recursive(&dy(3, 2), &p, 2).unwrap();
        assert!((derham_eval_arithmetic(&three_quarters, &p) - rec).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_five_eighths_quarter_weight() {
        // 0.101₂ with a = 1/4: a + a²(1 - a) = 0.296875
        let p = params(0.25);
        let d = dyadic_expand(&dy(5, 3), 3).unwrap();
        let rec = derham_eval_recursive(&dy(5, 3), &p, 30).unwrap();
        assert_eq!(rec, 0.296875);
        assert!((derham_eval_arithmetic(&d, &p) - rec).abs() < 1e-15);
    }

    #[test]
    fn truncated_arithmetic_within_bound() {
        let x = ExactScalar::rational(1, 3).unwrap();
        for &a in &[0.2, 0.6] {
            let p = params(a);
            let exact = derham_eval_recursive(&x, &p, 200).unwrap();
            for depth in [4, 10, 20] {
                let d = dyadic_expand(&x, depth).unwrap();
                let err = (derham_eval_arithmetic(&d, &p) - exact).abs();
                assert!(
                    err <= arithmetic_truncation_bound(&p, depth),
                    "a={a} depth={depth}"
                );
            }
        }
    }

    #[test]
    fn recursive_error_bound() {
        let x = ExactScalar::rational(2, 7).unwrap();
        let p = params(0.3);
        let exact = derham_eval_recursive(&x, &p, 400).unwrap();
        for depth in [1, 5, 12] {
            let v = derham_eval_recursive(&x, &p, depth).unwrap();
            assert!((v - exact).abs() <= 0.7f64.powi(depth as i32));
        }
    }

    #[test]
    fn float_path_matches_exact_path() {
        let p = params(0.37);
        for i in 0..=64 {
            let x = i as f64 / 64.0;
            let a = derham_eval(x, &p, 30).unwrap();
            let b = derham_eval_recursive(&ExactScalar::from_f64(x).unwrap(), &p, 30).unwrap();
            assert_eq!(a, b);
        }
        assert!(derham_eval(1.5, &p, 10).is_err());
    }

    #[test]
    fn signal_extension() {
        let p = params(0.25);
        let s = derham_signal(p, 30);
        assert_eq!(s.eval(1.5).unwrap(), 1.25);
        assert_eq!(s.eval(-0.5).unwrap(), -0.75);
        assert_eq!(s.eval(0.5).unwrap(), 0.25);
    }

    #[test]
    fn rn_base_case() {
        let v = rn_iterate(&dy(1, 2), 0.5, 0).unwrap();
        assert!((v - 0.5).abs() < 1e-16);
    }

    #[test]
    fn rn_unit_exponent_is_identity() {
        for n in [0, 3, 17] {
            for &(p, q) in &[(1, 3), (5, 8), (9, 10)] {
                let x = ExactScalar::rational(p, q).unwrap();
                let v = rn_iterate(&x, 1.0, n).unwrap();
                assert!((v - x.value()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rn_tracks_derham() {
        let a_exp: f64 = 0.7;
        let w = (-a_exp).exp2();
        let p = params(w);
        let x = dy(5, 3);
        let r = rn_iterate(&x, a_exp, 12).unwrap();
        let oracle = derham_eval_recursive(&x, &p, 12).unwrap();
        assert!((r - oracle).abs() <= w.max(1.0 - w).powi(12));
        assert!(rn_iterate(&x, 0.0, 3).is_err());
        assert!(rn_iterate(&x, 1.2, 3).is_err());
    }
}
