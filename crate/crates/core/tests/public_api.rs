use scalespace_core::derham::{derham_eval_recursive, derham_signal, dn_recursion, DeRhamParams};
use scalespace_core::fraccalc::{caputo_derivative, rl_integral, QuadratureSpec};
use scalespace_core::numeric::gamma;
use scalespace_core::scaleops::{fractional_velocity, increment_velocity, Side};
use scalespace_core::{ExactScalar, FracOrder, LimitOptions, Signal};

#[test]
fn derham_signal_matches_exact_evaluation() {
    let p = DeRhamParams::new(0.3).unwrap();
    let f = derham_signal(p, 40);
    for k in 0..=32 {
        let x = ExactScalar::dyadic(k, 5).unwrap();
        let exact = derham_eval_recursive(&x, &p, 40).unwrap();
        assert!((f.call(x.value()) - exact).abs() < 1e-15);
    }
}

#[test]
fn dyadic_velocity_follows_dn_recursion() {
    let p = DeRhamParams::new(0.4).unwrap();
    let f = derham_signal(p, 30);
    let opts = LimitOptions::new(1.0 / 8.0, 1e-6);
    for k in 1..8 {
        let x = ExactScalar::dyadic(k, 3).unwrap();
        let v = increment_velocity(&f, x.value(), p.beta(), Side::Forward, &opts).unwrap();
        let d = dn_recursion(&x, p.beta(), 3).unwrap();
        assert!(v.converged);
        assert!((v.value / d - 1.0).abs() < 1e-6, "{x}: {} vs {d}", v.value);
    }
}

#[test]
fn power_law_velocity_from_parsed_signal() {
    let f = Signal::parse("pow:0.25").unwrap();
    let order = FracOrder::fractional(0.25).unwrap();
    let v = fractional_velocity(
        &f,
        0.0,
        order,
        Side::Forward,
        &LimitOptions::new(0.5, 1e-10),
    )
    .unwrap();
    assert!(v.converged());
    assert!((v.value() - 1.0).abs() < 1e-12);
}

#[test]
fn square_matches_closed_forms() {
    // I^β t² = 2 t^(2+β) / Γ(3+β), C^β t² = 2 t^(2-β) / Γ(3-β)
    let f = Signal::parse("poly:1,0,0").unwrap();
    let beta = 0.4;
    let spec = QuadratureSpec::new(0.0, 0.8, 1025).unwrap();
    let i = rl_integral(&f, beta, &spec).unwrap();
    let exact = 2.0 / gamma(3.0 + beta).unwrap() * 0.8f64.powf(2.0 + beta);
    assert!((i - exact).abs() < 1e-6);
    let c = caputo_derivative(&f, beta, &spec).unwrap();
    let exact = 2.0 / gamma(3.0 - beta).unwrap() * 0.8f64.powf(2.0 - beta);
    assert!((c - exact).abs() < 1e-5);
}
