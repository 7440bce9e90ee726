//! Acceptance criteria, one function each.

use std::fmt::Write as _;
use std::time::Instant;

use clap::Parser;
use scalespace_core::derham::{
    derham_eval_recursive, derham_signal, derham_velocity_exact, dyadic_expand, mc_derham_estimate,
    DeRhamParams,
};
use scalespace_core::fraccalc::{
    bridge_theorem_check, inversion_check, BridgeForm, QuadratureSpec,
};
use scalespace_core::scaleops::{
    fractional_velocity, fracvar, holder_exponent, increment_velocity, limit_equivalence_check,
    Side,
};
use scalespace_core::{Error, ExactScalar, FracOrder, LimitOptions, Signal};

use crate::commands::{run, Cli};
use crate::output::{Cell, Report};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: u32, name: &'static str, r: Result<(bool, String), Error>) -> Outcome {
    let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        name,
        passed,
        detail,
    }
}

pub fn run_all() -> Vec<Outcome> {
    vec![
        exact_velocity_table(),
        numeric_velocity_table(),
        off_dyadic_vanishing(),
        scale_invariance(),
        equivalence(),
        bridge(),
        inversion(),
        holder(),
        monte_carlo(),
        figure_shapes(),
    ]
}

pub fn report(outcomes: &[Outcome]) -> Report {
    let mut r = Report::new("acceptance", &["criterion", "name", "passed", "detail"]);
    for o in outcomes {
        r.push(vec![
            o.id.into(),
            o.name.into(),
            o.passed.into(),
            Cell::Text(o.detail.clone()),
        ]);
    }
    r
}

pub fn lines(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(s, "{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", outcomes.len());
    s
}

fn depth4_dyadics() -> impl Iterator<Item = ExactScalar> {
    (1..16).map(|i| ExactScalar::dyadic(i, 4).expect("valid dyadic"))
}

fn digit_sum(x: &ExactScalar) -> Result<u32, Error> {
    Ok(dyadic_expand(x, 4)?.digit_sum())
}

pub fn exact_velocity_table() -> Outcome {
    outcome(
        1,
        "De Rham exact-velocity table",
        (|| {
            let p = DeRhamParams::new(0.25)?;
            let mut bad = Vec::new();
            for x in depth4_dyadics() {
                let s = digit_sum(&x)?;
                let expected = 3u64.pow(s - 1) as f64;
                let v = derham_velocity_exact(&x, &p, 4)?;
                if v != expected {
                    bad.push(format!("{x}: {v} != {expected}"));
                }
            }
            Ok(if bad.is_empty() {
                (
                    true,
                    "15 dyadics, values 3^(s-1) in {1, 3, 9, 27} exactly".into(),
                )
            } else {
                (false, bad.join("; "))
            })
        })(),
    )
}

pub fn numeric_velocity_table() -> Outcome {
    outcome(
        2,
        "Numeric/closed-form agreement",
        (|| {
            let opts = LimitOptions::new(1.0 / 16.0, 1e-6);
            let mut passed = true;
            let mut parts = Vec::new();
            for a in [0.25, 0.3, 0.4] {
                let p = DeRhamParams::new(a)?;
                let f = derham_signal(p, 30);
                let mut worst: f64 = 0.0;
                let mut ratio_sum = 0.0;
                for x in depth4_dyadics() {
                    let exact = derham_velocity_exact(&x, &p, 4)?;
                    let v = increment_velocity(&f, x.value(), p.beta(), Side::Forward, &opts)?;
                    if !v.converged {
                        passed = false;
                    }
                    worst = worst.max((v.value / exact - 1.0).abs());
                    ratio_sum += v.value / exact;
                }
                passed &= worst <= 0.05;
                parts.push(format!(
                    "a={a}: max rel err {worst:.3e}, mean ratio {:.4}",
                    ratio_sum / 15.0
                ));
            }
            Ok((passed, parts.join("; ") + " (tol 5e-2)"))
        })(),
    )
}

pub fn off_dyadic_vanishing() -> Outcome {
    outcome(
        3,
        "Off-dyadic vanishing",
        (|| {
            let opts = LimitOptions::new(1.0 / 16.0, 1e-6);
            let mut passed = true;
            let mut parts = Vec::new();
            for a in [0.6, 0.7, 0.8] {
                let p = DeRhamParams::new(a)?;
                let f = derham_signal(p, 24);
                let order = FracOrder::fractional(p.beta())?;
                for x in [1.0 / 3.0, 1.0 / 5.0] {
                    let v = fractional_velocity(&f, x, order, Side::Forward, &opts)?;
                    let ok = v.converged() && v.value().abs() <= 1e-3;
                    passed &= ok;
                    parts.push(format!(
                        "a={a} x={x:.4}: {:.2e}{}",
                        v.value(),
                        if ok { "" } else { " (!)" }
                    ));
                }
            }
            let mut info = Vec::new();
            for a in [0.25, 0.3, 0.4] {
                let p = DeRhamParams::new(a)?;
                let f = derham_signal(p, 24);
                for x in [1.0 / 3.0, 1.0 / 5.0] {
                    let v = increment_velocity(&f, x, p.beta(), Side::Forward, &opts)?;
                    info.push(format!(
                        "a={a} x={x:.4}: {:.2e}{}",
                        v.value,
                        if v.converged { "" } else { " not converged" }
                    ));
                }
            }
            Ok((
                passed,
                format!(
                    "{} (tol 1e-3); not gated, a < 1/2: {}",
                    parts.join(", "),
                    info.join(", ")
                ),
            ))
        })(),
    )
}

pub fn scale_invariance() -> Outcome {
    outcome(
        4,
        "Scale invariance",
        (|| {
            let f = Signal::parse("pow:0.5")?;
            let order = FracOrder::fractional(0.5)?;
            let mut worst: f64 = 0.0;
            for eps in [0.5, 0.1, 0.01, 0.001] {
                worst = worst.max((fracvar(&f, 0.0, order, eps, Side::Forward)? - 1.0).abs());
            }
            Ok((
                worst <= 1e-12,
                format!("max |fracvar - 1| = {worst:.2e} (tol 1e-12)"),
            ))
        })(),
    )
}

pub fn equivalence() -> Outcome {
    outcome(
        5,
        "Limit equivalence",
        (|| {
            let opts = LimitOptions::new(0.25, 1e-7);
            let mut passed = true;
            let mut worst: f64 = 0.0;
            let mut failures = Vec::new();
            for spec in ["poly:1,0,0", "exp", "poly:1,0,1,0"] {
                let f = Signal::parse(spec)?;
                for beta in [0.25, 0.5, 0.75] {
                    let c = limit_equivalence_check(&f, 1.0, beta, &opts)?;
                    let diff = (c.v_frac.value - c.v_scale.value).abs();
                    let ok = c.v_frac.converged && c.v_scale.converged && diff < 1e-5;
                    worst = worst.max(diff);
                    if !ok {
                        passed = false;
                        failures.push(format!("{spec} beta={beta}: diff {diff:.2e}"));
                    }
                }
            }
            let mut detail = format!("9 cases, max |v_frac - v_scale| = {worst:.2e} (tol 1e-5)");
            if !failures.is_empty() {
                detail = format!("{detail}; {}", failures.join("; "));
            }
            Ok((passed, detail))
        })(),
    )
}

pub fn bridge() -> Outcome {
    outcome(
        6,
        "Bridge theorem",
        (|| {
            let start = Instant::now();
            let mut passed = true;
            let mut parts = Vec::new();
            for spec in ["poly:1,0", "poly:1"] {
                let f = Signal::parse(spec)?;
                let mut residuals = Vec::new();
                for nodes in [256, 512, 1024, 2048] {
                    let q = QuadratureSpec::new(0.0, 0.5, nodes)?;
                    residuals.push(
                        bridge_theorem_check(&f, 0.3, 0.6, 0.05, &q, BridgeForm::Theorem)?.residual,
                    );
                }
                let last = *residuals.last().expect("four runs");
                let small = last < 1e-3;
                let decreasing = residuals.windows(2).all(|w| w[1] <= 1.2 * w[0]);
                passed &= small && decreasing;
                let shown: Vec<String> = residuals.iter().map(|r| format!("{r:.2e}")).collect();
                parts.push(format!(
                    "{spec}: [{}] at 256..2048 nodes, final<1e-3 {}, decreasing {}",
                    shown.join(", "),
                    small,
                    decreasing
                ));
            }
            let secs = start.elapsed().as_secs_f64();
            passed &= secs < 10.0;
            Ok((passed, format!("{}; {secs:.2} s", parts.join("; "))))
        })(),
    )
}

pub fn inversion() -> Outcome {
    outcome(
        7,
        "Inversion identities",
        (|| {
            let mut passed = true;
            let mut parts = Vec::new();
            for spec in ["poly:1,0,0", "sin"] {
                let f = Signal::parse(spec)?;
                for (nodes, tol) in [(512, 5e-3), (2048, 2.5e-3)] {
                    let r = inversion_check(&f, 0.5, &QuadratureSpec::new(0.0, 1.0, nodes)?)?;
                    let worst = r.left.max(r.right);
                    passed &= worst < tol;
                    parts.push(format!(
                        "{spec} n={nodes}: {:.2e}/{:.2e} (tol {tol:e})",
                        r.left, r.right
                    ));
                }
            }
            Ok((passed, format!("beta=0.5 on [0,1]; {}", parts.join(", "))))
        })(),
    )
}

pub fn holder() -> Outcome {
    outcome(
        8,
        "Hölder recovery",
        (|| {
            let p = DeRhamParams::new(0.25)?;
            let cases = [
                (Signal::parse("abs-pow:0.5@0")?, 0.5, 0.02, "|t|^0.5"),
                (Signal::parse("poly:1,0")?, 1.0, 0.02, "t"),
                (derham_signal(p, 40), p.beta(), 0.1, "R_0.25"),
            ];
            let mut passed = true;
            let mut parts = Vec::new();
            for (f, expected, tol, label) in cases {
                let h = holder_exponent(&f, 0.0, (1e-6, 1e-2), 20, Side::Forward)?;
                passed &= (h.alpha_hat - expected).abs() <= tol;
                parts.push(format!(
                    "{label}: {:.4} (want {expected} ± {tol})",
                    h.alpha_hat
                ));
            }
            Ok((passed, parts.join(", ")))
        })(),
    )
}

pub fn monte_carlo() -> Outcome {
    outcome(
        9,
        "Monte Carlo construction",
        (|| {
            let mut passed = true;
            let mut worst: f64 = 0.0;
            for a in [0.25, 0.5] {
                let p = DeRhamParams::for_evaluation(a)?;
                for x in [0.25, 0.5, 0.75] {
                    let m = mc_derham_estimate(x, a, 100_000, 53, 0)?;
                    let exact = derham_eval_recursive(&ExactScalar::from_f64(x)?, &p, 64)?;
                    let z = (m.estimate - exact).abs() / m.stderr;
                    passed &= z <= 3.0;
                    worst = worst.max(z);
                }
            }
            Ok((
                passed,
                format!("6 cases, max |z| = {worst:.3} (tol 3 standard errors)"),
            ))
        })(),
    )
}

fn subcommand(args: &[&str]) -> Result<Report, Error> {
    let cli = Cli::try_parse_from(std::iter::once("scalespace").chain(args.iter().copied()))
        .map_err(|e| Error::Contract(e.to_string()))?;
    Ok(run(&cli)?.report)
}

fn column(r: &Report, name: &str) -> Vec<f64> {
    let i = r
        .columns
        .iter()
        .position(|c| c == name)
        .expect("known column");
    r.rows
        .iter()
        .map(|row| match row[i] {
            Cell::Float(v) => v,
            _ => f64::NAN,
        })
        .collect()
}

pub fn figure_shapes() -> Outcome {
    outcome(
        10,
        "Figure-shape checks",
        (|| {
            let mut problems = Vec::new();
            for a_exp in ["0.5", "1", "2"] {
                let fine = column(
                    &subcommand(&["dn-profile", "--a-exp", a_exp, "--k", "8", "--grid", "256"])?,
                    "dn",
                );
                let coarse = column(
                    &subcommand(&["dn-profile", "--a-exp", a_exp, "--k", "4", "--grid", "256"])?,
                    "dn",
                );
                for i in (0..256).step_by(16) {
                    if fine[i] != coarse[i] {
                        problems.push(format!(
                            "dn a={a_exp} x={}/256: {} != {}",
                            i, fine[i], coarse[i]
                        ));
                    }
                }
            }
            for a in ["0.25", "0.5", "0.2", "0.7"] {
                let r = subcommand(&["derham-eval", "--a", a, "--grid", "256", "--depth", "24"])?;
                let v = column(&r, "value");
                let av: f64 = a.parse().expect("literal");
                if !v.windows(2).all(|w| w[0] <= w[1]) {
                    problems.push(format!("derham-eval a={a} not monotone"));
                }
                if v[0] != 0.0 || v[128] != av || v[256] != 1.0 {
                    problems.push(format!(
                        "derham-eval a={a} endpoints {} {} {}",
                        v[0], v[128], v[256]
                    ));
                }
            }
            Ok(if problems.is_empty() {
                (
                true,
                "d_8 refines d_4 at depth-4 dyadics; R_a monotone with exact (0,0), (1/2,a), (1,1)".into(),
            )
            } else {
                (false, problems.join("; "))
            })
        })(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let o = Outcome {
            id: 4,
            name: "demo",
            passed: false,
            detail: "x".into(),
        };
        assert_eq!(o.line(), "FAIL [ 4] demo: x");
    }

    #[test]
    fn errors_become_failures() {
        let o = outcome(1, "demo", Err(Error::Domain("bad".into())));
        assert!(!o.passed);
        assert!(o.detail.contains("bad"));
    }

    #[test]
    fn summary_counts_passes() {
        let mk = |passed| Outcome {
            id: 1,
            name: "n",
            passed,
            detail: String::new(),
        };
        assert!(lines(&[mk(true), mk(false)]).ends_with("1/2 criteria passed\n"));
    }
}
