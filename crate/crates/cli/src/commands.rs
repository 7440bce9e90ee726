//! Command-line definitions and the runner for each subcommand.
//!
//! All quantities are dimensionless reals unless noted; counts are
//! integers. Signals use the grammar `poly:c_n,...,c_0`, `pow:α`,
//! `abs-pow:α@x0`, `derham:a@depth`, `sin`, `exp`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use scalespace_core::derham::{
    derham_eval_recursive, derham_signal, derham_velocity_exact, dn_normalized, dn_recursion,
    dyadic_expand, mc_derham_estimate, rn_iterate, scale_regularizing_sequence, DeRhamParams,
};
use scalespace_core::fraccalc::{
    bridge_theorem_check, caputo_derivative, inversion_check, limit_proposition_check,
    rl_derivative, rl_integral, BridgeForm, QuadratureSpec,
};
use scalespace_core::scaleops::{
    fractional_velocity, fracvar, holder_exponent, increment_velocity, limit_equivalence_check,
    scale_velocity, set_of_change_scan, Side, DEFAULT_CHANGE_THRESHOLD,
};
use scalespace_core::{Error, ExactScalar, FracOrder, LimitOptions, LimitResult, Signal};

use crate::acceptance;
use crate::output::{Cell, Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "scalespace",
    version,
    about = "Fractional velocities, scale velocities and fractional differ-integrals of singular signals",
    after_help = "Exit codes: 0 success, 1 domain or contract error, 2 a required limit did not converge, 64 usage."
)]
pub struct Cli {
    /// Output format (CSV: header row then one row per result; JSON: one object)
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Random seed for Monte Carlo subcommands (integer)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate De Rham's function R_a on a uniform grid of [0, 1].
    #[command(after_help = "CSV columns: x,value")]
    DerhamEval {
        /// Weight a in (0, 1) (dimensionless; 1/2 gives the identity)
        #[arg(long, default_value_t = 0.25)]
        a: f64,
        /// Number of grid cells; emits grid + 1 rows (count)
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Applications of the functional equation (count)
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },

    /// Closed-form velocity of R_a at every interior dyadic of a depth.
    #[command(after_help = "CSV columns: x,digit_sum,value[,numeric,converged]")]
    DerhamVelocity {
        /// Weight a in (0, 1), a != 1/2 (dimensionless); order is -log2 a
        #[arg(long, default_value_t = 0.25)]
        a: f64,
        /// Dyadic depth n; rows are k/2^n for 0 < k < 2^n (count)
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Also estimate the velocity numerically along eps = 2^-k
        #[arg(long)]
        numeric: bool,
        /// Evaluation depth of the signal used by --numeric (count)
        #[arg(long, default_value_t = 30)]
        signal_depth: usize,
        /// Tolerance of the numeric limit (dimensionless)
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Maximum number of scales in the numeric limit (count)
        #[arg(long, default_value_t = 40)]
        max_terms: usize,
    },

    /// Profile of the d_n recursion on a uniform grid of [0, 1].
    #[command(after_help = "CSV columns: x,dn")]
    DnProfile {
        /// Exponent a > 0 in the factor 2^a - 1 (dimensionless)
        #[arg(long, default_value_t = 0.5)]
        a_exp: f64,
        /// Recursion depth n (count)
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Number of grid cells; emits grid + 1 rows (count)
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Divide by 2^a - 1 to match the closed-form velocity
        #[arg(long)]
        normalized: bool,
    },

    /// r_n iterates (weight 2^-a, base x^a) against R_{2^-a}.
    #[command(after_help = "CSV columns: x,rn,derham")]
    RnIterate {
        /// Exponent a in (0, 1] (dimensionless)
        #[arg(long, default_value_t = 0.5)]
        a_exp: f64,
        /// Iteration count n (count)
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Number of grid cells; emits grid + 1 rows (count)
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },

    /// Fractal variation of mixed order n + beta at given scales.
    #[command(after_help = "CSV columns: epsilon,value")]
    Fracvar {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        order: OrderArgs,
        /// Comma-separated scales eps > 0 (x units)
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
    },

    /// Fractional velocity: limit of the fractal variation as eps -> 0.
    #[command(
        after_help = "CSV columns: value,converged,terms,last_residual\nExits 2 if the limit is not reached."
    )]
    Velocity {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        limit: LimitArgs,
        /// Use the plain increment quotient (f(x±eps) - f(x)) / eps^(n+beta)
        #[arg(long)]
        increment: bool,
    },

    /// Scale velocity eps^beta f'(x ± eps) / (1 - {beta}) at given scales.
    #[command(after_help = "CSV columns: epsilon,value")]
    ScaleVelocity {
        #[command(flatten)]
        point: PointArgs,
        /// Order beta in (0, 1] (dimensionless)
        #[arg(long)]
        beta: f64,
        /// Comma-separated scales eps > 0 (x units)
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
    },

    /// Compare the limits of fracvar of order 1 - beta and scale velocity of order beta.
    #[command(
        after_help = "CSV columns: v_frac,v_scale,converged_frac,converged_scale,agree\nExits 2 if either limit is not reached."
    )]
    Equivalence {
        /// Signal: poly:c_n,...,c_0, pow:alpha, abs-pow:alpha@x0, derham:a@depth, sin or exp
        #[arg(long)]
        f: String,
        /// Evaluation point (x units)
        #[arg(long)]
        x: f64,
        /// Scale-velocity order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        limit: LimitArgs,
    },

    /// Grid points where the fractional velocity is finite and non-zero.
    #[command(after_help = "CSV columns: x,value,terms")]
    SetOfChange {
        /// Signal: poly:c_n,...,c_0, pow:alpha, abs-pow:alpha@x0, derham:a@depth, sin or exp
        #[arg(long)]
        f: String,
        /// Left end of the grid (x units)
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        /// Right end of the grid (x units)
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        /// Grid has 2^depth cells (count)
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        limit: LimitArgs,
        /// Magnitudes at or below this count as zero (dimensionless)
        #[arg(long, default_value_t = DEFAULT_CHANGE_THRESHOLD)]
        threshold: f64,
    },

    /// Pointwise Hölder exponent from a log-log fit of increments.
    #[command(after_help = "CSV columns: alpha_hat,r_squared,samples")]
    Holder {
        #[command(flatten)]
        point: PointArgs,
        /// Smallest scale (x units)
        #[arg(long, default_value_t = 1e-6)]
        eps_min: f64,
        /// Largest scale (x units)
        #[arg(long, default_value_t = 1e-2)]
        eps_max: f64,
        /// Number of geometrically spaced scales, at least 4 (count)
        #[arg(long, default_value_t = 20)]
        points: usize,
    },

    /// Riemann–Liouville integral of order beta > 0.
    #[command(after_help = "CSV columns: value")]
    RlIntegral {
        #[command(flatten)]
        quad: QuadArgs,
        /// Order beta > 0 (dimensionless)
        #[arg(long)]
        beta: f64,
    },

    /// Caputo derivative of order beta in (0, 1).
    #[command(after_help = "CSV columns: value")]
    Caputo {
        #[command(flatten)]
        quad: QuadArgs,
        /// Order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
    },

    /// Riemann–Liouville derivative of order beta in (0, 1).
    #[command(after_help = "CSV columns: value")]
    RlDerivative {
        #[command(flatten)]
        quad: QuadArgs,
        /// Order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
    },

    /// Residuals of the two inversion identities between I^beta and the Caputo derivative.
    #[command(after_help = "CSV columns: left_residual,right_residual")]
    Inversion {
        #[command(flatten)]
        quad: QuadArgs,
        /// Order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
    },

    /// Scale velocity of an RL integral against its Caputo form.
    #[command(after_help = "CSV columns: lhs,rhs,residual")]
    TheoremCheck {
        #[command(flatten)]
        quad: QuadArgs,
        /// Scale-velocity order alpha in (0, 1) (dimensionless)
        #[arg(long)]
        alpha: f64,
        /// Integral order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
        /// Scale eps > 0 (x units)
        #[arg(long)]
        eps: f64,
        /// Subtract f(a0) from f first, dropping the boundary term
        #[arg(long)]
        corollary: bool,
    },

    /// Fractional velocity of I^(1-beta) f - f(a0) against (1/alpha) lim eps^(1-alpha) C^beta f(x+eps).
    #[command(
        after_help = "CSV columns: caputo_route,velocity_route,converged_caputo,converged_velocity,agree\nExits 2 if either limit is not reached."
    )]
    LimitCheck {
        /// Signal: poly:c_n,...,c_0, pow:alpha, abs-pow:alpha@x0, derham:a@depth, sin or exp
        #[arg(long)]
        f: String,
        /// Lower limit of integration (x units)
        #[arg(long, default_value_t = 0.0)]
        a0: f64,
        /// Evaluation point, x >= a0 (x units)
        #[arg(long)]
        x: f64,
        /// Velocity order alpha in (0, 1) (dimensionless)
        #[arg(long)]
        alpha: f64,
        /// Derivative order beta in (0, 1) (dimensionless)
        #[arg(long)]
        beta: f64,
        /// Quadrature nodes, at least 2 (count)
        #[arg(long, default_value_t = 513)]
        nodes: usize,
        #[command(flatten)]
        limit: LimitArgs,
    },

    /// Coin-flip Monte Carlo estimate of R_a(x); uses --seed.
    #[command(after_help = "CSV columns: estimate,stderr,exact")]
    McDerham {
        /// Point in [0, 1] (x units)
        #[arg(long)]
        x: f64,
        /// Weight a in (0, 1) (dimensionless)
        #[arg(long)]
        a: f64,
        /// Number of simulated records (count)
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Binary digits per record (count)
        #[arg(long, default_value_t = 53)]
        flips: usize,
    },

    /// Scale-regularizing sequence eps_n = (prod of factors)^(-1/alpha).
    #[command(after_help = "CSV columns: n,epsilon")]
    ScaleSequence {
        /// Comma-separated derivative factors, each > 1 (dimensionless)
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<f64>,
        /// Order alpha in (0, 1] (dimensionless)
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },

    /// Run the acceptance criteria; one PASS/FAIL line each, exits 1 on any failure.
    #[command(
        after_help = "Output: one line per criterion (CSV format), or a JSON report with --format json."
    )]
    Acceptance,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Signal: poly:c_n,...,c_0, pow:alpha, abs-pow:alpha@x0, derham:a@depth, sin or exp
    #[arg(long)]
    pub f: String,
    /// Evaluation point (x units)
    #[arg(long)]
    pub x: f64,
    /// Side of the increment: forward or backward
    #[arg(long, default_value = "forward")]
    pub side: String,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Integer part n >= 0 of the order (count)
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Fractional part beta in (0, 1] of the order (dimensionless)
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// First scale; then eps0 * 2^-k (x units)
    #[arg(long, default_value_t = 0.25)]
    pub eps0: f64,
    /// Stop when successive extrapolated values differ by less (dimensionless)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Maximum number of scales (count)
    #[arg(long, default_value_t = 40)]
    pub max_terms: usize,
}

impl LimitArgs {
    fn options(&self) -> LimitOptions {
        LimitOptions::new(self.eps0, self.tol).with_max_terms(self.max_terms)
    }
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Signal: poly:c_n,...,c_0, pow:alpha, abs-pow:alpha@x0, derham:a@depth, sin or exp
    #[arg(long)]
    pub f: String,
    /// Lower limit of integration (x units)
    #[arg(long, default_value_t = 0.0)]
    pub a0: f64,
    /// Evaluation point, x > a0 (x units)
    #[arg(long)]
    pub x: f64,
    /// Quadrature nodes, at least 2 (count)
    #[arg(long, default_value_t = 1025)]
    pub nodes: usize,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec, Error> {
        QuadratureSpec::new(self.a0, self.x, self.nodes)
    }

    fn signal(&self) -> Result<Signal, Error> {
        Signal::parse(&self.f)
    }
}

/// Whether a limit the subcommand depends on was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    NotConverged,
    /// Acceptance run with at least one failing criterion.
    Failed,
}

#[derive(Debug)]
pub struct Run {
    pub report: Report,
    pub status: Status,
    /// Plain-text rendering used instead of CSV, if any.
    pub text: Option<String>,
}

impl Run {
    fn done(report: Report) -> Self {
        Run {
            report,
            status: Status::Done,
            text: None,
        }
    }

    fn requiring(report: Report, converged: bool) -> Self {
        Run {
            report,
            status: if converged {
                Status::Done
            } else {
                Status::NotConverged
            },
            text: None,
        }
    }
}

fn side(s: &str) -> Result<Side, Error> {
    s.parse()
}

fn exact_grid_point(i: usize, grid: usize) -> Result<ExactScalar, Error> {
    ExactScalar::rational(i as i128, grid as u128)
}

fn check_grid(grid: usize) -> Result<(), Error> {
    if grid == 0 {
        Err(Error::Domain("grid must have at least one cell".into()))
    } else {
        Ok(())
    }
}

fn limit_row(r: &LimitResult) -> Vec<Cell> {
    vec![
        r.value.into(),
        r.converged.into(),
        r.terms_used.into(),
        r.last_residual().unwrap_or(f64::NAN).into(),
    ]
}

pub fn run(cli: &Cli) -> Result<Run, Error> {
    match &cli.command {
        Command::DerhamEval { a, grid, depth } => {
            let p = DeRhamParams::for_evaluation(*a)?;
            check_grid(*grid)?;
            let mut r = Report::new("derham-eval", &["x", "value"])
                .param("a", *a)
                .param("grid", *grid)
                .param("depth", *depth);
            for i in 0..=*grid {
                let x = exact_grid_point(i, *grid)?;
                r.push(vec![
                    x.value().into(),
                    derham_eval_recursive(&x, &p, *depth)?.into(),
                ]);
            }
            Ok(Run::done(r))
        }

        Command::DerhamVelocity {
            a,
            depth,
            numeric,
            signal_depth,
            tol,
            max_terms,
        } => {
            let p = DeRhamParams::new(*a)?;
            if *depth == 0 || *depth > 24 {
                return Err(Error::Domain(format!(
                    "depth must lie in 1..=24, got {depth}"
                )));
            }
            let k = *depth as u32;
            let mut cols = vec!["x", "digit_sum", "value"];
            if *numeric {
                cols.extend(["numeric", "converged"]);
            }
            let mut r = Report::new("derham-velocity", &cols)
                .param("a", *a)
                .param("beta", p.beta())
                .param("depth", *depth);
            let signal = derham_signal(p, *signal_depth);
            let opts = LimitOptions::new((-(k as f64)).exp2(), *tol).with_max_terms(*max_terms);
            let mut all_converged = true;
            for i in 1..(1i128 << k) {
                let x = ExactScalar::dyadic(i, k)?;
                let s = dyadic_expand(&x, *depth)?.digit_sum();
                let mut row = vec![
                    x.value().into(),
                    s.into(),
                    derham_velocity_exact(&x, &p, *depth)?.into(),
                ];
                if *numeric {
                    let v = increment_velocity(&signal, x.value(), p.beta(), Side::Forward, &opts)?;
                    if !v.converged {
                        all_converged = false;
                        r.note(format!(
                            "x = {}: {}",
                            x,
                            v.diagnostic.as_deref().unwrap_or("not converged")
                        ));
                    }
                    row.extend([v.value.into(), v.converged.into()]);
                }
                r.push(row);
            }
            Ok(Run::requiring(r, all_converged))
        }

        Command::DnProfile {
            a_exp,
            k,
            grid,
            normalized,
        } => {
            check_grid(*grid)?;
            let mut r = Report::new("dn-profile", &["x", "dn"])
                .param("a_exp", *a_exp)
                .param("k", *k)
                .param("grid", *grid)
                .param("normalized", *normalized);
            for i in 0..=*grid {
                let x = exact_grid_point(i, *grid)?;
                let v = if *normalized {
                    dn_normalized(&x, *a_exp, *k)?
                } else {
                    dn_recursion(&x, *a_exp, *k)?
                };
                r.push(vec![x.value().into(), v.into()]);
            }
            Ok(Run::done(r))
        }

        Command::RnIterate { a_exp, n, grid } => {
            check_grid(*grid)?;
            let p = DeRhamParams::for_evaluation((-a_exp).exp2())?;
            let mut r = Report::new("rn-iterate", &["x", "rn", "derham"])
                .param("a_exp", *a_exp)
                .param("n", *n)
                .param("grid", *grid);
            for i in 0..=*grid {
                let x = exact_grid_point(i, *grid)?;
                r.push(vec![
                    x.value().into(),
                    rn_iterate(&x, *a_exp, *n)?.into(),
                    derham_eval_recursive(&x, &p, 64)?.into(),
                ]);
            }
            Ok(Run::done(r))
        }

        Command::Fracvar { point, order, eps } => {
            let f = Signal::parse(&point.f)?;
            let o = FracOrder::new(order.n, order.beta)?;
            let sd = side(&point.side)?;
            let mut r = Report::new("fracvar", &["epsilon", "value"])
                .param("f", point.f.as_str())
                .param("x", point.x)
                .param("order", o.total())
                .param("side", point.side.as_str());
            for &e in eps {
                r.push(vec![e.into(), fracvar(&f, point.x, o, e, sd)?.into()]);
            }
            Ok(Run::done(r))
        }

        Command::Velocity {
            point,
            order,
            limit,
            increment,
        } => {
            let f = Signal::parse(&point.f)?;
            let sd = side(&point.side)?;
            let opts = limit.options();
            let result = if *increment {
                increment_velocity(&f, point.x, order.n as f64 + order.beta, sd, &opts)?
            } else {
                fractional_velocity(&f, point.x, FracOrder::new(order.n, order.beta)?, sd, &opts)?
                    .result
            };
            let mut r = Report::new(
                "velocity",
                &["value", "converged", "terms", "last_residual"],
            )
            .param("f", point.f.as_str())
            .param("x", point.x)
            .param("order", order.n as f64 + order.beta)
            .param("side", point.side.as_str())
            .param("eps0", opts.eps0)
            .param("tol", opts.tol);
            r.push(limit_row(&result));
            if let Some(d) = &result.diagnostic {
                r.note(d.clone());
            }
            Ok(Run::requiring(r, result.converged))
        }

        Command::ScaleVelocity { point, beta, eps } => {
            let f = Signal::parse(&point.f)?;
            let sd = side(&point.side)?;
            let mut r = Report::new("scale-velocity", &["epsilon", "value"])
                .param("f", point.f.as_str())
                .param("x", point.x)
                .param("beta", *beta)
                .param("side", point.side.as_str());
            for &e in eps {
                r.push(vec![
                    e.into(),
                    scale_velocity(&f, point.x, *beta, e, sd)?.into(),
                ]);
            }
            Ok(Run::done(r))
        }

        Command::Equivalence { f, x, beta, limit } => {
            let s = Signal::parse(f)?;
            let opts = limit.options();
            let c = limit_equivalence_check(&s, *x, *beta, &opts)?;
            let mut r = Report::new(
                "equivalence",
                &[
                    "v_frac",
                    "v_scale",
                    "converged_frac",
                    "converged_scale",
                    "agree",
                ],
            )
            .param("f", f.as_str())
            .param("x", *x)
            .param("beta", *beta)
            .param("eps0", opts.eps0)
            .param("tol", opts.tol);
            r.push(vec![
                c.v_frac.value.into(),
                c.v_scale.value.into(),
                c.v_frac.converged.into(),
                c.v_scale.converged.into(),
                c.agree.into(),
            ]);
            for d in [
                &c.hypothesis_warning,
                &c.v_frac.diagnostic,
                &c.v_scale.diagnostic,
            ]
            .into_iter()
            .flatten()
            {
                r.note(d.clone());
            }
            Ok(Run::requiring(r, c.v_frac.converged && c.v_scale.converged))
        }

        Command::SetOfChange {
            f,
            lo,
            hi,
            depth,
            order,
            limit,
            threshold,
        } => {
            let s = Signal::parse(f)?;
            if !(lo < hi) || *depth > 20 {
                return Err(Error::Domain(format!(
                    "need lo < hi and depth <= 20, got [{lo}, {hi}], {depth}"
                )));
            }
            let cells = 1usize << depth;
            let grid = (0..=cells)
                .map(|i| ExactScalar::from_f64(lo + (hi - lo) * i as f64 / cells as f64))
                .collect::<Result<Vec<_>, _>>()?;
            let o = FracOrder::new(order.n, order.beta)?;
            let hits =
                set_of_change_scan(&s, &grid, o, Side::Forward, &limit.options(), *threshold)?;
            let mut r = Report::new("set-of-change", &["x", "value", "terms"])
                .param("f", f.as_str())
                .param("order", o.total())
                .param("threshold", *threshold)
                .param("points", grid.len());
            for (x, v) in hits {
                r.push(vec![
                    x.value().into(),
                    v.value().into(),
                    v.result.terms_used.into(),
                ]);
            }
            Ok(Run::done(r))
        }

        Command::Holder {
            point,
            eps_min,
            eps_max,
            points,
        } => {
            let f = Signal::parse(&point.f)?;
            let h = holder_exponent(
                &f,
                point.x,
                (*eps_min, *eps_max),
                *points,
                side(&point.side)?,
            )?;
            let mut r = Report::new("holder", &["alpha_hat", "r_squared", "samples"])
                .param("f", point.f.as_str())
                .param("x", point.x)
                .param("eps_min", *eps_min)
                .param("eps_max", *eps_max)
                .param("points", *points);
            r.push(vec![
                h.alpha_hat.into(),
                h.r_squared.into(),
                h.samples_used.into(),
            ]);
            Ok(Run::done(r))
        }

        Command::RlIntegral { quad, beta } => {
            let v = rl_integral(&quad.signal()?, *beta, &quad.spec()?)?;
            Ok(Run::done(single("rl-integral", quad, *beta, v)))
        }
        Command::Caputo { quad, beta } => {
            let v = caputo_derivative(&quad.signal()?, *beta, &quad.spec()?)?;
            Ok(Run::done(single("caputo", quad, *beta, v)))
        }
        Command::RlDerivative { quad, beta } => {
            let v = rl_derivative(&quad.signal()?, *beta, &quad.spec()?)?;
            Ok(Run::done(single("rl-derivative", quad, *beta, v)))
        }

        Command::Inversion { quad, beta } => {
            let res = inversion_check(&quad.signal()?, *beta, &quad.spec()?)?;
            let mut r = quad_report("inversion", quad, &["left_residual", "right_residual"])
                .param("beta", *beta);
            r.push(vec![res.left.into(), res.right.into()]);
            Ok(Run::done(r))
        }

        Command::TheoremCheck {
            quad,
            alpha,
            beta,
            eps,
            corollary,
        } => {
            let form = if *corollary {
                BridgeForm::Corollary
            } else {
                BridgeForm::Theorem
            };
            let c =
                bridge_theorem_check(&quad.signal()?, *alpha, *beta, *eps, &quad.spec()?, form)?;
            let mut r = quad_report("theorem-check", quad, &["lhs", "rhs", "residual"])
                .param("alpha", *alpha)
                .param("beta", *beta)
                .param("eps", *eps)
                .param("corollary", *corollary);
            r.push(vec![c.lhs.into(), c.rhs.into(), c.residual.into()]);
            Ok(Run::done(r))
        }

        Command::LimitCheck {
            f,
            a0,
            x,
            alpha,
            beta,
            nodes,
            limit,
        } => {
            let s = Signal::parse(f)?;
            let opts = limit.options();
            let p = limit_proposition_check(&s, *a0, *x, *alpha, *beta, *nodes, &opts)?;
            let mut r = Report::new(
                "limit-check",
                &[
                    "caputo_route",
                    "velocity_route",
                    "converged_caputo",
                    "converged_velocity",
                    "agree",
                ],
            )
            .param("f", f.as_str())
            .param("a0", *a0)
            .param("x", *x)
            .param("alpha", *alpha)
            .param("beta", *beta)
            .param("nodes", *nodes)
            .param("eps0", opts.eps0)
            .param("tol", opts.tol);
            r.push(vec![
                p.caputo_route.value.into(),
                p.velocity_route.value().into(),
                p.caputo_route.converged.into(),
                p.velocity_route.converged().into(),
                p.agree.into(),
            ]);
            for d in [
                &p.caputo_route.diagnostic,
                &p.velocity_route.result.diagnostic,
            ]
            .into_iter()
            .flatten()
            {
                r.note(d.clone());
            }
            Ok(Run::requiring(
                r,
                p.caputo_route.converged && p.velocity_route.converged(),
            ))
        }

        Command::McDerham {
            x,
            a,
            trials,
            flips,
        } => {
            let m = mc_derham_estimate(*x, *a, *trials, *flips, cli.seed)?;
            let exact = derham_eval_recursive(
                &ExactScalar::from_f64(*x)?,
                &DeRhamParams::for_evaluation(*a)?,
                64,
            )?;
            let mut r = Report::new("mc-derham", &["estimate", "stderr", "exact"])
                .param("x", *x)
                .param("a", *a)
                .param("trials", *trials)
                .param("flips", *flips)
                .param("seed", cli.seed as usize);
            r.push(vec![m.estimate.into(), m.stderr.into(), exact.into()]);
            Ok(Run::done(r))
        }

        Command::ScaleSequence { factors, alpha } => {
            let seq = scale_regularizing_sequence(factors, *alpha)?;
            let mut r = Report::new("scale-sequence", &["n", "epsilon"]).param("alpha", *alpha);
            for (i, e) in seq.epsilons.iter().enumerate() {
                r.push(vec![(i + 1).into(), (*e).into()]);
            }
            Ok(Run::done(r))
        }

        Command::Acceptance => {
            let outcomes = acceptance::run_all();
            let failed = outcomes.iter().any(|o| !o.passed);
            Ok(Run {
                report: acceptance::report(&outcomes),
                status: if failed { Status::Failed } else { Status::Done },
                text: Some(acceptance::lines(&outcomes)),
            })
        }
    }
}

fn quad_report(name: &str, quad: &QuadArgs, columns: &[&str]) -> Report {
    Report::new(name, columns)
        .param("f", quad.f.as_str())
        .param("a0", quad.a0)
        .param("x", quad.x)
        .param("nodes", quad.nodes)
}

fn single(name: &str, quad: &QuadArgs, beta: f64, value: f64) -> Report {
    let mut r = quad_report(name, quad, &["value"]).param("beta", beta);
    r.push(vec![value.into()]);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Run, Error> {
        let cli =
            Cli::try_parse_from(std::iter::once("scalespace").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["scalespace", "derham-eval"]).unwrap();
        assert_eq!(cli.format, Format::Csv);
        assert_eq!(cli.seed, 0);
        assert!(cli.output.is_none());
    }

    #[test]
    fn derham_eval_rows() {
        let r = run_args(&["derham-eval", "--a", "0.3", "--grid", "8"])
            .unwrap()
            .report;
        assert_eq!(r.rows.len(), 9);
        assert_eq!(r.rows[4][1], Cell::Float(0.3));
    }

    #[test]
    fn velocity_of_square_root() {
        let run = run_args(&["velocity", "--f", "pow:0.5", "--x", "0", "--beta", "0.5"]).unwrap();
        assert_eq!(run.status, Status::Done);
        assert_eq!(run.report.rows[0][0], Cell::Float(1.0));
    }

    #[test]
    fn divergent_velocity_is_not_converged() {
        let run = run_args(&["velocity", "--f", "pow:0.5", "--x", "0", "--beta", "0.9"]).unwrap();
        assert_eq!(run.status, Status::NotConverged);
    }

    #[test]
    fn bad_side_is_domain_error() {
        let e = run_args(&[
            "fracvar", "--f", "sin", "--x", "0", "--beta", "0.5", "--side", "up",
        ]);
        assert!(e.is_err());
    }

    #[test]
    fn scale_sequence_rows() {
        let r = run_args(&["scale-sequence", "--factors", "4,4"])
            .unwrap()
            .report;
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[1][1], Cell::Float(1.0 / 16.0));
    }
}
