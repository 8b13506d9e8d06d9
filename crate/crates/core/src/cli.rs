//! Command-line front end.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pivotal_lp::bench::{render_bench, run_bench, BenchConfig};
use pivotal_lp::instances::{canned_example, klee_minty_for, random_instance};
use pivotal_lp::io::{parse_report_json, ReportDocument};
use pivotal_lp::oracle::{brute_force_solve, OracleStatus, DEFAULT_BOX_BOUND};
use pivotal_lp::scalar::parse_rational;
use pivotal_lp::{
    serialize_instance, serialize_report, serialize_trace, verify_certificate, Error,
    ExhaustionPolicy, Format, LpInstance, MinorOrder, Rational, Scalar, ScalarKind, SolveOptions,
    Status, Tolerance,
};

/// Environment variable supplying the zero tolerance when `--tol` is absent.
pub const TOL_ENV: &str = "PIVOTAL_LP_TOL";

pub mod exit {
    pub const OK: u8 = 0;
    /// No solution, failed certificate, or an infeasible/unbounded oracle verdict.
    pub const NEGATIVE: u8 = 1;
    /// Unreadable input or invalid configuration.
    pub const USAGE: u8 = 2;
    /// Iteration cap exceeded or numerical breakdown.
    pub const LIMIT: u8 = 3;
}

#[derive(Parser, Debug)]
#[command(
    name = "pivotal-lp",
    version,
    about = "Solve max fᵀx s.t. Ax ≤ b, x ≥ 0 by compact complementary pivoting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance and print the report.
    Solve {
        /// Instance file, or `-` for standard input.
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Include every intermediate matrix in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Solve an instance and print only its iteration trace.
    Trace {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check a primal/dual pair against an instance.
    Verify {
        input: PathBuf,
        /// Primal values, comma or space separated.
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "y",
            conflicts_with = "result"
        )]
        x: Option<String>,
        /// Dual values, comma or space separated.
        #[arg(long, allow_hyphen_values = true, requires = "x")]
        y: Option<String>,
        /// JSON report written by `solve --format json`.
        #[arg(long)]
        result: Option<PathBuf>,
        /// Largest residual accepted.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ScalarArg::F64)]
        scalar: ScalarArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Solve by brute-force vertex enumeration.
    Oracle {
        input: PathBuf,
        /// Bound B on every variable; optima on the bound mean unbounded.
        #[arg(long, default_value_t = DEFAULT_BOX_BOUND)]
        box_bound: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Print an instance in the input format.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Compare iteration counts of the ordering rules, checked by the oracle.
    Bench {
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        /// Random instances use k, n in 1..=max-dim.
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        /// Klee-Minty sweep runs n = 1..=klee-minty-max.
        #[arg(long, default_value_t = 8)]
        klee_minty_max: usize,
        #[arg(long, default_value_t = -9, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
        hi: i64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Klee-Minty cube of dimension n.
    KleeMinty {
        #[arg(long)]
        n: usize,
    },
    /// Seeded random integer instance (ChaCha8 generator).
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = -9, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
        hi: i64,
    },
    /// One of the five worked examples.
    Example {
        #[arg(long)]
        id: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Minor-step candidate ordering.
    #[arg(long, value_enum, default_value_t = RuleArg::Value)]
    pub rule: RuleArg,
    #[arg(long, value_enum, default_value_t = ScalarArg::F64)]
    pub scalar: ScalarArg,
    /// Zero threshold (binary64 only; default 1e-9, or $PIVOTAL_LP_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap as a multiple of k + n.
    #[arg(long, default_value_t = SolveOptions::DEFAULT_CAP_FACTOR)]
    pub max_iter_factor: f64,
    /// What a step does when every candidate repeats the P column.
    #[arg(long, value_enum, default_value_t = ExhaustionArg::Continue)]
    pub exhaustion: ExhaustionArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleArg {
    Value,
    Index,
    LowestIndex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarArg {
    F64,
    Rational,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustionArg {
    Continue,
    Conclude,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

impl ScalarArg {
    fn kind(self) -> ScalarKind {
        match self {
            ScalarArg::F64 => ScalarKind::Binary64,
            ScalarArg::Rational => ScalarKind::ExactRational,
        }
    }
}

/// A failed command: exit code plus a message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PivotBreakdown { .. } | Error::NumericalBreakdown(_) => exit::LIMIT,
            _ => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

impl SolverArgs {
    /// Resolves options; `env_tol` is the raw value of [`TOL_ENV`], if set.
    pub fn options(&self, env_tol: Option<&str>) -> Result<SolveOptions, Failure> {
        let kind = self.scalar.kind();
        let tolerance =
            match (self.tol, kind) {
                (Some(t), _) => Tolerance::new(t)?,
                // The environment default only concerns binary64 runs.
                (None, ScalarKind::Binary64) => match env_tol {
                    Some(raw) => Tolerance::new(raw.trim().parse::<f64>().map_err(|_| {
                        Failure::usage(format!("{TOL_ENV}: not a number: '{raw}'"))
                    })?)?,
                    None => Tolerance::default_for(kind),
                },
                (None, ScalarKind::ExactRational) => Tolerance::exact(),
            };
        let mut opts = SolveOptions::for_kind(kind).with_rule(match self.rule {
            RuleArg::Value => MinorOrder::AscendingValue,
            RuleArg::Index => MinorOrder::AscendingIndex,
            RuleArg::LowestIndex => MinorOrder::LowestIndex,
        });
        opts.tolerance = tolerance;
        opts.iteration_cap_factor = self.max_iter_factor;
        opts.exhaustion = match self.exhaustion {
            ExhaustionArg::Continue => ExhaustionPolicy::Continue,
            ExhaustionArg::Conclude => ExhaustionPolicy::Conclude,
        };
        opts.validate(kind)?;
        Ok(opts)
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load_instance(path: &PathBuf, stdin: &mut dyn Read) -> Result<LpInstance, Failure> {
    let text = read_input(path, stdin)?;
    pivotal_lp::parse_instance(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Optimum | Status::TrivialOptimum => exit::OK,
        Status::NoSolution => exit::NEGATIVE,
        Status::IterationLimitExceeded | Status::NumericalBreakdown => exit::LIMIT,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("writing output: {e}")))
}

fn solve_cmd<S: Scalar>(
    inst: &LpInstance,
    opts: &SolveOptions,
    format: Format,
    trace_only: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let report = pivotal_lp::solve::<S>(inst, opts)?;
    if trace_only {
        let steps = report.trace.as_deref().unwrap_or(&[]);
        emit(out, &serialize_trace(steps)?)?;
    } else {
        emit(out, &serialize_report(&report, format))?;
    }
    if let Some(d) = &report.diagnostic {
        let _ = writeln!(err, "{}: {d}", report.status);
    }
    Ok(status_code(report.status))
}

fn parse_vector(raw: &str, what: &str) -> Result<Vec<Rational>, Failure> {
    raw.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| Failure::usage(format!("--{what}: {e}"))))
        .collect()
}

fn verify_cmd<S: Scalar>(
    inst: &LpInstance,
    x: &[Rational],
    y: &[Rational],
    tol: f64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let conv = |v: &[Rational]| v.iter().map(S::from_rational).collect::<Vec<S>>();
    let report = verify_certificate(inst, &conv(x), &conv(y), tol)?;
    let text = match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&report).expect("certificate report serializes") + "\n"
        }
        OutputFormat::Text => format!(
            "primal feasibility: {:e}\ndual feasibility: {:e}\nduality gap: {:e}\ncomplementarity: {:e}\ntolerance: {:e}\nverdict: {}\n",
            report.primal_feasibility,
            report.dual_feasibility,
            report.duality_gap,
            report.complementarity,
            report.tolerance,
            if report.pass { "pass" } else { "fail" }
        ),
    };
    emit(out, &text)?;
    Ok(if report.pass {
        exit::OK
    } else {
        exit::NEGATIVE
    })
}

pub fn run(
    cli: Cli,
    env_tol: Option<&str>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    match cli.command {
        Command::Solve {
            input,
            solver,
            format,
            trace,
        } => {
            let mut opts = solver.options(env_tol)?;
            opts.trace_enabled = trace;
            let inst = load_instance(&input, stdin)?;
            match solver.scalar {
                ScalarArg::F64 => solve_cmd::<f64>(&inst, &opts, format.into(), false, out, err),
                ScalarArg::Rational => {
                    solve_cmd::<Rational>(&inst, &opts, format.into(), false, out, err)
                }
            }
        }
        Command::Trace { input, solver } => {
            let opts = solver.options(env_tol)?.with_trace();
            let inst = load_instance(&input, stdin)?;
            match solver.scalar {
                ScalarArg::F64 => solve_cmd::<f64>(&inst, &opts, Format::Text, true, out, err),
                ScalarArg::Rational => {
                    solve_cmd::<Rational>(&inst, &opts, Format::Text, true, out, err)
                }
            }
        }
        Command::Verify {
            input,
            x,
            y,
            result,
            tol,
            scalar,
            format,
        } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Failure::usage(format!(
                    "--tol must be finite and nonnegative, got {tol}"
                )));
            }
            let (x, y) = match (x, y, result) {
                (Some(x), Some(y), None) => (parse_vector(&x, "x")?, parse_vector(&y, "y")?),
                (None, None, Some(path)) => {
                    let doc: ReportDocument = parse_report_json(&read_input(&path, stdin)?)?;
                    (doc.x_rational()?, doc.y_rational()?)
                }
                _ => return Err(Failure::usage("supply either --x and --y, or --result")),
            };
            let inst = load_instance(&input, stdin)?;
            match scalar {
                ScalarArg::F64 => verify_cmd::<f64>(&inst, &x, &y, tol, format, out),
                ScalarArg::Rational => verify_cmd::<Rational>(&inst, &x, &y, tol, format, out),
            }
        }
        Command::Oracle {
            input,
            box_bound,
            format,
        } => {
            if !(box_bound.is_finite() && box_bound > 0.0) {
                return Err(Failure::usage(format!(
                    "--box-bound must be positive, got {box_bound}"
                )));
            }
            let inst = load_instance(&input, stdin)?;
            let outcome = brute_force_solve(&inst, box_bound)?;
            let text = match format {
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&outcome).expect("oracle outcome serializes")
                        + "\n"
                }
                OutputFormat::Text => match &outcome.status {
                    OracleStatus::Optimal { x, objective } => {
                        let xs: Vec<String> = x.iter().map(|v| v.render_fixed()).collect();
                        format!(
                            "status: Optimal\nobjective: {}\nx: {}\nvertices examined: {}\n",
                            objective.render_fixed(),
                            xs.join(" "),
                            outcome.vertices_examined
                        )
                    }
                    other => format!(
                        "status: {}\nvertices examined: {}\n",
                        match other {
                            OracleStatus::Infeasible => "Infeasible",
                            _ => "Unbounded",
                        },
                        outcome.vertices_examined
                    ),
                },
            };
            emit(out, &text)?;
            Ok(match outcome.status {
                OracleStatus::Optimal { .. } => exit::OK,
                _ => exit::NEGATIVE,
            })
        }
        Command::Gen { what } => {
            let inst = match what {
                GenCommand::KleeMinty { n } => klee_minty_for(n, ScalarKind::ExactRational)?,
                GenCommand::Random { k, n, seed, lo, hi } => random_instance(k, n, seed, lo, hi)?,
                GenCommand::Example { id } => canned_example(id)?.instance,
            };
            emit(out, &serialize_instance(&inst))?;
            Ok(exit::OK)
        }
        Command::Bench {
            count,
            seed_base,
            max_dim,
            klee_minty_max,
            lo,
            hi,
            solver,
        } => {
            if max_dim == 0 {
                return Err(Failure::usage("--max-dim must be at least 1"));
            }
            if lo > hi {
                return Err(Failure::usage(format!("empty entry range [{lo}, {hi}]")));
            }
            if solver.scalar == ScalarArg::F64
                && klee_minty_max > pivotal_lp::instances::KLEE_MINTY_BINARY64_MAX_N
            {
                return Err(Failure::usage(format!(
                    "--klee-minty-max {klee_minty_max} is too large for f64; use --scalar rational"
                )));
            }
            let opts = solver.options(env_tol)?;
            let config = BenchConfig {
                count,
                seed_base,
                max_dim,
                klee_minty_max,
                lo,
                hi,
            };
            let rows = match solver.scalar {
                ScalarArg::F64 => run_bench::<f64>(&config, &opts)?,
                ScalarArg::Rational => run_bench::<Rational>(&config, &opts)?,
            };
            emit(out, &render_bench(&rows))?;
            Ok(exit::OK)
        }
    }
}
