use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symlift_core::eigenforms::EigenformId;
use symlift_core::rep_expr::{lift, parse, RepExpr, SyntaxError};
use symlift_core::report::{
    coefficients_report, gamma_report, verify_expression, DecomposeReport, DecompositionReport, Normalization, Status,
    SCHEMA_VERSION,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "symlift", version, about = "Decompose and verify L-functions of symmetric power lifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the isobaric decomposition of an expression.
    Decompose {
        expr: String,
        #[arg(long, value_enum, default_value_t = NormalizationArg::Unitary)]
        normalization: NormalizationArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the local Euler-factor identity at every prime up to a bound.
    Verify {
        expr: String,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 100)]
        primes_up_to: u64,
        /// Claimed isobaric decomposition to check against, as an expression.
        #[arg(long)]
        against: Option<String>,
        #[arg(long, value_enum, default_value_t = NormalizationArg::Unitary)]
        normalization: NormalizationArg,
        /// Worker threads for the per-prime checks.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Report elapsed_ms as 0.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dirichlet coefficients v(n) for n up to a limit.
    Coeffs {
        expr: String,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 100)]
        limit: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gamma-factor shifts of the completed L-function.
    Gamma {
        expr: String,
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct FormArgs {
    /// Weight of the level-1 eigenform bound to `pi`.
    #[arg(long, default_value_t = 12)]
    weight: u32,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    Unitary,
    Arithmetic,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Unitary => Normalization::Unitary,
            NormalizationArg::Arithmetic => Normalization::Arithmetic,
        }
    }
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("symlift: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn syntax_message(src: &str, e: &SyntaxError) -> String {
    format!("{e}\n  {src}\n  {:>width$}", "^", width = e.offset + 1)
}

fn parse_expr(src: &str) -> Result<RepExpr, Failure> {
    parse(src).map_err(|e| Failure::usage(syntax_message(src, &e)))
}

fn form(args: &FormArgs) -> Result<EigenformId, Failure> {
    EigenformId::new(args.weight).map_err(|e| Failure::usage(e.to_string()))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Decompose {
            expr,
            normalization,
            out,
        } => {
            let e = parse_expr(&expr)?;
            let l = lift(&e).map_err(|e| Failure::usage(e.to_string()))?;
            let report = DecomposeReport {
                schema_version: SCHEMA_VERSION,
                expression: e.to_string(),
                normalization: normalization.into(),
                decomposition: DecompositionReport::new(&l, normalization.into()),
            };
            let rows = report
                .decomposition
                .constituents
                .iter()
                .map(|c| vec![c.sym.to_string(), c.det.to_string(), c.mult.clone()]);
            emit(&out, &report, &["sym", "det", "mult"], rows)?;
            Ok(0)
        }
        Command::Verify {
            expr,
            form: form_args,
            primes_up_to,
            against,
            normalization,
            jobs,
            no_timing,
            out,
        } => {
            let e = parse_expr(&expr)?;
            let claim = against.as_deref().map(parse_expr).transpose()?;
            let f = form(&form_args)?;
            if primes_up_to < 2 {
                return Err(Failure::usage("--primes-up-to must be at least 2"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(usize::from(jobs))
                .build()
                .map_err(|e| Failure::usage(format!("cannot start {jobs} workers: {e}")))?;
            let start = Instant::now();
            let mut report = pool
                .install(|| verify_expression(&e, f, primes_up_to, normalization.into(), claim.as_ref()))
                .map_err(|e| Failure::usage(e.to_string()))?;
            if !no_timing {
                report.elapsed_ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
            }
            let rows = report
                .primes
                .iter()
                .map(|p| vec![p.p.to_string(), p.pass.to_string(), p.lhs.join(" "), p.rhs.join(" ")]);
            emit(&out, &report, &["p", "pass", "lhs", "rhs"], rows)?;
            Ok(if report.passed() { 0 } else { EXIT_FAILURE })
        }
        Command::Coeffs {
            expr,
            form: form_args,
            limit,
            out,
        } => {
            let e = parse_expr(&expr)?;
            let f = form(&form_args)?;
            if limit < 1 {
                return Err(Failure::usage("--limit must be at least 1"));
            }
            let report = coefficients_report(&e, f, limit).map_err(|e| Failure::usage(e.to_string()))?;
            let rows = report
                .coefficients
                .iter()
                .map(|c| vec![c.n.to_string(), c.value.clone(), c.unitary.to_string()]);
            emit(&out, &report, &["n", "value", "unitary"], rows)?;
            Ok(0)
        }
        Command::Gamma {
            expr,
            form: form_args,
            out,
        } => {
            let e = parse_expr(&expr)?;
            let f = form(&form_args)?;
            let report = gamma_report(&e, f).map_err(|e| Failure::usage(e.to_string()))?;
            let complex = report.gamma.complex_shifts.iter().map(|s| vec!["complex".to_string(), s.clone()]);
            let real = report.gamma.real_parities.iter().map(|s| vec!["real".to_string(), s.to_string()]);
            emit(&out, &report, &["factor", "shift"], complex.chain(real))?;
            Ok(if report.status == Status::Pass { 0 } else { EXIT_FAILURE })
        }
    }
}

fn emit<T, I>(out: &OutputArgs, report: &T, header: &[&str], rows: I) -> Result<(), Failure>
where
    T: Serialize,
    I: Iterator<Item = Vec<String>>,
{
    let bytes = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Failure::usage(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| Failure::usage(e.to_string());
            w.write_record(header).map_err(io_err)?;
            for row in rows {
                w.write_record(&row).map_err(io_err)?;
            }
            w.into_inner().map_err(|e| Failure::usage(e.to_string()))?
        }
    };
    let written = match &out.output {
        Some(path) => fs::write(path, &bytes).map_err(|e| (path.display().to_string(), e)),
        None => io::stdout().lock().write_all(&bytes).map_err(|e| ("standard output".to_string(), e)),
    };
    written.map_err(|(target, e)| Failure::usage(format!("cannot write {target}: {e}")))
}
