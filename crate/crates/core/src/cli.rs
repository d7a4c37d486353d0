//! Command-line front end. `run` is the whole program minus process exit, so
//! integration tests can drive it in-process.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::asymptotics::{residual_report, AsymptoticCase, AsymptoticReport, DEFAULT_SUM_BUDGET};
use crate::constants::{compute_constants, DEFAULT_DIGITS};
use crate::counting::{count, CongruenceSpec, CountOptions, CountResult, Method, DEFAULT_ORACLE_BUDGET};
use crate::error::{Error, Result};
use crate::oeis::{compare, BFile, OeisReport};
use crate::selftest::{self, SuiteResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
/// A check ran to completion and found a disagreement.
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Largest modulus handed to the histogram oracle
    #[arg(long = "oracle-budget", env = "QC_ORACLE_BUDGET", global = true, default_value_t = DEFAULT_ORACLE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_budget_r: u64,

    /// Largest x accepted by `sum`
    #[arg(long = "sum-budget", env = "QC_SUM_BUDGET", global = true, default_value_t = DEFAULT_SUM_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub sum_budget_x: u64,

    /// Significant digits for constants and main terms
    #[arg(long = "precision", env = "QC_PRECISION", global = true, default_value_t = DEFAULT_DIGITS,
          value_parser = clap::value_parser!(u32).range(16..=2000))]
    pub precision_digits: u32,

    #[arg(long = "format", env = "QC_FORMAT", global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output_format: OutputFormat,
}

impl RunConfig {
    fn count_options(&self) -> CountOptions {
        CountOptions {
            oracle_budget: self.oracle_budget_r,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quadcong",
    version,
    about = "Count solutions of a1 x1^2 + ... + ak xk^2 = n (mod r)"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count solutions for one (k, n, r, a)
    Count(CountArgs),
    /// Counts for r = 1..rmax
    Table(TableArgs),
    /// Compare a local b-file with computed values
    Oeis(OeisArgs),
    /// Partial sums against the asymptotic main term
    Sum(SumArgs),
    /// Run the internal consistency sweeps
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long)]
    pub r: u64,
    /// Comma-separated coefficients (default all ones)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// auto, closed, oracle or exponential
    #[arg(long, default_value = "auto")]
    pub method: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long)]
    pub rmax: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
}

#[derive(Debug, Args)]
pub struct OeisArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub bfile: PathBuf,
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub x: Option<u64>,
    /// Comma-separated ascending x values
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = selftest::DEFAULT_RMAX)]
    pub rmax: u64,
    #[arg(long, default_value_t = selftest::DEFAULT_KMAX)]
    pub kmax: u32,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("malformed {what} entry '{t}'")))
        })
        .collect()
}

fn build_spec(k: u32, n: i64, r: u64, a: Option<&str>) -> Result<CongruenceSpec> {
    match a {
        None => CongruenceSpec::all_ones(k, n, r),
        Some(list) => {
            let a: Vec<i64> = parse_list(list, "coefficient")?;
            if a.len() != k as usize {
                return Err(Error::InvalidArgument(format!(
                    "{} coefficients given for k = {k}",
                    a.len()
                )));
            }
            CongruenceSpec::new(k, n, r, a)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_refusal() {
        EXIT_REFUSED
    } else {
        EXIT_INPUT
    }
}

/// Runs the program on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Count(a) => cmd_count(cfg, a, out),
        Command::Table(a) => cmd_table(cfg, a, out),
        Command::Oeis(a) => cmd_oeis(cfg, a, out),
        Command::Sum(a) => cmd_sum(cfg, a, out),
        Command::Selftest(a) => cmd_selftest(cfg, a, out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn cmd_count(cfg: &RunConfig, args: &CountArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = build_spec(args.k, args.n, args.r, args.a.as_deref())?;
    let method: Method = args.method.parse()?;
    let res = count(&spec, method, &cfg.count_options())?;
    write_count(cfg.output_format, &res, out)?;
    Ok(EXIT_OK)
}

fn write_count(format: OutputFormat, res: &CountResult, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, res),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["modulus", "count", "method"]).map_err(csv_err)?;
            let total = res.per_factor.iter().map(|l| l.modulus).product::<u64>();
            w.write_record([total.to_string(), res.count.to_string(), res.method.to_string()])
                .map_err(csv_err)?;
            if res.per_factor.len() > 1 {
                for l in &res.per_factor {
                    w.write_record([l.modulus.to_string(), l.count.to_string(), l.method.to_string()])
                        .map_err(csv_err)?;
                }
            }
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "{}", res.count)?;
            writeln!(out, "method: {}", res.method)?;
            for l in &res.per_factor {
                writeln!(out, "  mod {}: {} ({})", l.modulus, l.count, l.method)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct TableRow {
    r: u64,
    #[serde(serialize_with = "crate::report::ser_biguint")]
    count: BigUint,
}

pub fn cmd_table(cfg: &RunConfig, args: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    if args.rmax == 0 {
        return Err(Error::InvalidArgument("rmax must be positive".into()));
    }
    if args.rmax > cfg.sum_budget_x {
        return Err(Error::BudgetExceeded {
            what: "rmax",
            value: args.rmax,
            budget: cfg.sum_budget_x,
        });
    }
    let opts = cfg.count_options();
    let rows = (1..=args.rmax)
        .map(|r| {
            let spec = build_spec(args.k, args.n, r, args.a.as_deref())?;
            Ok(TableRow {
                r,
                count: count(&spec, Method::Auto, &opts)?.count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match cfg.output_format {
        OutputFormat::Json => write_json(out, &rows)?,
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["r", "count"]).map_err(csv_err)?;
            for row in &rows {
                w.write_record([row.r.to_string(), row.count.to_string()])
                    .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            for row in &rows {
                writeln!(out, "{} {}", row.r, row.count)?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_oeis(cfg: &RunConfig, args: &OeisArgs, out: &mut dyn Write) -> Result<i32> {
    crate::oeis::family(&args.seq)?;
    let bfile = BFile::read(&args.seq, &args.bfile)?;
    let report = compare(&bfile, args.limit, &cfg.count_options())?;
    write_oeis(cfg.output_format, &report, out)?;
    Ok(if report.agrees() { EXIT_OK } else { EXIT_MISMATCH })
}

fn write_oeis(format: OutputFormat, rep: &OeisReport, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rep),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["sequence", "compared", "mismatch_index", "expected", "computed"])
                .map_err(csv_err)?;
            let (i, e, c) = match &rep.first_mismatch {
                Some(m) => (m.index.to_string(), m.expected.to_string(), m.computed.to_string()),
                None => Default::default(),
            };
            w.write_record([rep.sequence.clone(), rep.compared.to_string(), i, e, c])
                .map_err(csv_err)?;
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "{} ({}): {} entries compared",
                rep.sequence, rep.family, rep.compared
            )?;
            match &rep.first_mismatch {
                None => writeln!(out, "all entries agree")?,
                Some(m) => writeln!(
                    out,
                    "mismatch at index {} (r = {}): b-file {}, computed {}",
                    m.index, m.modulus, m.expected, m.computed
                )?,
            }
            Ok(())
        }
    }
}

pub fn cmd_sum(cfg: &RunConfig, args: &SumArgs, out: &mut dyn Write) -> Result<i32> {
    let case = AsymptoticCase::new(args.k, args.n)?;
    let grid = match (&args.x, &args.grid) {
        (Some(x), _) => vec![*x],
        (None, Some(g)) => parse_list(g, "grid")?,
        (None, None) => return Err(Error::InvalidArgument("one of --x or --grid is required".into())),
    };
    let constants = compute_constants(cfg.precision_digits)?;
    let report = residual_report(&case, &grid, &constants, cfg.sum_budget_x)?;
    write_sum(cfg.output_format, &case, &report, out)?;
    Ok(EXIT_OK)
}

fn write_sum(format: OutputFormat, case: &AsymptoticCase, rep: &AsymptoticReport, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rep),
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["x", "partial_sum", "main_term", "residual", "normalized_residual"])
                .map_err(csv_err)?;
            for row in rep.rows() {
                w.write_record([
                    row.x.to_string(),
                    row.partial_sum.to_string(),
                    row.main_term.to_string(),
                    row.residual.to_string(),
                    row.normalized_residual.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "{case}: main term {}", case.main_term.expression)?;
            writeln!(out, "envelope {}", rep.envelope)?;
            for (row, ratio) in rep.rows().zip(&rep.ratios) {
                writeln!(
                    out,
                    "x={} sum={} main={} residual={} normalized={:.6} ratio={:.8}",
                    row.x, row.partial_sum, row.main_term, row.residual, row.normalized_residual, ratio
                )?;
            }
            Ok(())
        }
    }
}

pub fn cmd_selftest(cfg: &RunConfig, args: &SelftestArgs, out: &mut dyn Write) -> Result<i32> {
    let results = selftest::run(args.rmax, args.kmax, &cfg.count_options())?;
    let all = results.iter().all(SuiteResult::passed);
    match cfg.output_format {
        OutputFormat::Json => write_json(out, &results)?,
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["suite", "checked", "failed", "passed"])
                .map_err(csv_err)?;
            for r in &results {
                w.write_record([
                    r.name.to_string(),
                    r.checked.to_string(),
                    r.failures.len().to_string(),
                    r.passed().to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            for r in &results {
                let status = if r.passed() { "pass" } else { "FAIL" };
                writeln!(out, "{status} {} ({} checks)", r.name, r.checked)?;
                for f in &r.failures {
                    writeln!(out, "    {f}")?;
                }
            }
            let passed = results.iter().filter(|r| r.passed()).count();
            writeln!(out, "{passed}/{} suites passed", results.len())?;
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_MISMATCH })
}
