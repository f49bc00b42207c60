use std::fs::File;
use std::io::{BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use morley_core::checks::{full_report, morley_residual, CheckId};
use morley_core::primes::primes_in_range;
use morley_core::{Error, OddPrime, PrimeRange, PRIME_CAP, PRIME_CAP_P4};

use crate::error::CliError;
use crate::pipeline::run_ordered;
use crate::record::ResidualRecord;
use crate::render::{Format, Sink};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CAP_HELP: &str = "Arithmetic is fixed-width: verify and scan accept p < 2^21 (2097152); \
residuals, and the residual column of reports, need p^4 and accept p < 2^15 (32768).";

#[derive(Debug, Parser)]
#[command(
    name = "morley",
    version,
    about = "Exact checks of Morley's congruence (-1)^((p-1)/2) C(p-1,(p-1)/2) = 4^(p-1) mod p^3 and its proof chain",
    after_help = CAP_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run checks for a single prime
    Verify {
        #[arg(long)]
        prime: u64,
        /// Comma-separated check names, or `all`
        #[arg(long, default_value = "all", value_parser = parse_checks)]
        checks: CheckList,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Report zero elapsed time (for reproducible output)
        #[arg(long)]
        no_timing: bool,
    },
    /// Run checks for every prime p > 3 in [from, to]
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Comma-separated check names, or `all`
        #[arg(long, default_value = "all", value_parser = parse_checks)]
        checks: CheckList,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write records here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; output order does not depend on this
        #[arg(long, default_value = "1")]
        jobs: NonZeroUsize,
        /// Periodic progress on standard error
        #[arg(long)]
        progress: bool,
        /// Report zero elapsed time (for reproducible output)
        #[arg(long)]
        no_timing: bool,
    },
    /// Morley residual ((-1)^((p-1)/2) C(p-1,(p-1)/2) - 4^(p-1)) / p^3 mod p for each prime
    Residuals {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        jobs: NonZeroUsize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckList(pub Vec<CheckId>);

pub fn parse_checks(s: &str) -> Result<CheckList, String> {
    if s.trim() == "all" {
        return Ok(CheckList(CheckId::ALL.to_vec()));
    }
    let ids = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<CheckId>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err("at least one check is required".into());
    }
    Ok(CheckList(ids))
}

/// Validated settings of a `scan` run.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub range: PrimeRange,
    pub checks: Vec<CheckId>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub progress: bool,
    pub timing: bool,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ScanSummary {
    pub primes: u64,
    pub passed: u64,
    pub failed: u64,
    pub residual_zeros: u64,
}

impl std::fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "summary: primes={} passed={} failed={} residual_zeros={}",
            self.primes, self.passed, self.failed, self.residual_zeros
        )
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify {
            prime,
            checks,
            format,
            no_timing,
        } => cmd_verify(prime, &checks.0, format, !no_timing, stdout),
        Command::Scan {
            from,
            to,
            checks,
            format,
            out,
            jobs,
            progress,
            no_timing,
        } => PrimeRange::new(from, to)
            .map_err(CliError::from)
            .and_then(|range| {
                let config = ScanConfig {
                    range,
                    checks: checks.0,
                    format,
                    out,
                    jobs: jobs.get(),
                    progress,
                    timing: !no_timing,
                };
                cmd_scan(&config, stdout, stderr)
            }),
        Command::Residuals {
            from,
            to,
            format,
            out,
            jobs,
        } => PrimeRange::new(from, to)
            .map_err(CliError::from)
            .and_then(|range| cmd_residuals(range, format, out, jobs.get(), stdout, stderr)),
    };
    if let Err(e) = &outcome {
        let _ = writeln!(stderr, "error: {e}");
    }
    exit_code(&outcome)
}

/// 0 when everything held, 1 when some check failed, 2 for usage, range
/// and I/O errors.
pub fn exit_code(outcome: &Result<bool, CliError>) -> i32 {
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_USAGE,
    }
}

fn open_output<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

/// Prints one report; `Ok(true)` iff every check holds.
pub fn cmd_verify(
    prime: u64,
    checks: &[CheckId],
    format: Format,
    timing: bool,
    stdout: &mut dyn Write,
) -> Result<bool, CliError> {
    if prime >= PRIME_CAP {
        return Err(Error::Range {
            what: "p",
            value: prime,
            limit: format!("verify requires p < {PRIME_CAP}"),
        }
        .into());
    }
    let p = OddPrime::new(prime)?;
    let report = full_report(p, checks)?;
    let mut sink = Sink::new(format, timing, stdout);
    sink.report_header()?;
    sink.detailed_report(&report)?;
    sink.flush()?;
    Ok(report.all_hold())
}

/// Streams one record per prime in ascending order; `Ok(true)` iff every
/// check held for every prime.
pub fn cmd_scan(config: &ScanConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, CliError> {
    if config.checks.is_empty() {
        return Err(CliError::Usage("at least one check is required".into()));
    }
    let primes = primes_in_range(config.range)?;
    let mut sink = Sink::new(config.format, config.timing, open_output(&config.out, stdout)?);
    sink.report_header()?;
    let mut summary = ScanSummary::default();
    let mut progress = Progress::new(config.progress);
    let checks = &config.checks;
    run_ordered(
        primes,
        config.jobs,
        |p| full_report(p, checks),
        |report| -> Result<(), CliError> {
            let report = report?;
            sink.report(&report)?;
            summary.primes += 1;
            if report.all_hold() {
                summary.passed += 1;
            } else {
                summary.failed += 1;
            }
            if report.residual_is_zero() {
                summary.residual_zeros += 1;
            }
            progress.tick(stderr, report.p, summary.primes);
            Ok(())
        },
    )?;
    finish(&mut sink, stderr, &summary.to_string())?;
    Ok(summary.failed == 0)
}

/// `Ok(false)` only if some residual could not be formed, which would
/// contradict Morley's congruence itself. Zero residuals are findings.
pub fn cmd_residuals(
    range: PrimeRange,
    format: Format,
    out: Option<PathBuf>,
    jobs: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool, CliError> {
    if range.hi() >= PRIME_CAP_P4 {
        return Err(Error::Range {
            what: "to",
            value: range.hi(),
            limit: format!("residuals use p^4 arithmetic and require p < {PRIME_CAP_P4}"),
        }
        .into());
    }
    let primes = primes_in_range(range)?;
    let mut sink = Sink::new(format, true, open_output(&out, stdout)?);
    sink.residual_header()?;
    let (mut count, mut zeros, mut broken) = (0u64, 0u64, 0u64);
    run_ordered(
        primes,
        jobs,
        |p| (p, morley_residual(p)),
        |(p, residual)| -> Result<(), CliError> {
            count += 1;
            match residual {
                Ok(r) => {
                    let rec = ResidualRecord::new(p, r);
                    zeros += u64::from(rec.zero);
                    sink.residual(&rec)
                }
                Err(e) => {
                    broken += 1;
                    writeln!(stderr, "p={p}: residual undefined: {e}")?;
                    Ok(())
                }
            }
        },
    )?;
    let line = format!("summary: primes={count} residual_zeros={zeros} undefined={broken}");
    finish(&mut sink, stderr, &line)?;
    Ok(broken == 0)
}

/// Text output carries the summary inline; machine formats keep their data
/// stream clean and put it on standard error.
fn finish<W: Write>(sink: &mut Sink<W>, stderr: &mut dyn Write, line: &str) -> Result<(), CliError> {
    if sink.format() == Format::Text {
        writeln!(sink.out(), "{line}")?;
    } else {
        writeln!(stderr, "{line}")?;
    }
    sink.flush()
}

struct Progress {
    enabled: bool,
    last: Instant,
}

impl Progress {
    const EVERY: Duration = Duration::from_secs(1);

    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            last: Instant::now(),
        }
    }

    fn tick(&mut self, stderr: &mut dyn Write, p: OddPrime, done: u64) {
        if self.enabled && self.last.elapsed() >= Self::EVERY {
            let _ = writeln!(stderr, "progress: {done} primes, at p={p}");
            self.last = Instant::now();
        }
    }
}
