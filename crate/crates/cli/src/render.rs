//! Text, JSON-lines and CSV renderers for reports and residual rows.

use std::io::Write;

use clap::ValueEnum;
use morley_core::checks::CongruenceReport;

use crate::error::CliError;
use crate::record::{ReportRecord, ResidualRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub const REPORT_CSV_HEADER: [&str; 5] = ["p", "check", "holds", "lhs", "rhs"];
pub const RESIDUAL_CSV_HEADER: [&str; 3] = ["p", "residual_mod_p", "zero"];

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out)
}

/// Streams records of one kind to an output, writing the CSV header first.
pub struct Sink<W: Write> {
    format: Format,
    timing: bool,
    out: W,
}

impl<W: Write> Sink<W> {
    pub fn new(format: Format, timing: bool, out: W) -> Self {
        Self { format, timing, out }
    }

    pub fn report_header(&mut self) -> Result<(), CliError> {
        if self.format == Format::Csv {
            let mut w = csv_writer(&mut self.out);
            w.write_record(REPORT_CSV_HEADER)?;
            w.flush()?;
        }
        Ok(())
    }

    pub fn residual_header(&mut self) -> Result<(), CliError> {
        if self.format == Format::Csv {
            let mut w = csv_writer(&mut self.out);
            w.write_record(RESIDUAL_CSV_HEADER)?;
            w.flush()?;
        }
        Ok(())
    }

    /// One compact record per prime (scan output).
    pub fn report(&mut self, report: &CongruenceReport) -> Result<(), CliError> {
        match self.format {
            Format::Text => {
                let passed = report.results.iter().filter(|r| r.holds).count();
                write!(
                    self.out,
                    "p={} {} {}/{}",
                    report.p,
                    if report.all_hold() { "ok" } else { "FAIL" },
                    passed,
                    report.results.len()
                )?;
                match report.morley_residual {
                    Some(r) => write!(self.out, " residual={}", r.value())?,
                    None => write!(self.out, " residual=-")?,
                }
                if report.residual_is_zero() {
                    write!(self.out, " ZERO")?;
                }
                writeln!(self.out, " elapsed_us={}", self.elapsed_us(report))?;
                for r in report.results.iter().filter(|r| !r.holds) {
                    writeln!(self.out, "  {r}")?;
                }
            }
            Format::Json => self.json_line(&ReportRecord::from_report(report, self.timing))?,
            Format::Csv => {
                let mut w = csv_writer(&mut self.out);
                for r in &report.results {
                    w.write_record([
                        report.p.to_string(),
                        r.id.name().to_string(),
                        r.holds.to_string(),
                        r.lhs.value().to_string(),
                        r.rhs.value().to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    /// Full per-check listing (verify output).
    pub fn detailed_report(&mut self, report: &CongruenceReport) -> Result<(), CliError> {
        if self.format != Format::Text {
            return self.report(report);
        }
        writeln!(self.out, "p = {}", report.p)?;
        for r in &report.results {
            writeln!(self.out, "  {r}")?;
        }
        match report.morley_residual {
            Some(r) => {
                write!(self.out, "  morley residual mod p: {}", r.value())?;
                if r.is_zero() {
                    write!(self.out, " (zero: congruence holds mod p^4)")?;
                }
                writeln!(self.out)?;
            }
            None => writeln!(self.out, "  morley residual mod p: n/a (p beyond the p^4 cap)")?,
        }
        writeln!(self.out, "  elapsed: {} us", self.elapsed_us(report))?;
        Ok(())
    }

    pub fn residual(&mut self, rec: &ResidualRecord) -> Result<(), CliError> {
        match self.format {
            Format::Text => {
                write!(self.out, "p={} residual={}", rec.p, rec.residual_mod_p)?;
                if rec.zero {
                    write!(self.out, " ZERO")?;
                }
                writeln!(self.out)?;
            }
            Format::Json => self.json_line(rec)?,
            Format::Csv => {
                let mut w = csv_writer(&mut self.out);
                w.write_record([
                    rec.p.to_string(),
                    rec.residual_mod_p.to_string(),
                    rec.zero.to_string(),
                ])?;
                w.flush()?;
            }
        }
        Ok(())
    }

    fn json_line<T: serde::Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        serde_json::to_writer(&mut self.out, value)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    fn elapsed_us(&self, report: &CongruenceReport) -> u128 {
        if self.timing {
            report.elapsed().as_micros()
        } else {
            0
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn flush(&mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }

    pub fn out(&mut self) -> &mut W {
        &mut self.out
    }
}
