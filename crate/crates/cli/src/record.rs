//! Line-delimited JSON records.
//!
//! ```json
//! {"p": 7, "checks": {"morley": {"holds": true, "lhs": 323, "rhs": 323}}, "residual_mod_p": 2, "elapsed_us": 0}
//! ```

use std::time::Duration;

use indexmap::IndexMap;
use morley_core::checks::{CheckId, CheckResult, CongruenceReport};
use morley_core::{Modulus, OddPrime, Residue};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub holds: bool,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub p: u64,
    pub checks: IndexMap<String, CheckRecord>,
    pub residual_mod_p: Option<u64>,
    pub elapsed_us: u64,
}

impl ReportRecord {
    pub fn from_report(report: &CongruenceReport, timing: bool) -> Self {
        let checks = report
            .results
            .iter()
            .map(|r| {
                (
                    r.id.name().to_string(),
                    CheckRecord {
                        holds: r.holds,
                        lhs: r.lhs.value(),
                        rhs: r.rhs.value(),
                    },
                )
            })
            .collect();
        Self {
            p: report.p.get(),
            checks,
            residual_mod_p: report.morley_residual.map(|r| r.value()),
            elapsed_us: if timing {
                report.elapsed().as_micros() as u64
            } else {
                0
            },
        }
    }

    /// Rebuilds the report. Per-check timings are not part of the record, so
    /// the whole elapsed time is attributed to the first check.
    pub fn to_report(&self) -> Result<CongruenceReport, CliError> {
        let p = OddPrime::new(self.p)?;
        let mut results = Vec::with_capacity(self.checks.len());
        for (name, rec) in &self.checks {
            let id: CheckId = name
                .parse()
                .map_err(|e| CliError::Record(format!("{e}")))?;
            let modulus = Modulus::new(p, id.modulus_power())?;
            let result = CheckResult::compare(id, canonical(modulus, rec.lhs)?, canonical(modulus, rec.rhs)?);
            if result.holds != rec.holds {
                return Err(CliError::Record(format!(
                    "{name}: holds = {} contradicts lhs = {}, rhs = {}",
                    rec.holds, rec.lhs, rec.rhs
                )));
            }
            results.push(result);
        }
        let morley_residual = self
            .residual_mod_p
            .map(|r| canonical(Modulus::new(p, 1)?, r))
            .transpose()?;
        let mut timings = vec![Duration::ZERO; results.len()];
        if let Some(first) = timings.first_mut() {
            *first = Duration::from_micros(self.elapsed_us);
        }
        Ok(CongruenceReport {
            p,
            results,
            timings,
            morley_residual,
        })
    }
}

fn canonical(modulus: Modulus, value: u64) -> Result<Residue, CliError> {
    if value >= modulus.m() {
        return Err(CliError::Record(format!(
            "{value} is not a canonical residue modulo {modulus}"
        )));
    }
    Ok(modulus.residue(value))
}

/// One row of `residuals` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub p: u64,
    pub residual_mod_p: u64,
    pub zero: bool,
}

impl ResidualRecord {
    pub fn new(p: OddPrime, residual: Residue) -> Self {
        Self {
            p: p.get(),
            residual_mod_p: residual.value(),
            zero: residual.is_zero(),
        }
    }
}
