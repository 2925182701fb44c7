//! Exhaustive per-function verification sweeps at desk scale.
//!
//! For every function of the chosen arity, the sweep runs any of three
//! checks: `s3` (every detected closure operation synthesizes a correct
//! circuit within the `5n + 2` bound), `s4` (the optimal circuit's gates
//! form a valid `ppol` cover that converts back to an equal-size circuit),
//! and `s5` (the `pol` cover round-trips through a TSVND circuit with exact
//! size accounting). Reports are deterministic: fixed iteration orders,
//! fixed witness selection.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cover::{cover_from_circuit, circuit_from_cover, CoverFlavor, CoverVerdict};
use crate::search::optimal_circuit;
use crate::synthesis::{synthesis_size_bound, synthesize_from_polymorphism};
use crate::table::TruthTable;
use crate::tsvnd::{pol_cover_from_tsvnd, tsvnd_from_pol_cover};

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error("arity {n} is out of range for checks {checks:?} (s4/s5 need n <= 3, s3 needs n <= 4)")]
    InfeasibleArity { n: usize, checks: Vec<SweepCheck> },
    #[error("no checks requested")]
    NoChecks,
    #[error("parse error: {0}")]
    Parse(String),
}

/// One verified claim family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepCheck {
    S3,
    S4,
    S5,
}

impl fmt::Display for SweepCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepCheck::S3 => write!(f, "s3"),
            SweepCheck::S4 => write!(f, "s4"),
            SweepCheck::S5 => write!(f, "s5"),
        }
    }
}

impl FromStr for SweepCheck {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s {
            "s3" => Ok(SweepCheck::S3),
            "s4" => Ok(SweepCheck::S4),
            "s5" => Ok(SweepCheck::S5),
            other => Err(SweepError::Parse(format!("unknown check '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n: usize,
    pub checks: BTreeSet<SweepCheck>,
    /// Gate budget handed to the optimal-circuit search.
    pub max_size: usize,
}

impl SweepOptions {
    pub fn new(n: usize, checks: impl IntoIterator<Item = SweepCheck>) -> Self {
        SweepOptions { n, checks: checks.into_iter().collect(), max_size: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Skip,
    Fail,
}

/// Outcome of one check on one function; failures carry a reproducible
/// artifact (a witness, circuit, or cover in its text format).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn pass(detail: impl Into<String>) -> Self {
        CheckOutcome { status: CheckStatus::Pass, detail: detail.into(), counterexample: None }
    }

    fn skip(detail: impl Into<String>) -> Self {
        CheckOutcome { status: CheckStatus::Skip, detail: detail.into(), counterexample: None }
    }

    fn fail(detail: impl Into<String>, counterexample: Option<String>) -> Self {
        CheckOutcome { status: CheckStatus::Fail, detail: detail.into(), counterexample }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionRecord {
    /// Output bits of the function, row 0 first.
    pub function: String,
    pub trivial_class: String,
    pub polymorphisms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s3: Option<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s4: Option<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s5: Option<CheckOutcome>,
}

impl FunctionRecord {
    pub fn passed(&self) -> bool {
        [&self.s3, &self.s4, &self.s5]
            .into_iter()
            .flatten()
            .all(CheckOutcome::passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub functions: usize,
    pub checks_run: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub n: usize,
    pub checks: Vec<SweepCheck>,
    pub records: Vec<FunctionRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Runs the requested checks over every function in `B_n`.
pub fn run_theorem_sweep(options: &SweepOptions) -> Result<SweepReport, SweepError> {
    if options.checks.is_empty() {
        return Err(SweepError::NoChecks);
    }
    let heavy = options.checks.contains(&SweepCheck::S4) || options.checks.contains(&SweepCheck::S5);
    let limit = if heavy { 3 } else { 4 };
    if options.n < 1 || options.n > limit {
        return Err(SweepError::InfeasibleArity {
            n: options.n,
            checks: options.checks.iter().copied().collect(),
        });
    }

    let mut records = Vec::with_capacity(1usize << (1usize << options.n));
    for bits in 0..(1u64 << (1usize << options.n)) {
        records.push(check_function(options, TruthTable::new(options.n, bits)));
    }

    let mut summary =
        SweepSummary { functions: records.len(), checks_run: 0, passed: 0, skipped: 0, failed: 0 };
    for record in &records {
        for outcome in [&record.s3, &record.s4, &record.s5].into_iter().flatten() {
            summary.checks_run += 1;
            match outcome.status {
                CheckStatus::Pass => summary.passed += 1,
                CheckStatus::Skip => summary.skipped += 1,
                CheckStatus::Fail => summary.failed += 1,
            }
        }
    }
    Ok(SweepReport {
        schema_version: SWEEP_SCHEMA_VERSION,
        n: options.n,
        checks: options.checks.iter().copied().collect(),
        records,
        summary,
    })
}

fn check_function(options: &SweepOptions, table: TruthTable) -> FunctionRecord {
    let ops = table.detect_nontrivial_polymorphisms();
    let mut record = FunctionRecord {
        function: table.result_column().to_string(),
        trivial_class: table.classify_trivial().to_string(),
        polymorphisms: ops.iter().map(|op| op.to_string()).collect(),
        s3: None,
        s4: None,
        s5: None,
    };

    if options.checks.contains(&SweepCheck::S3) {
        record.s3 = Some(if ops.is_empty() {
            CheckOutcome::skip("no non-trivial polymorphism")
        } else {
            run_s3(&table)
        });
    }

    let needs_optimal =
        options.checks.contains(&SweepCheck::S4) || options.checks.contains(&SweepCheck::S5);
    let optimal = if needs_optimal { optimal_circuit(&table, options.max_size) } else { None };

    if options.checks.contains(&SweepCheck::S4) {
        record.s4 = Some(match &optimal {
            None => CheckOutcome::fail(
                format!("no circuit within {} gates", options.max_size),
                None,
            ),
            Some(p) => run_s4(&table, p),
        });
    }
    if options.checks.contains(&SweepCheck::S5) {
        record.s5 = Some(match &optimal {
            None => CheckOutcome::fail(
                format!("no circuit within {} gates", options.max_size),
                None,
            ),
            Some(p) => run_s5(&table, p),
        });
    }
    record
}

/// Every detected operation synthesizes a correct circuit within `5n + 2`.
fn run_s3(table: &TruthTable) -> CheckOutcome {
    let bound = synthesis_size_bound(table.arity());
    let mut sizes = Vec::new();
    for op in table.detect_nontrivial_polymorphisms() {
        let program = match synthesize_from_polymorphism(table, op) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::fail(format!("{op}: {e}"), None),
        };
        if let Some(row) = program.first_mismatch(table) {
            return CheckOutcome::fail(
                format!("{op}: synthesized circuit wrong at row {row}"),
                Some(program.to_string()),
            );
        }
        if program.size() > bound {
            return CheckOutcome::fail(
                format!("{op}: size {} exceeds bound {bound}", program.size()),
                Some(program.to_string()),
            );
        }
        sizes.push(format!("{op}:{}", program.size()));
    }
    CheckOutcome::pass(format!("sizes {} (bound {bound})", sizes.join(" ")))
}

/// The optimal circuit's gates verify as a `ppol` cover and convert back to
/// an equal-size circuit computing the function.
fn run_s4(table: &TruthTable, optimal: &crate::circuit::Program) -> CheckOutcome {
    let cover = match cover_from_circuit(optimal, table) {
        Ok(c) => c,
        Err(e) => return CheckOutcome::fail(format!("cover extraction: {e}"), None),
    };
    match cover.verify() {
        Ok(CoverVerdict::Valid) => {}
        Ok(CoverVerdict::Uncovered(w)) => {
            return CheckOutcome::fail("cover invalid", Some(w.to_string()));
        }
        Err(e) => return CheckOutcome::fail(format!("cover verification: {e}"), None),
    }
    let rebuilt = match circuit_from_cover(&cover) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(format!("cover conversion: {e}"), None),
    };
    if rebuilt.size() != cover.len() {
        return CheckOutcome::fail(
            format!("rebuilt size {} differs from cover size {}", rebuilt.size(), cover.len()),
            Some(rebuilt.to_string()),
        );
    }
    if let Some(row) = rebuilt.first_mismatch(table) {
        return CheckOutcome::fail(
            format!("rebuilt circuit wrong at row {row}"),
            Some(rebuilt.to_string()),
        );
    }
    CheckOutcome::pass(format!(
        "optimal size {} = cover size {}",
        optimal.size(),
        cover.len()
    ))
}

/// The optimal circuit's gates, read as a `pol` cover, convert to a TSVND
/// circuit that validates and converts back to a valid equal-size cover.
fn run_s5(table: &TruthTable, optimal: &crate::circuit::Program) -> CheckOutcome {
    let cover = match cover_from_circuit(optimal, table) {
        Ok(c) => c.with_flavor(CoverFlavor::Pol),
        Err(e) => return CheckOutcome::fail(format!("cover extraction: {e}"), None),
    };
    match cover.verify() {
        Ok(CoverVerdict::Valid) => {}
        Ok(CoverVerdict::Uncovered(w)) => {
            return CheckOutcome::fail("cover invalid", Some(w.to_string()));
        }
        Err(e) => return CheckOutcome::fail(format!("cover verification: {e}"), None),
    }
    let circuit = match tsvnd_from_pol_cover(&cover) {
        Ok(c) => c,
        Err(e) => return CheckOutcome::fail(format!("tsvnd construction: {e}"), None),
    };
    let report = circuit.validate(table);
    if !report.all_ok() {
        return CheckOutcome::fail(
            format!(
                "tsvnd validation failed (total={} single_valued={} computes_f={})",
                report.total, report.single_valued, report.computes_f
            ),
            Some(circuit.to_string()),
        );
    }
    let size_bound = 6 * cover.len() + 3;
    if circuit.size() > size_bound {
        return CheckOutcome::fail(
            format!("circuit size {} exceeds {size_bound}", circuit.size()),
            Some(circuit.to_string()),
        );
    }
    // the decode constant: each stored constraint costs at most 6 gates
    // plus a constant tri-state tail
    let program_form = circuit.to_program_form();
    let decode_bound = 6 * circuit.size() + 3;
    if program_form.size() > decode_bound {
        return CheckOutcome::fail(
            format!("program form size {} exceeds {decode_bound}", program_form.size()),
            Some(program_form.to_string()),
        );
    }
    let extracted = match pol_cover_from_tsvnd(&circuit, table) {
        Ok(c) => c,
        Err(e) => return CheckOutcome::fail(format!("cover extraction back: {e}"), None),
    };
    if extracted.len() != circuit.size() {
        return CheckOutcome::fail(
            format!(
                "extracted cover size {} differs from circuit size {}",
                extracted.len(),
                circuit.size()
            ),
            Some(extracted.to_string()),
        );
    }
    match extracted.verify() {
        Ok(CoverVerdict::Valid) => {}
        Ok(CoverVerdict::Uncovered(w)) => {
            return CheckOutcome::fail("extracted cover invalid", Some(w.to_string()));
        }
        Err(e) => return CheckOutcome::fail(format!("extracted cover verification: {e}"), None),
    }
    CheckOutcome::pass(format!(
        "cover {} -> tsvnd {} (program form {}) -> cover {}",
        cover.len(),
        circuit.size(),
        program_form.size(),
        extracted.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_sweep_passes_everything() {
        let options = SweepOptions::new(2, [SweepCheck::S3, SweepCheck::S4, SweepCheck::S5]);
        let report = run_theorem_sweep(&options).unwrap();
        assert_eq!(report.records.len(), 16);
        assert!(report.all_passed());
        // s3 passes exactly for the functions with a non-trivial polymorphism
        for record in &report.records {
            let s3 = record.s3.as_ref().unwrap();
            if record.polymorphisms.is_empty() {
                assert_eq!(s3.status, CheckStatus::Skip);
            } else {
                assert_eq!(s3.status, CheckStatus::Pass);
            }
        }
    }

    #[test]
    fn arity_checks() {
        let options = SweepOptions::new(4, [SweepCheck::S4]);
        assert!(matches!(
            run_theorem_sweep(&options),
            Err(SweepError::InfeasibleArity { .. })
        ));
        assert!(matches!(
            run_theorem_sweep(&SweepOptions::new(2, [])),
            Err(SweepError::NoChecks)
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let options = SweepOptions::new(2, [SweepCheck::S3, SweepCheck::S4]);
        let a = run_theorem_sweep(&options).unwrap();
        let b = run_theorem_sweep(&options).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
