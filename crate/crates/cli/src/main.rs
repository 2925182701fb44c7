//! Command-line workbench: polymorphism reports, circuit synthesis and
//! search, cover checking and conversion, and TSVND circuit tooling.
//!
//! Exit codes: 0 on success or a valid verdict, 1 on an invalid verdict
//! (a counterexample or offending artifact is printed), 2 on usage, parse,
//! or precondition errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polycirc_core::{
    circuit_from_cover, cover_from_circuit, merge_nd_cond, optimal_circuit, pol_cover_from_tsvnd,
    run_theorem_sweep, split_tsvnd, synthesize_from_polymorphism, synthesize_multi_output,
    tsvnd_from_pol_cover, Cover, CoverFlavor, CoverVerdict, MultiTable, NamedOperation, NdCircuit,
    Program, SweepCheck, SweepOptions, SweepReport, TruthTable, TsvndCircuit, Witness,
};

const SCHEMA_VERSION: u32 = 1;

/// Synthesis preference when several operations apply: cheapest realization
/// first.
const OP_PREFERENCE: [NamedOperation; 4] =
    [NamedOperation::And, NamedOperation::Or, NamedOperation::Aff, NamedOperation::Maj];

#[derive(Parser)]
#[command(
    name = "polycirc",
    version,
    about = "Polymorphism-based workbench for small Boolean circuits and gate covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TableArgs {
    /// Truth-table file (`n=<k>` header plus a row of 2^k bits)
    #[arg(long)]
    table: Option<PathBuf>,
    /// Inline output bits, row 0 first (repeat for multi-output tables)
    #[arg(long)]
    bits: Vec<String>,
    /// Arity accompanying --bits
    #[arg(long)]
    n: Option<usize>,
}

impl TableArgs {
    fn load_multi(&self) -> Result<MultiTable> {
        match (&self.table, self.bits.is_empty()) {
            (Some(path), true) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                text.parse::<MultiTable>().map_err(|e| anyhow!("{}: {e}", path.display()))
            }
            (None, false) => {
                let n = self.n.ok_or_else(|| anyhow!("--bits requires --n"))?;
                let text = format!("n={n}\n{}", self.bits.join("\n"));
                text.parse::<MultiTable>().map_err(|e| anyhow!("--bits: {e}"))
            }
            (Some(_), false) => bail!("pass either --table or --bits, not both"),
            (None, true) => bail!("a truth table is required (--table or --bits with --n)"),
        }
    }

    fn load(&self) -> Result<TruthTable> {
        let multi = self.load_multi()?;
        if multi.output_count() != 1 {
            bail!("this command takes a single-output table");
        }
        Ok(multi.output_table(0))
    }
}

#[derive(Args)]
struct BasisArg {
    /// Gate basis; only the default is supported
    #[arg(long, default_value = "and,or,not")]
    basis: String,
}

impl BasisArg {
    fn check(&self) -> Result<()> {
        if self.basis != "and,or,not" {
            bail!("unsupported basis '{}': only and,or,not is available", self.basis);
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report the trivial class and detected non-trivial polymorphisms
    Classify {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize a linear-size circuit from a detected polymorphism
    Synth {
        #[command(flatten)]
        table: TableArgs,
        /// Operation to build from (defaults to the first detected one)
        #[arg(long)]
        op: Option<NamedOperation>,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Exhaustively search for a minimum-gate circuit
    Optimal {
        #[command(flatten)]
        table: TableArgs,
        /// Gate budget for the search
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Check that a circuit computes a table
    VerifyCircuit {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the distinct-row selections witnessing failed closure
    Witnesses {
        #[command(flatten)]
        table: TableArgs,
        /// Operation to check (defaults to all four)
        #[arg(long)]
        op: Option<NamedOperation>,
        #[arg(long)]
        json: bool,
    },
    /// Verify a cover by exhaustive witness search
    CoverCheck {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Extract a cover from a circuit's gates
    CoverFromCircuit {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        circuit: PathBuf,
        /// Flavor to stamp on the result
        #[arg(long, default_value = "ppol")]
        flavor: String,
        /// Rewire duplicate columns before extracting
        #[arg(long)]
        dedup: bool,
    },
    /// Rebuild a circuit from a ppol cover
    CircuitFromCover {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Build a TSVND circuit from a pol cover
    TsvndBuild {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        cover: PathBuf,
        /// Emit the compiled program form instead of stored constraints
        #[arg(long)]
        program_form: bool,
    },
    /// Validate a TSVND circuit against a table
    TsvndCheck {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        tsvnd: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Extract a pol cover from a TSVND circuit
    TsvndToCover {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        tsvnd: PathBuf,
    },
    /// Split a TSVND circuit into its ND and coND halves
    NdSplit {
        #[arg(long)]
        tsvnd: PathBuf,
        #[arg(long)]
        out_nd: PathBuf,
        #[arg(long)]
        out_cond: PathBuf,
    },
    /// Merge an ND circuit and a coND circuit into a TSVND circuit
    NdMerge {
        #[arg(long)]
        nd: PathBuf,
        #[arg(long)]
        cond: PathBuf,
    },
    /// Run the per-function verification sweep
    Sweep {
        #[arg(long)]
        n: usize,
        /// Comma-separated subset of s3,s4,s5
        #[arg(long, default_value = "s3,s4,s5")]
        checks: String,
        /// Gate budget for the optimal-circuit oracle
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

const VALID: ExitCode = ExitCode::SUCCESS;
const INVALID: ExitCode = ExitCode::FAILURE;

fn read_file(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_program(path: &PathBuf) -> Result<Program> {
    read_file(path)?.parse::<Program>().map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_cover(path: &PathBuf, table: &TruthTable) -> Result<Cover> {
    Cover::parse_with_table(&read_file(path)?, table.clone())
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_tsvnd(path: &PathBuf) -> Result<TsvndCircuit> {
    read_file(path)?.parse::<TsvndCircuit>().map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_nd(path: &PathBuf) -> Result<NdCircuit> {
    read_file(path)?.parse::<NdCircuit>().map_err(|e| anyhow!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct ClassifyReport {
    schema_version: u32,
    n: usize,
    function: String,
    trivial_class: String,
    polymorphisms: Vec<String>,
}

#[derive(Serialize)]
struct WitnessReport {
    schema_version: u32,
    n: usize,
    function: String,
    operations: Vec<OperationWitnesses>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense_anti_polymorphisms: Option<u64>,
}

#[derive(Serialize)]
struct OperationWitnesses {
    operation: String,
    is_polymorphism: bool,
    witnesses: Vec<WitnessEntry>,
}

#[derive(Serialize)]
struct WitnessEntry {
    rows: Vec<usize>,
    image: String,
}

#[derive(Serialize)]
struct VerifyCircuitReport {
    schema_version: u32,
    computes: bool,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatch_row: Option<usize>,
}

#[derive(Serialize)]
struct CoverCheckReport {
    schema_version: u32,
    flavor: String,
    gates: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Vec<WitnessLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condition_violation: Option<String>,
}

#[derive(Serialize)]
struct WitnessLine {
    column: String,
    value: String,
}

#[derive(Serialize)]
struct TsvndCheckReport {
    schema_version: u32,
    size: usize,
    #[serde(flatten)]
    report: polycirc_core::TsvndReport,
}

fn witness_lines(w: &Witness) -> Vec<WitnessLine> {
    w.columns()
        .map(|(c, v)| WitnessLine { column: c.to_string(), value: v.to_string() })
        .collect()
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Classify { table, json } => {
            let f = table.load()?;
            let report = ClassifyReport {
                schema_version: SCHEMA_VERSION,
                n: f.arity(),
                function: f.result_column().to_string(),
                trivial_class: f.classify_trivial().to_string(),
                polymorphisms: f
                    .detect_nontrivial_polymorphisms()
                    .iter()
                    .map(|op| op.to_string())
                    .collect(),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("function: {} (n={})", report.function, report.n);
                println!("class: {}", report.trivial_class);
                println!("polymorphisms: {}", join_or_none(&report.polymorphisms));
            }
            Ok(VALID)
        }

        Command::Synth { table, op, basis } => {
            basis.check()?;
            let multi = table.load_multi()?;
            if multi.output_count() == 1 {
                let f = multi.output_table(0);
                let op = match op {
                    Some(op) => op,
                    None => pick_op(&f)?,
                };
                let program = synthesize_from_polymorphism(&f, op)?;
                println!("{program}");
            } else {
                let op = op.ok_or_else(|| anyhow!("--op is required for multi-output tables"))?;
                let program = synthesize_multi_output(&multi, op)?;
                println!("{program}");
            }
            Ok(VALID)
        }

        Command::Optimal { table, max_size, basis } => {
            basis.check()?;
            let f = table.load()?;
            if f.arity() > 4 {
                bail!("optimal search supports n <= 4");
            }
            match optimal_circuit(&f, max_size) {
                Some(program) => println!("{program}"),
                None => println!("none"),
            }
            Ok(VALID)
        }

        Command::VerifyCircuit { table, circuit, json } => {
            let f = table.load()?;
            let program = read_program(&circuit)?;
            if program.arity() != f.arity() {
                bail!("circuit arity {} does not match table arity {}", program.arity(), f.arity());
            }
            let mismatch = program.first_mismatch(&f);
            let report = VerifyCircuitReport {
                schema_version: SCHEMA_VERSION,
                computes: mismatch.is_none(),
                size: program.size(),
                mismatch_row: mismatch,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                match mismatch {
                    None => println!("ok: circuit computes the table (size {})", report.size),
                    Some(row) => println!("mismatch at row {row}: input {}", row_bits(&f, row)),
                }
            }
            Ok(if report.computes { VALID } else { INVALID })
        }

        Command::Witnesses { table, op, json } => {
            let f = table.load()?;
            let ops = match op {
                Some(op) => vec![op],
                None => NamedOperation::ALL.to_vec(),
            };
            let operations: Vec<OperationWitnesses> = ops
                .iter()
                .map(|&op| {
                    let witnesses = f.polymorphism_witnesses(&op.dense());
                    OperationWitnesses {
                        operation: op.to_string(),
                        is_polymorphism: f.is_polymorphism(&op.dense()),
                        witnesses: witnesses
                            .iter()
                            .map(|w| WitnessEntry {
                                rows: w.rows.clone(),
                                image: w.image.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                            })
                            .collect(),
                    }
                })
                .collect();
            let dense = (f.arity() <= 2)
                .then(|| polycirc_core::table::count_dense_anti_polymorphisms(&f));
            let report = WitnessReport {
                schema_version: SCHEMA_VERSION,
                n: f.arity(),
                function: f.result_column().to_string(),
                operations,
                dense_anti_polymorphisms: dense,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("function: {} (n={})", report.function, report.n);
                for op in &report.operations {
                    if op.is_polymorphism {
                        println!("{}: polymorphism (no witnesses)", op.operation);
                    } else {
                        println!("{}: {} witness selections", op.operation, op.witnesses.len());
                        for w in &op.witnesses {
                            let rows: Vec<String> = w.rows.iter().map(|r| r.to_string()).collect();
                            println!("  rows {} -> image {}", rows.join(","), w.image);
                        }
                    }
                }
                if let Some(count) = report.dense_anti_polymorphisms {
                    println!("dense total anti-polymorphisms: {count}");
                }
            }
            Ok(VALID)
        }

        Command::CoverCheck { table, cover, json } => {
            let f = table.load()?;
            let cover = read_cover(&cover, &f)?;
            let (report, code) = match cover.verify() {
                Ok(CoverVerdict::Valid) => (
                    CoverCheckReport {
                        schema_version: SCHEMA_VERSION,
                        flavor: cover.flavor().to_string(),
                        gates: cover.len(),
                        valid: true,
                        counterexample: None,
                        condition_violation: None,
                    },
                    VALID,
                ),
                Ok(CoverVerdict::Uncovered(w)) => (
                    CoverCheckReport {
                        schema_version: SCHEMA_VERSION,
                        flavor: cover.flavor().to_string(),
                        gates: cover.len(),
                        valid: false,
                        counterexample: Some(witness_lines(&w)),
                        condition_violation: None,
                    },
                    INVALID,
                ),
                Err(e) => (
                    CoverCheckReport {
                        schema_version: SCHEMA_VERSION,
                        flavor: cover.flavor().to_string(),
                        gates: cover.len(),
                        valid: false,
                        counterexample: None,
                        condition_violation: Some(e.to_string()),
                    },
                    INVALID,
                ),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else if report.valid {
                println!("valid: every witness is covered ({} gates)", report.gates);
            } else if let Some(reason) = &report.condition_violation {
                println!("invalid: {reason}");
            } else {
                println!("invalid: uncovered witness");
                for line in report.counterexample.as_deref().unwrap_or_default() {
                    println!("{} -> {}", line.column, line.value);
                }
            }
            Ok(code)
        }

        Command::CoverFromCircuit { table, circuit, flavor, dedup } => {
            let f = table.load()?;
            let flavor: CoverFlavor =
                flavor.parse().map_err(|e| anyhow!("--flavor: {e}"))?;
            let mut program = read_program(&circuit)?;
            if dedup {
                program = program.dedup_columns();
            }
            match cover_from_circuit(&program, &f) {
                Ok(cover) => {
                    println!("{}", cover.with_flavor(flavor));
                    Ok(VALID)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(INVALID)
                }
            }
        }

        Command::CircuitFromCover { table, cover } => {
            let f = table.load()?;
            let cover = read_cover(&cover, &f)?;
            match cover.verify() {
                Ok(CoverVerdict::Valid) => {}
                Ok(CoverVerdict::Uncovered(w)) => {
                    println!("invalid cover: uncovered witness");
                    println!("{w}");
                    return Ok(INVALID);
                }
                Err(e) => {
                    println!("invalid cover: {e}");
                    return Ok(INVALID);
                }
            }
            match circuit_from_cover(&cover) {
                Ok(program) => {
                    println!("{program}");
                    Ok(VALID)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(INVALID)
                }
            }
        }

        Command::TsvndBuild { table, cover, program_form } => {
            let f = table.load()?;
            let cover = read_cover(&cover, &f)?.with_flavor(CoverFlavor::Pol);
            match cover.verify()? {
                CoverVerdict::Valid => {}
                CoverVerdict::Uncovered(w) => {
                    println!("invalid cover: uncovered witness");
                    println!("{w}");
                    return Ok(INVALID);
                }
            }
            let circuit = tsvnd_from_pol_cover(&cover)?;
            if program_form {
                println!("{}", circuit.to_program_form());
            } else {
                println!("{circuit}");
            }
            Ok(VALID)
        }

        Command::TsvndCheck { table, tsvnd, json } => {
            let f = table.load()?;
            let circuit = read_tsvnd(&tsvnd)?;
            if circuit.det_arity() != f.arity() {
                bail!(
                    "circuit deterministic arity {} does not match table arity {}",
                    circuit.det_arity(),
                    f.arity()
                );
            }
            let report = circuit.validate(&f);
            let ok = report.all_ok();
            if json {
                let wrapped = TsvndCheckReport {
                    schema_version: SCHEMA_VERSION,
                    size: circuit.size(),
                    report,
                };
                println!("{}", serde_json::to_string_pretty(&wrapped)?);
            } else {
                println!(
                    "total: {} single_valued: {} computes_f: {}",
                    report.total, report.single_valued, report.computes_f
                );
                if let Some(row) = report.not_total_at {
                    println!("no accepting guess at row {row}: input {}", row_bits(&f, row));
                }
                if let Some(row) = report.conflict_at {
                    println!("both values accepted at row {row}: input {}", row_bits(&f, row));
                }
                if let Some(row) = report.mismatch_at {
                    println!("wrong value at row {row}: input {}", row_bits(&f, row));
                }
            }
            Ok(if ok { VALID } else { INVALID })
        }

        Command::TsvndToCover { table, tsvnd } => {
            let f = table.load()?;
            let circuit = read_tsvnd(&tsvnd)?;
            match pol_cover_from_tsvnd(&circuit, &f) {
                Ok(cover) => {
                    println!("{cover}");
                    Ok(VALID)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(INVALID)
                }
            }
        }

        Command::NdSplit { tsvnd, out_nd, out_cond } => {
            let circuit = read_tsvnd(&tsvnd)?;
            match split_tsvnd(&circuit) {
                Ok((nd, cond)) => {
                    fs::write(&out_nd, format!("{nd}\n"))
                        .with_context(|| format!("writing {}", out_nd.display()))?;
                    fs::write(&out_cond, format!("{cond}\n"))
                        .with_context(|| format!("writing {}", out_cond.display()))?;
                    println!(
                        "nd: {} ({} gates), cond: {} ({} gates)",
                        out_nd.display(),
                        nd.size(),
                        out_cond.display(),
                        cond.size()
                    );
                    Ok(VALID)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(INVALID)
                }
            }
        }

        Command::NdMerge { nd, cond } => {
            let c1 = read_nd(&nd)?;
            let c2 = read_nd(&cond)?;
            match merge_nd_cond(&c1, &c2) {
                Ok(merged) => {
                    println!("{merged}");
                    Ok(VALID)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(INVALID)
                }
            }
        }

        Command::Sweep { n, checks, max_size, json } => {
            let checks: BTreeSet<SweepCheck> = checks
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|e| anyhow!("--checks: {e}"))?;
            let mut options = SweepOptions::new(n, checks);
            options.max_size = max_size;
            let report = run_theorem_sweep(&options)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_sweep(&report);
            }
            Ok(if report.all_passed() { VALID } else { INVALID })
        }
    }
}

fn pick_op(f: &TruthTable) -> Result<NamedOperation> {
    let detected = f.detect_nontrivial_polymorphisms();
    OP_PREFERENCE
        .iter()
        .copied()
        .find(|op| detected.contains(op))
        .ok_or_else(|| anyhow!("the table has no non-trivial polymorphism; nothing to build from"))
}

fn join_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(" ")
    }
}

fn row_bits(f: &TruthTable, row: usize) -> String {
    f.row_input(row).iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn print_sweep(report: &SweepReport) {
    let status = |s: polycirc_core::sweep::CheckStatus| match s {
        polycirc_core::sweep::CheckStatus::Pass => "pass",
        polycirc_core::sweep::CheckStatus::Skip => "skip",
        polycirc_core::sweep::CheckStatus::Fail => "fail",
    };
    for record in &report.records {
        let mut line = format!("f={} class={}", record.function, record.trivial_class);
        line.push_str(&format!(" ops={}", join_or_none(&record.polymorphisms)));
        for (name, outcome) in [("s3", &record.s3), ("s4", &record.s4), ("s5", &record.s5)] {
            if let Some(outcome) = outcome {
                line.push_str(&format!(" {name}={}", status(outcome.status)));
            }
        }
        println!("{line}");
        for (name, outcome) in [("s3", &record.s3), ("s4", &record.s4), ("s5", &record.s5)] {
            if let Some(outcome) = outcome {
                if !outcome.passed() {
                    println!("  {name}: {}", outcome.detail);
                    if let Some(cx) = &outcome.counterexample {
                        for l in cx.lines() {
                            println!("    {l}");
                        }
                    }
                }
            }
        }
    }
    let s = &report.summary;
    println!(
        "summary: n={} functions={} checks={} passed={} skipped={} failed={}",
        report.n, s.functions, s.checks_run, s.passed, s.skipped, s.failed
    );
}
