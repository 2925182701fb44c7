//! Linear-size circuit synthesis from a detected closure operation.
//!
//! When a table is closed under one of the four named operations, `f(x)` is
//! reachable by folding the operation over 2n+2 precomputed boundary values
//! (`f` on the all-zeros input, the all-ones input, and the inputs with a
//! unique 1 or a unique 0). Each loop step conditionally updates an
//! accumulator `r` from the current input bit; because every boundary value
//! is a known constant at synthesis time, each step folds to at most a few
//! gates, giving a concrete bound of `5n + 2` gates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Gate, Program};
use crate::table::{parse_arity_header, Column, NamedOperation, TableError, TruthTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("{op} is not a polymorphism of the table")]
    NotAPolymorphism { op: NamedOperation },
    #[error("the multi-output relation is not closed under {op} (output {output})")]
    ClosureFails { op: NamedOperation, output: usize },
    #[error("tables disagree at row {row}, which is outside the patch")]
    PatchOutsideDisagreement { row: usize },
    #[error("patch row {row} is out of range")]
    PatchRowOutOfRange { row: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// The 2n+2 hard-wired values the constructions fold over: `one[i]` is `f`
/// on the input with a unique 1 at position `i+1`, `zero[i]` on the input
/// with a unique 0, plus `f` at the all-zeros and all-ones inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryBits {
    pub one: Vec<bool>,
    pub zero: Vec<bool>,
    pub all_zeros: bool,
    pub all_ones: bool,
}

impl BoundaryBits {
    pub fn of(table: &TruthTable) -> Self {
        let n = table.arity();
        let full = (1usize << n) - 1;
        BoundaryBits {
            one: (1..=n).map(|i| table.value(1 << (n - i))).collect(),
            zero: (1..=n).map(|i| table.value(full ^ (1 << (n - i)))).collect(),
            all_zeros: table.value(0),
            all_ones: table.value(full),
        }
    }

    /// Flat view `t_1 ... t_{2n+2}`.
    pub fn bits(&self) -> Vec<bool> {
        let mut t = self.one.clone();
        t.extend_from_slice(&self.zero);
        t.push(self.all_zeros);
        t.push(self.all_ones);
        t
    }
}

/// Accumulator state while folding: either a known constant or a wire.
#[derive(Clone, Copy)]
enum Acc {
    Const(bool),
    Wire(usize),
}

struct Builder {
    arity: usize,
    gates: Vec<Gate>,
}

impl Builder {
    fn new(arity: usize) -> Self {
        Builder { arity, gates: Vec::new() }
    }

    fn push(&mut self, gate: Gate) -> usize {
        self.gates.push(gate);
        self.arity + self.gates.len()
    }

    fn not(&mut self, a: usize) -> usize {
        self.push(Gate::Not(a))
    }

    fn and(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::And(a, b))
    }

    fn or(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Or(a, b))
    }

    fn xor(&mut self, a: usize, b: usize) -> usize {
        let either = self.or(a, b);
        let both = self.and(a, b);
        let nboth = self.not(both);
        self.and(either, nboth)
    }

    /// `acc AND x` / `acc OR x` with constant folding.
    fn fold_and(&mut self, acc: Acc, x: usize) -> Acc {
        match acc {
            Acc::Const(false) => Acc::Const(false),
            Acc::Const(true) => Acc::Wire(x),
            Acc::Wire(w) => Acc::Wire(self.and(w, x)),
        }
    }

    fn fold_or(&mut self, acc: Acc, x: usize) -> Acc {
        match acc {
            Acc::Const(true) => Acc::Const(true),
            Acc::Const(false) => Acc::Wire(x),
            Acc::Wire(w) => Acc::Wire(self.or(w, x)),
        }
    }

    fn fold_xor(&mut self, acc: Acc, x: usize) -> Acc {
        match acc {
            Acc::Const(false) => Acc::Wire(x),
            Acc::Const(true) => Acc::Wire(self.not(x)),
            Acc::Wire(w) => Acc::Wire(self.xor(w, x)),
        }
    }

    /// Materializes the accumulator as an output index, spending two gates
    /// for a constant (`x1 AND NOT x1` or `x1 OR NOT x1`).
    fn materialize(&mut self, acc: Acc) -> usize {
        match acc {
            Acc::Wire(w) => w,
            Acc::Const(c) => {
                let nx = self.not(1);
                if c {
                    self.or(1, nx)
                } else {
                    self.and(1, nx)
                }
            }
        }
    }

    fn finish(mut self, acc: Acc) -> Program {
        let out = self.materialize(acc);
        Program::new(self.arity, self.gates, vec![out]).expect("builder produces valid programs")
    }
}

/// Emits the fold for one named operation; `acc` starts at the matching
/// boundary constant and each input position contributes at most 4 gates.
fn fold_construction(builder: &mut Builder, table: &TruthTable, op: NamedOperation) -> Acc {
    let n = table.arity();
    let t = BoundaryBits::of(table);
    match op {
        NamedOperation::Or => {
            // r starts at f(0..0); an input bit set to 1 joins f(e_i)
            let mut acc = Acc::Const(t.all_zeros);
            for i in 1..=n {
                if t.one[i - 1] {
                    acc = builder.fold_or(acc, i);
                }
                // a zero boundary bit folds to the identity update
            }
            acc
        }
        NamedOperation::And => {
            let mut acc = Acc::Const(t.all_ones);
            for i in 1..=n {
                if !t.zero[i - 1] {
                    acc = builder.fold_and(acc, i);
                }
            }
            acc
        }
        NamedOperation::Aff => {
            // the update r := t_{2n+1} xor r xor t_i flips r exactly when
            // the two constants differ
            let mut acc = Acc::Const(t.all_zeros);
            for i in 1..=n {
                if t.all_zeros != t.one[i - 1] {
                    acc = builder.fold_xor(acc, i);
                }
            }
            acc
        }
        NamedOperation::Maj => {
            // maj(a, r, c) is r when a != c and the constant a when a == c,
            // so each step is a multiplexer on x_i that folds accordingly
            let mut acc = Acc::Const(t.all_ones);
            for i in 1..=n {
                if t.all_zeros == t.zero[i - 1] {
                    if t.all_zeros {
                        // x_i = 0 forces r to 1: r OR NOT x_i
                        acc = match acc {
                            Acc::Const(true) => Acc::Const(true),
                            Acc::Const(false) => Acc::Wire(builder.not(i)),
                            Acc::Wire(w) => {
                                let nx = builder.not(i);
                                Acc::Wire(builder.or(w, nx))
                            }
                        };
                    } else {
                        // x_i = 0 forces r to 0: r AND x_i
                        acc = builder.fold_and(acc, i);
                    }
                }
            }
            acc
        }
    }
}

/// Builds a program computing the table from one of its non-trivial
/// polymorphisms. The result has at most `5n + 2` gates.
pub fn synthesize_from_polymorphism(
    table: &TruthTable,
    op: NamedOperation,
) -> Result<Program, SynthesisError> {
    if !table.is_closed_under(op) {
        return Err(SynthesisError::NotAPolymorphism { op });
    }
    let mut builder = Builder::new(table.arity());
    let acc = fold_construction(&mut builder, table, op);
    Ok(builder.finish(acc))
}

/// A Boolean function with `n` inputs and `m` outputs; the relation view is
/// the `(n+m)`-column matrix over the `2^n` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTable {
    arity: usize,
    outputs: Vec<Column>,
}

impl MultiTable {
    pub fn new(arity: usize, outputs: Vec<Column>) -> Self {
        assert!(!outputs.is_empty(), "at least one output");
        for col in &outputs {
            assert_eq!(col.len(), 1 << arity, "output column length mismatch");
        }
        MultiTable { arity, outputs }
    }

    pub fn from_tables(tables: &[TruthTable]) -> Self {
        assert!(!tables.is_empty(), "at least one output");
        let arity = tables[0].arity();
        MultiTable::new(arity, tables.iter().map(|t| t.result_column()).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_table(&self, j: usize) -> TruthTable {
        TruthTable::new(self.arity, self.outputs[j].bits())
    }

    pub fn outputs(&self) -> &[Column] {
        &self.outputs
    }
}

impl fmt::Display for MultiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.arity)?;
        for col in &self.outputs {
            write!(f, "\n{col}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiTable {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, TableError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| TableError::Parse("empty table".into()))?;
        let arity = parse_arity_header(header)?;
        let mut outputs = Vec::new();
        for line in lines {
            let col: Column = line.parse()?;
            if col.len() != 1 << arity {
                return Err(TableError::Parse(format!(
                    "expected {} values, got {}",
                    1usize << arity,
                    col.len()
                )));
            }
            outputs.push(col);
        }
        if outputs.is_empty() {
            return Err(TableError::Parse("missing value rows".into()));
        }
        Ok(MultiTable::new(arity, outputs))
    }
}

/// Multi-output variant: one fold per output over shared inputs, so the gate
/// count is at most `m (5n + 2)`. The joint `(n+m)`-column relation is
/// closed under the operation exactly when every output column is.
pub fn synthesize_multi_output(
    table: &MultiTable,
    op: NamedOperation,
) -> Result<Program, SynthesisError> {
    for j in 0..table.output_count() {
        if !table.output_table(j).is_closed_under(op) {
            return Err(SynthesisError::ClosureFails { op, output: j + 1 });
        }
    }
    let mut builder = Builder::new(table.arity());
    let mut outputs = Vec::with_capacity(table.output_count());
    for j in 0..table.output_count() {
        let sub = table.output_table(j);
        let acc = fold_construction(&mut builder, &sub, op);
        let out = builder.materialize(acc);
        outputs.push(out);
    }
    Ok(Program::new(builder.arity, builder.gates, outputs)
        .expect("builder produces valid programs"))
}

/// Computes `f` by synthesizing its nearby closed function `g` and patching
/// the listed rows with hard-wired comparators: each patch row costs an
/// input-equality check plus a multiplexer, at most `2n + 1` gates, for a
/// total bound of `5n + 2 + (2n + 1) |patch|`.
pub fn synthesize_patched(
    f: &TruthTable,
    g: &TruthTable,
    op: NamedOperation,
    patch: &BTreeSet<usize>,
) -> Result<Program, SynthesisError> {
    assert_eq!(f.arity(), g.arity(), "tables must share an arity");
    let n = f.arity();
    for &row in patch {
        if row >= f.rows() {
            return Err(SynthesisError::PatchRowOutOfRange { row });
        }
    }
    for row in 0..f.rows() {
        if f.value(row) != g.value(row) && !patch.contains(&row) {
            return Err(SynthesisError::PatchOutsideDisagreement { row });
        }
    }
    if !g.is_closed_under(op) {
        return Err(SynthesisError::NotAPolymorphism { op });
    }

    let mut builder = Builder::new(n);
    let mut acc = fold_construction(&mut builder, g, op);
    for &row in patch {
        // comparator: AND of literals matching the row's bits
        let mut eq: Option<usize> = None;
        for i in 1..=n {
            let bit = (row >> (n - i)) & 1 == 1;
            let lit = if bit { i } else { builder.not(i) };
            eq = Some(match eq {
                None => lit,
                Some(e) => builder.and(e, lit),
            });
        }
        let eq = eq.expect("n >= 1");
        // multiplex the hard-wired f(row) over the accumulator
        acc = if f.value(row) {
            builder.fold_or(acc, eq)
        } else {
            let neq = builder.not(eq);
            builder.fold_and(acc, neq)
        };
    }
    Ok(builder.finish(acc))
}

/// Concrete gate-count bound asserted by the sweep for the plain
/// construction.
pub fn synthesis_size_bound(arity: usize) -> usize {
    5 * arity + 2
}

/// Bound for the patched construction.
pub fn patched_size_bound(arity: usize, patch_len: usize) -> usize {
    synthesis_size_bound(arity) + (2 * arity + 1) * patch_len
}
