//! Straight-line programs over the fan-in-two {AND, OR} plus NOT basis.
//!
//! A program on `n` inputs is a gate sequence where gate `i` (1-based, gates
//! start at index `n+1`) reads from strictly earlier indices; indices `1..=n`
//! are the inputs. Viewed over all `2^n` rows at once, every index carries a
//! [`Column`], and the program becomes a matrix whose rows are its
//! computations.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::table::{Column, TruthTable, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate g{index} reads from g{input}, which is not an earlier index")]
    BadGateInput { index: usize, input: usize },
    #[error("output index g{0} is out of range")]
    BadOutput(usize),
    #[error("program has no output")]
    NoOutput,
    #[error("witness has no value for column {0}")]
    MissingColumn(Column),
    #[error("program arity {got} does not match table arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("program disagrees with the table at row {row}")]
    DoesNotCompute { row: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Gate operation kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Not => 1,
        }
    }

    pub fn apply(self, a: bool, b: Option<bool>) -> bool {
        match self {
            GateKind::And => a & b.expect("AND takes two inputs"),
            GateKind::Or => a | b.expect("OR takes two inputs"),
            GateKind::Not => !a,
        }
    }

    pub fn apply_columns(self, a: &Column, b: Option<&Column>) -> Column {
        match self {
            GateKind::And => a.and(b.expect("AND takes two inputs")),
            GateKind::Or => a.or(b.expect("OR takes two inputs")),
            GateKind::Not => a.complement(),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => write!(f, "AND"),
            GateKind::Or => write!(f, "OR"),
            GateKind::Not => write!(f, "NOT"),
        }
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, CircuitError> {
        match s {
            "AND" => Ok(GateKind::And),
            "OR" => Ok(GateKind::Or),
            "NOT" => Ok(GateKind::Not),
            other => Err(CircuitError::Parse(format!("unknown gate kind '{other}'"))),
        }
    }
}

/// One gate with references to earlier indices (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    And(usize, usize),
    Or(usize, usize),
    Not(usize),
}

impl Gate {
    pub fn kind(self) -> GateKind {
        match self {
            Gate::And(..) => GateKind::And,
            Gate::Or(..) => GateKind::Or,
            Gate::Not(..) => GateKind::Not,
        }
    }

    pub fn inputs(self) -> (usize, Option<usize>) {
        match self {
            Gate::And(a, b) | Gate::Or(a, b) => (a, Some(b)),
            Gate::Not(a) => (a, None),
        }
    }

    fn remap(self, map: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::And(a, b) => Gate::And(map(a), map(b)),
            Gate::Or(a, b) => Gate::Or(map(a), map(b)),
            Gate::Not(a) => Gate::Not(map(a)),
        }
    }
}

/// A straight-line program: `n` inputs, an ordered gate list, and one or
/// more designated output indices (the last gate by default). The size of a
/// program is its gate count; inputs are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    arity: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Program {
    pub fn new(arity: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self, CircuitError> {
        // guess-extended circuits run wider than the column-packing limit;
        // only the matrix-view methods require arity <= MAX_ARITY
        assert!(arity >= 1 && arity <= 24, "arity out of range");
        let width = arity + gates.len();
        for (j, gate) in gates.iter().enumerate() {
            let index = arity + j + 1;
            let (a, b) = gate.inputs();
            for input in std::iter::once(a).chain(b) {
                if input == 0 || input >= index {
                    return Err(CircuitError::BadGateInput { index, input });
                }
            }
        }
        if outputs.is_empty() {
            return Err(CircuitError::NoOutput);
        }
        for &o in &outputs {
            if o == 0 || o > width {
                return Err(CircuitError::BadOutput(o));
            }
        }
        Ok(Program { arity, gates, outputs })
    }

    /// Program whose single output is its last gate.
    pub fn from_gates(arity: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let out = arity + gates.len();
        Program::new(arity, gates, vec![out])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Gate count (inputs excluded).
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Total number of indices: inputs plus gates.
    pub fn width(&self) -> usize {
        self.arity + self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn output(&self) -> usize {
        self.outputs[0]
    }

    pub fn with_outputs(mut self, outputs: Vec<usize>) -> Result<Self, CircuitError> {
        if outputs.is_empty() {
            return Err(CircuitError::NoOutput);
        }
        for &o in &outputs {
            if o == 0 || o > self.width() {
                return Err(CircuitError::BadOutput(o));
            }
        }
        self.outputs = outputs;
        Ok(self)
    }

    /// The trace of a computation: the value at every index, inputs first.
    pub fn trace(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.arity, "input width mismatch");
        let mut u = Vec::with_capacity(self.width());
        u.extend_from_slice(x);
        for gate in &self.gates {
            let (a, b) = gate.inputs();
            u.push(gate.kind().apply(u[a - 1], b.map(|b| u[b - 1])));
        }
        u
    }

    /// Primary output together with the full trace.
    pub fn evaluate(&self, x: &[bool]) -> (bool, Vec<bool>) {
        let u = self.trace(x);
        (u[self.output() - 1], u)
    }

    pub fn evaluate_outputs(&self, x: &[bool]) -> Vec<bool> {
        let u = self.trace(x);
        self.outputs.iter().map(|&o| u[o - 1]).collect()
    }

    /// All columns of the program matrix, computed bit-parallel over rows.
    pub fn columns(&self) -> Vec<Column> {
        let mut cols: Vec<Column> = (1..=self.arity).map(|i| Column::input(i, self.arity)).collect();
        for gate in &self.gates {
            let (a, b) = gate.inputs();
            let col = gate.kind().apply_columns(&cols[a - 1], b.map(|b| &cols[b - 1]));
            cols.push(col);
        }
        cols
    }

    /// Column at one index (1-based); indices `1..=n` are the input columns.
    pub fn gate_column(&self, index: usize) -> Column {
        assert!(index >= 1 && index <= self.width(), "gate index out of range");
        self.columns()[index - 1]
    }

    pub fn output_column(&self) -> Column {
        self.gate_column(self.output())
    }

    pub fn computes(&self, table: &TruthTable) -> bool {
        self.first_mismatch(table).is_none()
    }

    /// First row where the primary output disagrees with the table.
    pub fn first_mismatch(&self, table: &TruthTable) -> Option<usize> {
        assert_eq!(table.arity(), self.arity, "table arity mismatch");
        let out = self.output_column();
        (0..table.rows()).find(|&r| out.bit(r) != table.value(r))
    }

    /// Whether a total witness satisfies `w(a) op w(b) = w(out)` at every
    /// gate, values taken on the gate's columns.
    pub fn consistent_with(&self, w: &Witness) -> Result<bool, CircuitError> {
        let cols = self.columns();
        let value = |idx: usize| -> Result<bool, CircuitError> {
            w.required(&cols[idx - 1]).map_err(|_| CircuitError::MissingColumn(cols[idx - 1]))
        };
        for (j, gate) in self.gates.iter().enumerate() {
            let (a, b) = gate.inputs();
            let va = value(a)?;
            let vb = b.map(value).transpose()?;
            let vout = value(self.arity + j + 1)?;
            if gate.kind().apply(va, vb) != vout {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rewires duplicate columns to their first occurrence, drops gates whose
    /// column equals an input column or an earlier gate's column, and removes
    /// gates outside the dependency cone of the outputs. The result computes
    /// the same outputs with pairwise-distinct gate columns, none of which is
    /// an input column.
    pub fn dedup_columns(&self) -> Program {
        let cols = self.columns();
        let mut seen: Vec<(u64, usize)> = Vec::new(); // column bits -> kept index
        for i in 1..=self.arity {
            seen.push((cols[i - 1].bits(), i));
        }
        let mut remap: Vec<usize> = (0..=self.width()).collect();
        let mut kept: Vec<Gate> = Vec::new();
        for (j, gate) in self.gates.iter().enumerate() {
            let old_index = self.arity + j + 1;
            let bits = cols[old_index - 1].bits();
            if let Some(&(_, idx)) = seen.iter().find(|&&(b, _)| b == bits) {
                remap[old_index] = idx;
            } else {
                kept.push(gate.remap(|i| remap[i]));
                let new_index = self.arity + kept.len();
                seen.push((bits, new_index));
                remap[old_index] = new_index;
            }
        }
        let outputs: Vec<usize> = self.outputs.iter().map(|&o| remap[o]).collect();

        // trim gates outside the outputs' dependency cone
        let width = self.arity + kept.len();
        let mut used = vec![false; width + 1];
        let mut stack: Vec<usize> = outputs.clone();
        while let Some(i) = stack.pop() {
            if used[i] || i <= self.arity {
                continue;
            }
            used[i] = true;
            let (a, b) = kept[i - self.arity - 1].inputs();
            stack.push(a);
            stack.extend(b);
        }
        let mut compact: Vec<usize> = vec![0; width + 1];
        for i in 1..=self.arity {
            compact[i] = i;
        }
        let mut trimmed = Vec::new();
        for (j, gate) in kept.iter().enumerate() {
            let i = self.arity + j + 1;
            if used[i] {
                trimmed.push(gate.remap(|k| compact[k]));
                compact[i] = self.arity + trimmed.len();
            }
        }
        let outputs = outputs.into_iter().map(|o| compact[o]).collect();
        Program::new(self.arity, trimmed, outputs).expect("dedup preserves well-formedness")
    }

    /// A random program computing the table, grown gate by gate and truncated
    /// at the first gate realizing the result column. Retries until one is
    /// found, so it terminates quickly only at desk scale.
    pub fn random_computing(table: &TruthTable, max_size: usize, rng: &mut impl Rng) -> Program {
        let n = table.arity();
        let target = table.result_column();
        for i in 1..=n {
            if Column::input(i, n) == target {
                return Program::new(n, vec![], vec![i]).unwrap();
            }
        }
        loop {
            let mut cols: Vec<Column> = (1..=n).map(|i| Column::input(i, n)).collect();
            let mut gates: Vec<Gate> = Vec::new();
            while gates.len() < max_size {
                let index = n + gates.len() + 1;
                let a = rng.gen_range(1..index);
                let gate = match rng.gen_range(0..3) {
                    0 => Gate::And(a, rng.gen_range(1..index)),
                    1 => Gate::Or(a, rng.gen_range(1..index)),
                    _ => Gate::Not(a),
                };
                let (a, b) = gate.inputs();
                let col = gate.kind().apply_columns(&cols[a - 1], b.map(|b| &cols[b - 1]));
                cols.push(col);
                gates.push(gate);
                if col == target {
                    return Program::new(n, gates, vec![index]).unwrap();
                }
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.arity)?;
        for (j, gate) in self.gates.iter().enumerate() {
            let index = self.arity + j + 1;
            let (a, b) = gate.inputs();
            match b {
                Some(b) => writeln!(f, "g{} = {} g{} g{}", index, gate.kind(), a, b)?,
                None => writeln!(f, "g{} = {} g{}", index, gate.kind(), a)?,
            }
        }
        if self.outputs.len() == 1 {
            write!(f, "output g{}", self.outputs[0])
        } else {
            write!(f, "outputs")?;
            for o in &self.outputs {
                write!(f, " g{o}")?;
            }
            Ok(())
        }
    }
}

impl FromStr for Program {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, CircuitError> {
        let (program, rest) = parse_program_lines(s)?;
        if let Some(extra) = rest {
            return Err(CircuitError::Parse(format!("unexpected extra line '{extra}'")));
        }
        Ok(program)
    }
}

fn gate_ref(token: &str) -> Result<usize, CircuitError> {
    let idx = token
        .strip_prefix('g')
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| CircuitError::Parse(format!("expected gate reference, got '{token}'")))?;
    Ok(idx)
}

/// Parses the common circuit body: `n=<k>` header (already consumed headers
/// may pass the arity in), gate lines, and an `output`/`outputs` line.
pub(crate) fn parse_program_body<'a>(
    arity: usize,
    lines: impl Iterator<Item = &'a str>,
) -> Result<Program, CircuitError> {
    let mut gates = Vec::new();
    let mut outputs: Option<Vec<usize>> = None;
    for line in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["output", out] => {
                outputs = Some(vec![gate_ref(out)?]);
                break;
            }
            ["outputs", rest @ ..] if !rest.is_empty() => {
                outputs = Some(rest.iter().map(|t| gate_ref(t)).collect::<Result<_, _>>()?);
                break;
            }
            [name, "=", kind, a] => {
                let index = gate_ref(name)?;
                if index != arity + gates.len() + 1 {
                    return Err(CircuitError::Parse(format!(
                        "gate g{index} out of order (expected g{})",
                        arity + gates.len() + 1
                    )));
                }
                let kind: GateKind = kind.parse()?;
                if kind != GateKind::Not {
                    return Err(CircuitError::Parse(format!("{kind} takes two inputs")));
                }
                gates.push(Gate::Not(gate_ref(a)?));
            }
            [name, "=", kind, a, b] => {
                let index = gate_ref(name)?;
                if index != arity + gates.len() + 1 {
                    return Err(CircuitError::Parse(format!(
                        "gate g{index} out of order (expected g{})",
                        arity + gates.len() + 1
                    )));
                }
                let gate = match kind.parse()? {
                    GateKind::And => Gate::And(gate_ref(a)?, gate_ref(b)?),
                    GateKind::Or => Gate::Or(gate_ref(a)?, gate_ref(b)?),
                    GateKind::Not => {
                        return Err(CircuitError::Parse("NOT takes one input".into()));
                    }
                };
                gates.push(gate);
            }
            _ => return Err(CircuitError::Parse(format!("bad circuit line '{line}'"))),
        }
    }
    let outputs = outputs.ok_or_else(|| CircuitError::Parse("missing output line".into()))?;
    Program::new(arity, gates, outputs)
}

fn parse_program_lines(s: &str) -> Result<(Program, Option<String>), CircuitError> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| CircuitError::Parse("empty circuit".into()))?;
    let arity = crate::table::parse_arity_header(header)
        .map_err(|e| CircuitError::Parse(e.to_string()))?;
    let mut body: Vec<&str> = Vec::new();
    let mut rest = None;
    let mut done = false;
    for line in lines {
        if done {
            rest = Some(line.to_string());
            break;
        }
        if line.starts_with("output") {
            done = true;
        }
        body.push(line);
    }
    if !done {
        return Err(CircuitError::Parse("missing output line".into()));
    }
    let program = parse_program_body(arity, body.into_iter())?;
    Ok((program, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TruthTable;
    use rand::SeedableRng;

    fn and_program() -> Program {
        Program::from_gates(2, vec![Gate::And(1, 2)]).unwrap()
    }

    fn xor_program() -> Program {
        // (x1 OR x2) AND NOT (x1 AND x2)
        Program::from_gates(
            2,
            vec![Gate::Or(1, 2), Gate::And(1, 2), Gate::Not(4), Gate::And(3, 5)],
        )
        .unwrap()
    }

    #[test]
    fn evaluation_and_trace() {
        let p = and_program();
        assert_eq!(p.evaluate(&[true, true]), (true, vec![true, true, true]));
        assert_eq!(p.evaluate(&[true, false]), (false, vec![true, false, false]));

        let p = xor_program();
        let (out, u) = p.evaluate(&[true, false]);
        assert!(out);
        assert_eq!(u, vec![true, false, true, false, true, true]);
    }

    #[test]
    fn gate_columns() {
        let p = and_program();
        assert_eq!(p.gate_column(3).to_string(), "0001");
        assert_eq!(p.gate_column(1).to_string(), "0011");
        let p = xor_program();
        assert_eq!(p.output_column().to_string(), "0110");
    }

    #[test]
    fn trace_matches_matrix_rows() {
        for p in [and_program(), xor_program()] {
            let cols = p.columns();
            for r in 0..4 {
                let x = [r & 2 != 0, r & 1 != 0];
                let u = p.trace(&x);
                for (i, col) in cols.iter().enumerate() {
                    assert_eq!(u[i], col.bit(r));
                }
            }
        }
    }

    #[test]
    fn consistency() {
        let p = and_program();
        // row selectors are always consistent: they are actual computations
        for r in 0..4 {
            let w = Witness::total(p.columns().into_iter().map(|c| (c, c.bit(r))));
            assert!(p.consistent_with(&w).unwrap());
        }
        // negating the output column of a row selector breaks the last gate
        let cols = p.columns();
        let w = Witness::total(vec![
            (cols[0], true),
            (cols[1], true),
            (cols[2], false),
        ]);
        assert!(!p.consistent_with(&w).unwrap());

        let w = Witness::total(vec![(cols[0], true), (cols[1], true)]);
        assert!(matches!(p.consistent_with(&w), Err(CircuitError::MissingColumn(_))));
    }

    #[test]
    fn computes_table() {
        let and = TruthTable::from_fn(2, |x| x[0] & x[1]);
        let xor = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        assert!(and_program().computes(&and));
        assert!(xor_program().computes(&xor));
        assert_eq!(and_program().first_mismatch(&xor), Some(1));
    }

    #[test]
    fn dedup_rewires_and_trims() {
        // g3 = NOT x1, g4 = NOT x1 (duplicate), g5 = AND x1 x2 via the dup,
        // g6 dead gate
        let p = Program::new(
            2,
            vec![
                Gate::Not(1),
                Gate::Not(1),
                Gate::Not(4),
                Gate::And(5, 2),
                Gate::Or(1, 2),
            ],
            vec![6],
        )
        .unwrap();
        let d = p.dedup_columns();
        // NOT (NOT x1) = x1 drops as a duplicate of the input, the AND
        // rewires to the inputs, and the NOTs and the OR are dead
        assert_eq!(d.size(), 1);
        let and = TruthTable::from_fn(2, |x| x[0] & x[1]);
        assert!(d.computes(&and));
        let cols = d.columns();
        for (i, a) in cols.iter().enumerate() {
            for b in cols.iter().skip(i + 1) {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn random_programs_compute_their_table() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let xor = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        for _ in 0..50 {
            let p = Program::random_computing(&xor, 12, &mut rng);
            assert!(p.computes(&xor));
            let d = p.dedup_columns();
            assert!(d.computes(&xor));
        }
    }

    #[test]
    fn text_round_trip() {
        let p = xor_program();
        let text = p.to_string();
        let q: Program = text.parse().unwrap();
        assert_eq!(p, q);
        assert!("n=2\ng3 = AND g1 g2".parse::<Program>().is_err());
        assert!("n=2\ng4 = AND g1 g2\noutput g4".parse::<Program>().is_err());
        assert!("n=2\ng3 = AND g1 g3\noutput g3".parse::<Program>().is_err());
    }
}
