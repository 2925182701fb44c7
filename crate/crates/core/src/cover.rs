//! Gate covers: unordered gate collections that catch every anti-polymorphism.
//!
//! A cover gate is a gate-as-matrix: explicit input and output columns with
//! the output equal to the operation of the inputs at every row. A `pol`
//! cover must render every total anti-polymorphism inconsistent with some
//! gate; a `ppol` cover must catch every partial one (a witness undefined on
//! a gate's output but defined on its inputs is caught too). Verification
//! searches assignments over the relevant columns only — the table's columns
//! plus the gates' columns — which is exhaustive because both membership and
//! coverage consult nothing else.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Gate, GateKind, Program};
use crate::table::{Column, TableError, TruthTable, Witness, WitnessValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("gate output column is not the operation of its inputs")]
    InconsistentGate,
    #[error("column length {got} does not match table rows {expected}")]
    ColumnLength { expected: usize, got: usize },
    #[error("condition (1) violated: gates {0} and {1} output the same column")]
    DuplicateOutputs(usize, usize),
    #[error("condition (2) violated: gate {0} reads the result column")]
    ResultColumnAsInput(usize),
    #[error("condition (3) violated: gate {0} outputs input column x{1}")]
    InputColumnAsOutput(usize, usize),
    #[error("witness has no value for column {0}")]
    MissingColumn(Column),
    #[error("program disagrees with the table at row {row}")]
    DoesNotCompute { row: usize },
    #[error("the result column is not produced by any gate")]
    MissingResultColumn,
    #[error("gate {0} reads column {1}, which no input or gate provides")]
    DanglingInput(usize, Column),
    #[error("the gates contain a cycle through gate {0}")]
    CycleDetected(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which witnesses a cover must catch: total assignments (`pol`) or partial
/// ones (`ppol`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverFlavor {
    Pol,
    Ppol,
}

impl fmt::Display for CoverFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverFlavor::Pol => write!(f, "pol"),
            CoverFlavor::Ppol => write!(f, "ppol"),
        }
    }
}

impl FromStr for CoverFlavor {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, CoverError> {
        match s {
            "pol" => Ok(CoverFlavor::Pol),
            "ppol" => Ok(CoverFlavor::Ppol),
            other => Err(CoverError::Parse(format!("unknown flavor '{other}'"))),
        }
    }
}

/// A gate as a matrix: one or two input columns and the output column they
/// determine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverGate {
    kind: GateKind,
    a: Column,
    b: Option<Column>,
    out: Column,
}

impl CoverGate {
    pub fn and(a: Column, b: Column) -> Self {
        CoverGate { kind: GateKind::And, a, b: Some(b), out: a.and(&b) }
    }

    pub fn or(a: Column, b: Column) -> Self {
        CoverGate { kind: GateKind::Or, a, b: Some(b), out: a.or(&b) }
    }

    pub fn not(a: Column) -> Self {
        CoverGate { kind: GateKind::Not, a, b: None, out: a.complement() }
    }

    /// Builds a gate from explicit columns, checking the defining property
    /// that the output is the operation of the inputs at every row.
    pub fn from_columns(
        kind: GateKind,
        a: Column,
        b: Option<Column>,
        out: Column,
    ) -> Result<Self, CoverError> {
        if (kind == GateKind::Not) != b.is_none() {
            return Err(CoverError::Parse(format!("{kind} has the wrong input count")));
        }
        let expected = kind.apply_columns(&a, b.as_ref());
        if expected != out {
            return Err(CoverError::InconsistentGate);
        }
        Ok(CoverGate { kind, a, b, out })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn input_a(&self) -> Column {
        self.a
    }

    pub fn input_b(&self) -> Option<Column> {
        self.b
    }

    pub fn output(&self) -> Column {
        self.out
    }

    /// The gate's columns in input-to-output order.
    pub fn columns(&self) -> impl Iterator<Item = Column> {
        std::iter::once(self.a).chain(self.b).chain(std::iter::once(self.out))
    }

    /// Whether the gate covers a witness. Total flavor: the witness values
    /// disagree with the gate's operation. Partial flavor: the inputs are
    /// defined and the output is undefined or disagrees.
    pub fn covers(&self, w: &Witness, flavor: CoverFlavor) -> Result<bool, CoverError> {
        let va = w.get(&self.a).ok_or(CoverError::MissingColumn(self.a))?;
        let vb = match self.b {
            Some(b) => Some(w.get(&b).ok_or(CoverError::MissingColumn(b))?),
            None => None,
        };
        let vout = w.get(&self.out).ok_or(CoverError::MissingColumn(self.out))?;
        match flavor {
            CoverFlavor::Pol => {
                let va = va.as_bool().ok_or(CoverError::MissingColumn(self.a))?;
                let vb = match (self.b, vb) {
                    (Some(b), Some(v)) => {
                        Some(v.as_bool().ok_or(CoverError::MissingColumn(b))?)
                    }
                    _ => None,
                };
                let vout = vout.as_bool().ok_or(CoverError::MissingColumn(self.out))?;
                Ok(self.kind.apply(va, vb) != vout)
            }
            CoverFlavor::Ppol => {
                let (Some(va), vb) = (va.as_bool(), vb.map(WitnessValue::as_bool)) else {
                    return Ok(false);
                };
                let vb = match vb {
                    Some(Some(v)) => Some(v),
                    Some(None) => return Ok(false),
                    None => None,
                };
                match vout.as_bool() {
                    None => Ok(true),
                    Some(vout) => Ok(self.kind.apply(va, vb) != vout),
                }
            }
        }
    }
}

impl fmt::Display for CoverGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            Some(b) => write!(f, "{} {} {} {}", self.kind, self.a, b, self.out),
            None => write!(f, "{} {} {}", self.kind, self.a, self.out),
        }
    }
}

/// A claimed cover: the table it is for, a flavor, and an unordered gate
/// collection. Input columns are never members; only computational gates
/// count toward the size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    table: TruthTable,
    flavor: CoverFlavor,
    gates: Vec<CoverGate>,
}

impl Cover {
    pub fn new(
        table: TruthTable,
        flavor: CoverFlavor,
        gates: Vec<CoverGate>,
    ) -> Result<Self, CoverError> {
        let rows = table.rows();
        for gate in &gates {
            for col in gate.columns() {
                if col.len() != rows {
                    return Err(CoverError::ColumnLength { expected: rows, got: col.len() });
                }
            }
        }
        Ok(Cover { table, flavor, gates })
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn flavor(&self) -> CoverFlavor {
        self.flavor
    }

    pub fn gates(&self) -> &[CoverGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn with_flavor(mut self, flavor: CoverFlavor) -> Self {
        self.flavor = flavor;
        self
    }

    /// Checks the structural side conditions on `ppol` covers: (1) pairwise
    /// distinct gate outputs, (2) the result column feeds no gate, (3) no
    /// gate outputs an input column.
    pub fn check_ppol_conditions(&self) -> Result<(), CoverError> {
        ppol_conditions(&self.table, &self.gates)
    }

    /// Exhaustive verification over all assignments to the relevant columns:
    /// valid iff no witness is an anti-polymorphism left uncovered by every
    /// gate. The search space is `2^|R|` for `pol` and `3^|R|` for `ppol`.
    pub fn verify(&self) -> Result<CoverVerdict, CoverError> {
        if self.flavor == CoverFlavor::Ppol {
            self.check_ppol_conditions()?;
        }
        let relevant = RelevantColumns::of(self);
        let columns = relevant.columns();
        let position: BTreeMap<Column, usize> =
            columns.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let n = self.table.arity();
        let input_pos: Vec<usize> =
            (1..=n).map(|i| position[&Column::input(i, n)]).collect();
        let result_pos = position[&self.table.result_column()];
        let gate_pos: Vec<(GateKind, usize, Option<usize>, usize)> = self
            .gates
            .iter()
            .map(|g| {
                (
                    g.kind(),
                    position[&g.input_a()],
                    g.input_b().map(|b| position[&b]),
                    position[&g.output()],
                )
            })
            .collect();

        match self.flavor {
            CoverFlavor::Pol => {
                let mut values = vec![false; columns.len()];
                loop {
                    if self.uncovered_total(&values, &input_pos, result_pos, &gate_pos) {
                        let witness = Witness::total(
                            columns.iter().zip(&values).map(|(c, v)| (*c, *v)),
                        );
                        return Ok(CoverVerdict::Uncovered(witness));
                    }
                    // advance the base-2 counter, least significant first
                    let mut i = 0;
                    loop {
                        if i == values.len() {
                            return Ok(CoverVerdict::Valid);
                        }
                        values[i] = !values[i];
                        if values[i] {
                            break;
                        }
                        i += 1;
                    }
                }
            }
            CoverFlavor::Ppol => {
                let mut values = vec![WitnessValue::Zero; columns.len()];
                loop {
                    if self.uncovered_partial(&values, &input_pos, result_pos, &gate_pos) {
                        let witness = Witness::partial(
                            columns.iter().zip(&values).map(|(c, v)| (*c, *v)),
                        );
                        return Ok(CoverVerdict::Uncovered(witness));
                    }
                    let mut i = 0;
                    loop {
                        if i == values.len() {
                            return Ok(CoverVerdict::Valid);
                        }
                        values[i] = match values[i] {
                            WitnessValue::Zero => WitnessValue::One,
                            WitnessValue::One => WitnessValue::Undef,
                            WitnessValue::Undef => WitnessValue::Zero,
                        };
                        if values[i] != WitnessValue::Zero {
                            break;
                        }
                        i += 1;
                    }
                }
            }
        }
    }

    fn uncovered_total(
        &self,
        values: &[bool],
        input_pos: &[usize],
        result_pos: usize,
        gate_pos: &[(GateKind, usize, Option<usize>, usize)],
    ) -> bool {
        let mut z = 0usize;
        for &p in input_pos {
            z = (z << 1) | values[p] as usize;
        }
        if self.table.value(z) == values[result_pos] {
            return false; // not an anti-polymorphism
        }
        for &(kind, pa, pb, pout) in gate_pos {
            if kind.apply(values[pa], pb.map(|p| values[p])) != values[pout] {
                return false; // covered
            }
        }
        true
    }

    fn uncovered_partial(
        &self,
        values: &[WitnessValue],
        input_pos: &[usize],
        result_pos: usize,
        gate_pos: &[(GateKind, usize, Option<usize>, usize)],
    ) -> bool {
        let mut z = 0usize;
        for &p in input_pos {
            match values[p].as_bool() {
                Some(v) => z = (z << 1) | v as usize,
                None => return false,
            }
        }
        match values[result_pos].as_bool() {
            Some(b) if self.table.value(z) != b => {}
            _ => return false,
        }
        for &(kind, pa, pb, pout) in gate_pos {
            let Some(va) = values[pa].as_bool() else { continue };
            let vb = match pb {
                Some(p) => match values[p].as_bool() {
                    Some(v) => Some(v),
                    None => continue,
                },
                None => None,
            };
            match values[pout].as_bool() {
                None => return false, // covered: undefined on the output
                Some(vout) => {
                    if kind.apply(va, vb) != vout {
                        return false; // covered: inconsistent
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} flavor={}", self.table.arity(), self.flavor)?;
        for gate in &self.gates {
            write!(f, "\n{gate}")?;
        }
        Ok(())
    }
}

impl Cover {
    /// Parses the cover text format; the table is supplied separately since
    /// the format stores only the arity and the gate matrices.
    pub fn parse_with_table(s: &str, table: TruthTable) -> Result<Self, CoverError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| CoverError::Parse("empty cover".into()))?;
        let mut arity = None;
        let mut flavor = None;
        for field in header.split_whitespace() {
            if let Some(rest) = field.strip_prefix("n=") {
                arity = Some(
                    rest.parse::<usize>()
                        .map_err(|_| CoverError::Parse(format!("bad arity '{rest}'")))?,
                );
            } else if let Some(rest) = field.strip_prefix("flavor=") {
                flavor = Some(rest.parse::<CoverFlavor>()?);
            } else {
                return Err(CoverError::Parse(format!("bad header field '{field}'")));
            }
        }
        let arity = arity.ok_or_else(|| CoverError::Parse("missing n= in header".into()))?;
        let flavor = flavor.ok_or_else(|| CoverError::Parse("missing flavor= in header".into()))?;
        if arity != table.arity() {
            return Err(CoverError::Parse(format!(
                "cover arity {arity} does not match table arity {}",
                table.arity()
            )));
        }
        let parse_col = |t: &str| -> Result<Column, CoverError> {
            t.parse::<Column>().map_err(|e: TableError| CoverError::Parse(e.to_string()))
        };
        let mut gates = Vec::new();
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let gate = match tokens.as_slice() {
                [kind, a, out] => {
                    let kind: GateKind =
                        kind.parse().map_err(|e: crate::circuit::CircuitError| {
                            CoverError::Parse(e.to_string())
                        })?;
                    CoverGate::from_columns(kind, parse_col(a)?, None, parse_col(out)?)?
                }
                [kind, a, b, out] => {
                    let kind: GateKind =
                        kind.parse().map_err(|e: crate::circuit::CircuitError| {
                            CoverError::Parse(e.to_string())
                        })?;
                    CoverGate::from_columns(
                        kind,
                        parse_col(a)?,
                        Some(parse_col(b)?),
                        parse_col(out)?,
                    )?
                }
                _ => return Err(CoverError::Parse(format!("bad gate line '{line}'"))),
            };
            gates.push(gate);
        }
        Cover::new(table, flavor, gates)
    }
}

/// Result of exhaustive cover verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverVerdict {
    Valid,
    Uncovered(Witness),
}

impl CoverVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CoverVerdict::Valid)
    }
}

/// The deduplicated, ordered set of columns a cover's verification ranges
/// over: the table's n+1 columns followed by every gate column in first-use
/// order. Witness values anywhere else can never change membership or
/// coverage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantColumns {
    columns: Vec<Column>,
}

impl RelevantColumns {
    pub fn of(cover: &Cover) -> Self {
        let mut columns = Vec::new();
        let mut push = |c: Column| {
            if !columns.contains(&c) {
                columns.push(c);
            }
        };
        for c in cover.table().columns() {
            push(c);
        }
        for gate in cover.gates() {
            for c in gate.columns() {
                push(c);
            }
        }
        RelevantColumns { columns }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

fn ppol_conditions(table: &TruthTable, gates: &[CoverGate]) -> Result<(), CoverError> {
    let result = table.result_column();
    for (i, gate) in gates.iter().enumerate() {
        for (j, other) in gates.iter().enumerate().skip(i + 1) {
            if gate.output() == other.output() {
                return Err(CoverError::DuplicateOutputs(i + 1, j + 1));
            }
        }
        if gate.input_a() == result || gate.input_b() == Some(result) {
            return Err(CoverError::ResultColumnAsInput(i + 1));
        }
        for k in 1..=table.arity() {
            if gate.output() == Column::input(k, table.arity()) {
                return Err(CoverError::InputColumnAsOutput(i + 1, k));
            }
        }
    }
    Ok(())
}

/// Extracts a `ppol` cover from a program computing the table: every gate
/// becomes its matrix. The structural conditions hold for any optimal
/// circuit; other programs should be passed through
/// [`Program::dedup_columns`] first, and violations are reported as errors.
pub fn cover_from_circuit(program: &Program, table: &TruthTable) -> Result<Cover, CoverError> {
    if program.arity() != table.arity() {
        return Err(CoverError::Parse(format!(
            "program arity {} does not match table arity {}",
            program.arity(),
            table.arity()
        )));
    }
    if let Some(row) = program.first_mismatch(table) {
        return Err(CoverError::DoesNotCompute { row });
    }
    let cols = program.columns();
    let gates: Vec<CoverGate> = program
        .gates()
        .iter()
        .enumerate()
        .map(|(j, gate)| {
            let (a, b) = gate.inputs();
            CoverGate::from_columns(
                gate.kind(),
                cols[a - 1],
                b.map(|b| cols[b - 1]),
                cols[program.arity() + j],
            )
            .expect("program gates are consistent by construction")
        })
        .collect();
    ppol_conditions(table, &gates)?;
    Cover::new(table.clone(), CoverFlavor::Ppol, gates)
}

/// Rebuilds a program from a `ppol` cover by wiring gates through their
/// shared columns: the result column must be produced (or be an input, for
/// projections), every gate input must be an input column or another gate's
/// output, and the dependency graph must be acyclic. The program's gate
/// multiset equals the cover's and its output column is the result column.
pub fn circuit_from_cover(cover: &Cover) -> Result<Program, CoverError> {
    let table = cover.table();
    let n = table.arity();
    ppol_conditions(table, cover.gates())?;

    let result = table.result_column();
    let input_index = |c: Column| -> Option<usize> {
        (1..=n).find(|&i| Column::input(i, n) == c)
    };

    // producer of each column; unique by condition (1)
    let producer: BTreeMap<Column, usize> =
        cover.gates().iter().enumerate().map(|(j, g)| (g.output(), j)).collect();

    let output_index_source: Option<usize> = input_index(result);
    if output_index_source.is_none() && !producer.contains_key(&result) {
        return Err(CoverError::MissingResultColumn);
    }

    for (j, gate) in cover.gates().iter().enumerate() {
        for col in std::iter::once(gate.input_a()).chain(gate.input_b()) {
            if input_index(col).is_none() && !producer.contains_key(&col) {
                return Err(CoverError::DanglingInput(j + 1, col));
            }
        }
    }

    // deterministic Kahn order: repeatedly take the first ready gate
    let gate_count = cover.len();
    let mut placed: Vec<Option<usize>> = vec![None; gate_count]; // gate -> program index
    let mut order: Vec<usize> = Vec::with_capacity(gate_count);
    while order.len() < gate_count {
        let mut progress = false;
        for (j, gate) in cover.gates().iter().enumerate() {
            if placed[j].is_some() {
                continue;
            }
            let ready = gate.columns().take(gate.kind().arity()).all(|col| {
                input_index(col).is_some() || placed[producer[&col]].is_some()
            });
            if ready {
                placed[j] = Some(n + order.len() + 1);
                order.push(j);
                progress = true;
            }
        }
        if !progress {
            let stuck = placed.iter().position(|p| p.is_none()).unwrap();
            return Err(CoverError::CycleDetected(stuck + 1));
        }
    }

    let index_of = |c: Column| -> usize {
        input_index(c).unwrap_or_else(|| placed[producer[&c]].unwrap())
    };
    let gates: Vec<Gate> = order
        .iter()
        .map(|&j| {
            let gate = &cover.gates()[j];
            let a = index_of(gate.input_a());
            match gate.kind() {
                GateKind::And => Gate::And(a, index_of(gate.input_b().unwrap())),
                GateKind::Or => Gate::Or(a, index_of(gate.input_b().unwrap())),
                GateKind::Not => Gate::Not(a),
            }
        })
        .collect();
    let output = match output_index_source {
        Some(i) => i,
        None => placed[producer[&result]].unwrap(),
    };
    Program::new(n, gates, vec![output]).map_err(|e| CoverError::Parse(e.to_string()))
}

/// Smallest subset of the pool that verifies as a cover, by iterative
/// deepening with hitting-set branching: each node finds one uncovered
/// anti-polymorphism and branches on the pool gates able to cover some
/// extension of it. Exactness is relative to the pool.
pub fn minimal_cover_search(
    table: &TruthTable,
    pool: &[CoverGate],
    size_bound: usize,
    flavor: CoverFlavor,
) -> Option<Cover> {
    // gates that can never sit in a ppol cover are dropped up front
    let usable: Vec<CoverGate> = pool
        .iter()
        .copied()
        .filter(|g| {
            flavor == CoverFlavor::Pol
                || ppol_conditions(table, std::slice::from_ref(g)).is_ok()
        })
        .collect();
    for target in 0..=size_bound {
        if let Some(gates) = extend_cover(table, &usable, flavor, Vec::new(), 0, target) {
            return Some(Cover::new(table.clone(), flavor, gates).unwrap());
        }
    }
    None
}

fn extend_cover(
    table: &TruthTable,
    pool: &[CoverGate],
    flavor: CoverFlavor,
    chosen: Vec<CoverGate>,
    first_candidate: usize,
    remaining: usize,
) -> Option<Vec<CoverGate>> {
    let cover = Cover::new(table.clone(), flavor, chosen.clone()).unwrap();
    let witness = match cover.verify().expect("conditions pre-filtered") {
        CoverVerdict::Valid => return Some(chosen),
        CoverVerdict::Uncovered(w) => w,
    };
    if remaining == 0 {
        return None;
    }
    for idx in first_candidate..pool.len() {
        let gate = pool[idx];
        if chosen.contains(&gate) {
            continue;
        }
        if flavor == CoverFlavor::Ppol
            && chosen.iter().any(|g| g.output() == gate.output())
        {
            continue; // would break condition (1)
        }
        if !can_cover_extension(&gate, &witness, flavor) {
            continue;
        }
        let mut next = chosen.clone();
        next.push(gate);
        if let Some(done) = extend_cover(table, pool, flavor, next, idx + 1, remaining - 1) {
            return Some(done);
        }
    }
    None
}

/// Whether some extension of the witness to the gate's columns is covered by
/// the gate; columns the witness already values are fixed.
fn can_cover_extension(gate: &CoverGate, witness: &Witness, flavor: CoverFlavor) -> bool {
    let mut free: Vec<Column> = Vec::new();
    for col in gate.columns() {
        if witness.get(&col).is_none() && !free.contains(&col) {
            free.push(col);
        }
    }
    let choices: &[WitnessValue] = match flavor {
        CoverFlavor::Pol => &[WitnessValue::Zero, WitnessValue::One],
        CoverFlavor::Ppol => &[WitnessValue::Zero, WitnessValue::One, WitnessValue::Undef],
    };
    let mut pick = vec![0usize; free.len()];
    loop {
        let mut extended: Vec<(Column, WitnessValue)> =
            witness.columns().map(|(c, v)| (*c, *v)).collect();
        extended.extend(free.iter().zip(&pick).map(|(c, &i)| (*c, choices[i])));
        let w = Witness::partial(extended);
        if gate.covers(&w, flavor).expect("all gate columns assigned") {
            return true;
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return false;
            }
            pick[i] += 1;
            if pick[i] < choices.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::optimal_circuit;
    use crate::table::NamedOperation;

    fn and2() -> TruthTable {
        TruthTable::from_fn(2, |x| x[0] & x[1])
    }

    fn xor2() -> TruthTable {
        TruthTable::from_fn(2, |x| x[0] ^ x[1])
    }

    fn col(s: &str) -> Column {
        s.parse().unwrap()
    }

    fn and_gate() -> CoverGate {
        CoverGate::and(col("0011"), col("0101"))
    }

    #[test]
    fn gate_construction_checks_consistency() {
        assert!(CoverGate::from_columns(
            GateKind::And,
            col("0011"),
            Some(col("0101")),
            col("0001")
        )
        .is_ok());
        assert_eq!(
            CoverGate::from_columns(GateKind::And, col("0011"), Some(col("0101")), col("0011")),
            Err(CoverError::InconsistentGate)
        );
    }

    #[test]
    fn gate_covering() {
        let g = and_gate();
        let w = Witness::total([(col("0011"), true), (col("0101"), true), (col("0001"), false)]);
        assert!(g.covers(&w, CoverFlavor::Pol).unwrap());
        let w = Witness::total([(col("0011"), true), (col("0101"), true), (col("0001"), true)]);
        assert!(!g.covers(&w, CoverFlavor::Pol).unwrap());
        let w = Witness::partial([
            (col("0011"), WitnessValue::One),
            (col("0101"), WitnessValue::One),
            (col("0001"), WitnessValue::Undef),
        ]);
        assert!(g.covers(&w, CoverFlavor::Ppol).unwrap());
        // undefined input never covers
        let w = Witness::partial([
            (col("0011"), WitnessValue::Undef),
            (col("0101"), WitnessValue::One),
            (col("0001"), WitnessValue::Zero),
        ]);
        assert!(!g.covers(&w, CoverFlavor::Ppol).unwrap());
    }

    #[test]
    fn single_gate_cover_for_and() {
        let cover = Cover::new(and2(), CoverFlavor::Ppol, vec![and_gate()]).unwrap();
        assert_eq!(RelevantColumns::of(&cover).len(), 3);
        assert!(cover.verify().unwrap().is_valid());
        let cover = cover.with_flavor(CoverFlavor::Pol);
        assert!(cover.verify().unwrap().is_valid());
    }

    #[test]
    fn empty_cover_is_invalid_for_and() {
        let cover = Cover::new(and2(), CoverFlavor::Pol, vec![]).unwrap();
        match cover.verify().unwrap() {
            CoverVerdict::Uncovered(w) => {
                assert!(and2().is_total_anti_polymorphism(&w).unwrap());
            }
            CoverVerdict::Valid => panic!("empty cover cannot be valid"),
        }
    }

    #[test]
    fn empty_cover_is_valid_for_projections() {
        let proj = TruthTable::from_fn(2, |x| x[0]);
        for flavor in [CoverFlavor::Pol, CoverFlavor::Ppol] {
            let cover = Cover::new(proj.clone(), flavor, vec![]).unwrap();
            assert!(cover.verify().unwrap().is_valid());
        }
    }

    #[test]
    fn xor_optimal_circuit_cover() {
        let xor = xor2();
        let p = optimal_circuit(&xor, 6).unwrap();
        let cover = cover_from_circuit(&p, &xor).unwrap();
        assert_eq!(cover.len(), p.size());
        assert!(cover.verify().unwrap().is_valid());
    }

    #[test]
    fn condition_violations_are_reported() {
        let xor = xor2();
        // two gates with the same output column
        let g = and_gate();
        let cover = Cover::new(and2(), CoverFlavor::Ppol, vec![g, g]).unwrap();
        assert_eq!(cover.verify(), Err(CoverError::DuplicateOutputs(1, 2)));

        // a gate consuming the result column
        let g = CoverGate::not(col("0110"));
        let cover = Cover::new(xor.clone(), CoverFlavor::Ppol, vec![g]).unwrap();
        assert_eq!(cover.verify(), Err(CoverError::ResultColumnAsInput(1)));

        // a gate producing an input column
        let g = CoverGate::not(col("1100"));
        let cover = Cover::new(xor, CoverFlavor::Ppol, vec![g]).unwrap();
        assert_eq!(cover.verify(), Err(CoverError::InputColumnAsOutput(1, 1)));
    }

    #[test]
    fn circuit_from_cover_round_trip() {
        for bits in 0..16u64 {
            let f = TruthTable::new(2, bits);
            let p = optimal_circuit(&f, 6).unwrap();
            let cover = cover_from_circuit(&p, &f).unwrap();
            let q = circuit_from_cover(&cover).unwrap();
            assert_eq!(q.size(), cover.len());
            assert!(q.computes(&f), "f={bits:04b}");
        }
    }

    #[test]
    fn conversion_errors() {
        let xor = xor2();
        // a valid-for-AND gate set lacking xor's result column
        let cover = Cover::new(xor.clone(), CoverFlavor::Ppol, vec![and_gate()]).unwrap();
        assert_eq!(circuit_from_cover(&cover), Err(CoverError::MissingResultColumn));

        // dangling input: the result-producing gate reads a column nothing
        // provides
        let g = CoverGate::not(col("1001"));
        let cover = Cover::new(xor.clone(), CoverFlavor::Ppol, vec![g]).unwrap();
        assert!(matches!(circuit_from_cover(&cover), Err(CoverError::DanglingInput(..))));

        // two gates feeding each other, alongside a sound chain producing
        // the result column
        let chain = [
            CoverGate::or(col("0011"), col("0101")),
            CoverGate::and(col("0011"), col("0101")),
            CoverGate::not(col("0001")),
            CoverGate::and(col("0111"), col("1110")),
        ];
        let a = CoverGate::not(col("0010"));
        let b = CoverGate::not(col("1101"));
        let mut gates = chain.to_vec();
        gates.extend([a, b]);
        let cover = Cover::new(xor, CoverFlavor::Ppol, gates).unwrap();
        assert!(matches!(circuit_from_cover(&cover), Err(CoverError::CycleDetected(_))));
    }

    #[test]
    fn minimal_search_over_b2_pool() {
        let mut pool: Vec<CoverGate> = Vec::new();
        for bits in 0..16u64 {
            let f = TruthTable::new(2, bits);
            let p = optimal_circuit(&f, 6).unwrap();
            if let Ok(cover) = cover_from_circuit(&p, &f) {
                for g in cover.gates() {
                    if !pool.contains(g) {
                        pool.push(*g);
                    }
                }
            }
        }
        let best = minimal_cover_search(&and2(), &pool, 4, CoverFlavor::Ppol).unwrap();
        assert_eq!(best.len(), 1);
        assert!(best.verify().unwrap().is_valid());

        let best = minimal_cover_search(&xor2(), &pool, 4, CoverFlavor::Ppol).unwrap();
        assert_eq!(best.len(), 4);
        assert!(best.verify().unwrap().is_valid());

        assert!(minimal_cover_search(&and2(), &pool, 0, CoverFlavor::Ppol).is_none());
    }

    #[test]
    fn pol_valid_whenever_ppol_valid() {
        for bits in 0..16u64 {
            let f = TruthTable::new(2, bits);
            let p = optimal_circuit(&f, 6).unwrap();
            let cover = cover_from_circuit(&p, &f).unwrap();
            assert!(cover.verify().unwrap().is_valid());
            assert!(cover.with_flavor(CoverFlavor::Pol).verify().unwrap().is_valid());
        }
    }

    #[test]
    fn text_round_trip() {
        let xor = xor2();
        let p = optimal_circuit(&xor, 6).unwrap();
        let cover = cover_from_circuit(&p, &xor).unwrap();
        let text = cover.to_string();
        let parsed = Cover::parse_with_table(&text, xor).unwrap();
        assert_eq!(parsed, cover);
    }

    #[test]
    fn relevant_column_verdict_matches_dense_enumeration() {
        // independent dense check over all 65536 total witnesses at n = 2
        for bits in [0b0001u64, 0b0110, 0b1001, 0b1110] {
            let f = TruthTable::new(2, bits);
            let p = optimal_circuit(&f, 6).unwrap();
            let cover = cover_from_circuit(&p, &f).unwrap().with_flavor(CoverFlavor::Pol);
            let sparse_valid = cover.verify().unwrap().is_valid();

            let mut dense_valid = true;
            'outer: for t in 0..(1u64 << 16) {
                let w = crate::table::DenseOperation::new(4, t);
                if !f.is_dense_anti_polymorphism(&w) {
                    continue;
                }
                for gate in cover.gates() {
                    let va = w.apply_column(&gate.input_a());
                    let vb = gate.input_b().map(|b| w.apply_column(&b));
                    let vout = w.apply_column(&gate.output());
                    if gate.kind().apply(va, vb) != vout {
                        continue 'outer; // covered
                    }
                }
                dense_valid = false;
                break;
            }
            assert_eq!(sparse_valid, dense_valid);
            assert!(sparse_valid);
        }
    }
}
