//! Total single-valued non-deterministic (TSVND) circuits.
//!
//! A TSVND circuit takes deterministic inputs `x` and guessed inputs, and
//! outputs 0, 1, or `quit`; no `x` may have accepting runs for both values,
//! and every `x` must have some accepting run. Two body forms are supported:
//! a straight-line program whose designated `(valid, value)` wires encode
//! the tri-state output, and a constraint form that hard-codes gates as
//! named equations over variables `x1..x(n+1), y1..` and outputs `x(n+1)`
//! whenever the guessed assignment satisfies every equation.
//!
//! The conversions to and from `pol` covers work row by row: fixing, for
//! each `x`, the lexicographically smallest accepting guess selects `2^n`
//! rows of the extended matrix, and restricting every gate to those rows
//! yields gates-as-matrices over length-`2^n` columns.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{parse_program_body, Gate, GateKind, Program};
use crate::cover::{Cover, CoverError, CoverFlavor, CoverGate};
use crate::table::{Column, TrivialClass, TruthTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TsvndError {
    #[error("deterministic arities differ: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("no accepting guess exists for input row {row}")]
    NotTotal { row: usize },
    #[error("input row {row} accepts both 0 and 1")]
    NotSingleValued { row: usize },
    #[error("input row {row} is accepted by the ND circuit and rejected by the coND circuit")]
    NdOverlap { row: usize },
    #[error("input row {row} is neither accepted nor rejected")]
    NdUndecided { row: usize },
    #[error("the result column is not a column of any cover gate")]
    ResultColumnAbsent,
    #[error("cover error: {0}")]
    Cover(#[from] CoverError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Tri-state output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsvndValue {
    Zero,
    One,
    Quit,
}

impl TsvndValue {
    fn from_bit(b: bool) -> Self {
        if b {
            TsvndValue::One
        } else {
            TsvndValue::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            TsvndValue::Zero => Some(false),
            TsvndValue::One => Some(true),
            TsvndValue::Quit => None,
        }
    }
}

impl fmt::Display for TsvndValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TsvndValue::Zero => write!(f, "0"),
            TsvndValue::One => write!(f, "1"),
            TsvndValue::Quit => write!(f, "quit"),
        }
    }
}

/// Constraint-form variable: `x1..xn` are deterministic inputs, `x(n+1)` is
/// the guessed output, `y1..` are the remaining guesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = TsvndError;

    fn from_str(s: &str) -> Result<Self, TsvndError> {
        let (kind, idx) = s.split_at(1);
        let idx: usize = idx
            .parse()
            .map_err(|_| TsvndError::Parse(format!("bad variable '{s}'")))?;
        if idx == 0 {
            return Err(TsvndError::Parse(format!("bad variable '{s}'")));
        }
        match kind {
            "x" => Ok(Var::X(idx)),
            "y" => Ok(Var::Y(idx)),
            _ => Err(TsvndError::Parse(format!("bad variable '{s}'"))),
        }
    }
}

/// One hard-coded gate of the constraint form, e.g. `AND x2 y5 = x1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub kind: GateKind,
    pub a: Var,
    pub b: Option<Var>,
    pub out: Var,
}

impl Constraint {
    fn vars(&self) -> impl Iterator<Item = Var> {
        std::iter::once(self.a).chain(self.b).chain(std::iter::once(self.out))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            Some(b) => write!(f, "{} {} {} = {}", self.kind, self.a, b, self.out),
            None => write!(f, "{} {} = {}", self.kind, self.a, self.out),
        }
    }
}

impl FromStr for Constraint {
    type Err = TsvndError;

    fn from_str(s: &str) -> Result<Self, TsvndError> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let parse_kind = |t: &str| -> Result<GateKind, TsvndError> {
            t.parse().map_err(|_| TsvndError::Parse(format!("unknown gate kind '{t}'")))
        };
        match tokens.as_slice() {
            [kind, a, "=", out] => {
                let kind = parse_kind(kind)?;
                if kind != GateKind::Not {
                    return Err(TsvndError::Parse(format!("{kind} takes two inputs")));
                }
                Ok(Constraint { kind, a: a.parse()?, b: None, out: out.parse()? })
            }
            [kind, a, b, "=", out] => {
                let kind = parse_kind(kind)?;
                if kind == GateKind::Not {
                    return Err(TsvndError::Parse("NOT takes one input".into()));
                }
                Ok(Constraint { kind, a: a.parse()?, b: Some(b.parse()?), out: out.parse()? })
            }
            _ => Err(TsvndError::Parse(format!("bad constraint line '{s}'"))),
        }
    }
}

/// Circuit body: a program with tri-state output wires, or stored
/// constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TsvndBody {
    /// One designated output means the circuit never quits; two mean
    /// `(valid, value)` with `valid = 0` read as `quit`.
    Program(Program),
    Constraints(Vec<Constraint>),
}

/// A TSVND circuit: `det_arity` ordinary inputs, `nd_arity` guessed inputs.
/// In constraint form the guessed inputs are `x(n+1)` followed by the `y`
/// variables, so `nd_arity` counts the guessed output too. Size is the gate
/// count of the body; each stored constraint counts as one unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsvndCircuit {
    det_arity: usize,
    nd_arity: usize,
    body: TsvndBody,
}

impl TsvndCircuit {
    /// Wraps a deterministic single-output program: no guesses, never quits.
    pub fn from_deterministic(program: Program) -> Self {
        assert_eq!(program.outputs().len(), 1, "deterministic wrap takes one output");
        TsvndCircuit { det_arity: program.arity(), nd_arity: 0, body: TsvndBody::Program(program) }
    }

    pub fn from_program(
        det_arity: usize,
        nd_arity: usize,
        program: Program,
    ) -> Result<Self, TsvndError> {
        if program.arity() != det_arity + nd_arity {
            return Err(TsvndError::Parse(format!(
                "program arity {} does not match n+m = {}",
                program.arity(),
                det_arity + nd_arity
            )));
        }
        if !(1..=2).contains(&program.outputs().len()) {
            return Err(TsvndError::Parse("program form takes one or two outputs".into()));
        }
        Ok(TsvndCircuit { det_arity, nd_arity, body: TsvndBody::Program(program) })
    }

    pub fn from_constraints(
        det_arity: usize,
        nd_arity: usize,
        constraints: Vec<Constraint>,
    ) -> Result<Self, TsvndError> {
        if nd_arity == 0 {
            return Err(TsvndError::Parse(
                "constraint form always guesses x(n+1), so m >= 1".into(),
            ));
        }
        for c in &constraints {
            for var in c.vars() {
                let ok = match var {
                    Var::X(i) => i >= 1 && i <= det_arity + 1,
                    Var::Y(j) => j >= 1 && j < nd_arity,
                };
                if !ok {
                    return Err(TsvndError::Parse(format!("variable {var} out of range")));
                }
            }
        }
        TsvndCircuit::validate_shape(det_arity, nd_arity);
        Ok(TsvndCircuit { det_arity, nd_arity, body: TsvndBody::Constraints(constraints) })
    }

    fn validate_shape(det_arity: usize, nd_arity: usize) {
        assert!(det_arity >= 1, "at least one deterministic input");
        assert!(det_arity + nd_arity <= 24, "enumeration bound exceeded");
    }

    pub fn det_arity(&self) -> usize {
        self.det_arity
    }

    pub fn nd_arity(&self) -> usize {
        self.nd_arity
    }

    pub fn body(&self) -> &TsvndBody {
        &self.body
    }

    pub fn size(&self) -> usize {
        match &self.body {
            TsvndBody::Program(p) => p.size(),
            TsvndBody::Constraints(cs) => cs.len(),
        }
    }

    fn constraint_value(&self, var: Var, x: &[bool], y: &[bool]) -> bool {
        match var {
            Var::X(i) if i <= self.det_arity => x[i - 1],
            Var::X(_) => y[0],
            Var::Y(j) => y[j],
        }
    }

    pub fn evaluate(&self, x: &[bool], y: &[bool]) -> TsvndValue {
        assert_eq!(x.len(), self.det_arity, "deterministic width mismatch");
        assert_eq!(y.len(), self.nd_arity, "guess width mismatch");
        match &self.body {
            TsvndBody::Program(p) => {
                let mut input = x.to_vec();
                input.extend_from_slice(y);
                let outs = p.evaluate_outputs(&input);
                match outs.as_slice() {
                    [value] => TsvndValue::from_bit(*value),
                    [valid, value] => {
                        if *valid {
                            TsvndValue::from_bit(*value)
                        } else {
                            TsvndValue::Quit
                        }
                    }
                    _ => unreachable!("validated output count"),
                }
            }
            TsvndBody::Constraints(cs) => {
                for c in cs {
                    let a = self.constraint_value(c.a, x, y);
                    let b = c.b.map(|b| self.constraint_value(b, x, y));
                    if c.kind.apply(a, b) != self.constraint_value(c.out, x, y) {
                        return TsvndValue::Quit;
                    }
                }
                TsvndValue::from_bit(self.constraint_value(Var::X(self.det_arity + 1), x, y))
            }
        }
    }

    fn guesses(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let m = self.nd_arity;
        (0..(1usize << m)).map(move |c| (0..m).map(|j| (c >> (m - 1 - j)) & 1 == 1).collect())
    }

    /// Accepted output bits at one input row.
    fn accepted(&self, x: &[bool]) -> (bool, bool) {
        let mut zero = false;
        let mut one = false;
        for y in self.guesses() {
            match self.evaluate(x, &y) {
                TsvndValue::Zero => zero = true,
                TsvndValue::One => one = true,
                TsvndValue::Quit => {}
            }
        }
        (zero, one)
    }

    /// Full-enumeration report: totality, single-valuedness, and agreement
    /// with the table, with the first offending row for each failure.
    pub fn validate(&self, table: &TruthTable) -> TsvndReport {
        assert_eq!(table.arity(), self.det_arity, "table arity mismatch");
        let mut report = TsvndReport {
            total: true,
            single_valued: true,
            computes_f: true,
            not_total_at: None,
            conflict_at: None,
            mismatch_at: None,
        };
        for row in 0..table.rows() {
            let x = table.row_input(row);
            let (zero, one) = self.accepted(&x);
            if !zero && !one {
                report.total = false;
                report.not_total_at.get_or_insert(row);
                report.computes_f = false;
                continue;
            }
            if zero && one {
                report.single_valued = false;
                report.conflict_at.get_or_insert(row);
                report.computes_f = false;
                continue;
            }
            if one != table.value(row) {
                report.computes_f = false;
                report.mismatch_at.get_or_insert(row);
            }
        }
        report
    }

    /// The function the circuit decides, or why it does not decide one.
    pub fn decided_function(&self) -> Result<TruthTable, TsvndError> {
        let n = self.det_arity;
        let mut bits = 0u64;
        for row in 0..(1usize << n) {
            let x: Vec<bool> = (0..n).map(|i| (row >> (n - 1 - i)) & 1 == 1).collect();
            match self.accepted(&x) {
                (false, false) => return Err(TsvndError::NotTotal { row }),
                (true, true) => return Err(TsvndError::NotSingleValued { row }),
                (false, true) => bits |= 1 << row,
                (true, false) => {}
            }
        }
        Ok(TruthTable::new(n, bits))
    }

    /// Compiles the constraint form down to a program: each constraint costs
    /// its gate plus an equality check (5 gates), the checks are folded into
    /// a validity conjunction, and the value wire is the guessed `x(n+1)`.
    /// The program form has at most `6 |constraints| + 3` gates; program
    /// bodies are returned unchanged.
    pub fn to_program_form(&self) -> TsvndCircuit {
        let cs = match &self.body {
            TsvndBody::Program(_) => return self.clone(),
            TsvndBody::Constraints(cs) => cs,
        };
        let n = self.det_arity;
        let arity = n + self.nd_arity;
        let wire = |v: Var| -> usize {
            match v {
                Var::X(i) if i <= n => i,
                Var::X(_) => n + 1,
                Var::Y(j) => n + 1 + j,
            }
        };
        let mut gates: Vec<Gate> = Vec::new();
        let push = |gates: &mut Vec<Gate>, g: Gate| -> usize {
            gates.push(g);
            arity + gates.len()
        };
        let mut checks: Vec<usize> = Vec::new();
        for c in cs {
            let a = wire(c.a);
            let value = match c.kind {
                GateKind::And => push(&mut gates, Gate::And(a, wire(c.b.unwrap()))),
                GateKind::Or => push(&mut gates, Gate::Or(a, wire(c.b.unwrap()))),
                GateKind::Not => push(&mut gates, Gate::Not(a)),
            };
            // equality with the stored output: XNOR over the basis
            let out = wire(c.out);
            let both = push(&mut gates, Gate::And(value, out));
            let either = push(&mut gates, Gate::Or(value, out));
            let neither = push(&mut gates, Gate::Not(either));
            checks.push(push(&mut gates, Gate::Or(both, neither)));
        }
        let valid = match checks.split_first() {
            None => {
                let nx = push(&mut gates, Gate::Not(1));
                push(&mut gates, Gate::Or(1, nx))
            }
            Some((&first, rest)) => {
                let mut acc = first;
                for &c in rest {
                    acc = push(&mut gates, Gate::And(acc, c));
                }
                acc
            }
        };
        let value = n + 1;
        let program = Program::new(arity, gates, vec![valid, value])
            .expect("constraint compilation is well-formed");
        TsvndCircuit { det_arity: n, nd_arity: self.nd_arity, body: TsvndBody::Program(program) }
    }
}

impl fmt::Display for TsvndCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={}", self.det_arity, self.nd_arity)?;
        match &self.body {
            TsvndBody::Constraints(cs) => {
                for c in cs {
                    write!(f, "\n{c}")?;
                }
                Ok(())
            }
            TsvndBody::Program(p) => {
                let text = p.to_string();
                let mut lines = text.lines();
                lines.next(); // drop the program's own arity header
                for line in lines {
                    write!(f, "\n{line}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for TsvndCircuit {
    type Err = TsvndError;

    fn from_str(s: &str) -> Result<Self, TsvndError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| TsvndError::Parse("empty circuit".into()))?;
        let (det, nd) = parse_nm_header(header)?;
        let body: Vec<&str> = lines.collect();
        let program_form =
            body.first().map(|l| l.starts_with('g') || l.starts_with("output")).unwrap_or(false);
        if program_form {
            let program = parse_program_body(det + nd, body.into_iter())
                .map_err(|e| TsvndError::Parse(e.to_string()))?;
            TsvndCircuit::from_program(det, nd, program)
        } else {
            let constraints: Vec<Constraint> =
                body.into_iter().map(str::parse).collect::<Result<_, _>>()?;
            TsvndCircuit::from_constraints(det, nd, constraints)
        }
    }
}

fn parse_nm_header(line: &str) -> Result<(usize, usize), TsvndError> {
    let mut det = None;
    let mut nd = None;
    for field in line.split_whitespace() {
        if let Some(rest) = field.strip_prefix("n=") {
            det = rest.parse::<usize>().ok();
            if det.is_none() {
                return Err(TsvndError::Parse(format!("bad arity '{rest}'")));
            }
        } else if let Some(rest) = field.strip_prefix("m=") {
            nd = rest.parse::<usize>().ok();
            if nd.is_none() {
                return Err(TsvndError::Parse(format!("bad guess arity '{rest}'")));
            }
        } else {
            return Err(TsvndError::Parse(format!("bad header field '{field}'")));
        }
    }
    match (det, nd) {
        (Some(det), Some(nd)) => Ok((det, nd)),
        _ => Err(TsvndError::Parse("expected 'n=<k> m=<j>' header".into())),
    }
}

/// Validation report; `computes_f` folds in totality and single-valuedness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TsvndReport {
    pub total: bool,
    pub single_valued: bool,
    pub computes_f: bool,
    pub not_total_at: Option<usize>,
    pub conflict_at: Option<usize>,
    pub mismatch_at: Option<usize>,
}

impl TsvndReport {
    pub fn all_ok(&self) -> bool {
        self.total && self.single_valued && self.computes_f
    }
}

/// A non-deterministic (or co-non-deterministic) circuit: a single-output
/// program over `det_arity + nd_arity` inputs. It accepts `x` when some
/// guess makes it output 1 and rejects `x` when some guess makes it output
/// 0; which of the two notions applies is up to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdCircuit {
    det_arity: usize,
    nd_arity: usize,
    program: Program,
}

impl NdCircuit {
    pub fn new(det_arity: usize, nd_arity: usize, program: Program) -> Result<Self, TsvndError> {
        if program.arity() != det_arity + nd_arity {
            return Err(TsvndError::Parse(format!(
                "program arity {} does not match n+m = {}",
                program.arity(),
                det_arity + nd_arity
            )));
        }
        if program.outputs().len() != 1 {
            return Err(TsvndError::Parse("ND circuits have a single output".into()));
        }
        Ok(NdCircuit { det_arity, nd_arity, program })
    }

    pub fn det_arity(&self) -> usize {
        self.det_arity
    }

    pub fn nd_arity(&self) -> usize {
        self.nd_arity
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn size(&self) -> usize {
        self.program.size()
    }

    fn outputs_bit(&self, x: &[bool], want: bool) -> bool {
        let m = self.nd_arity;
        (0..(1usize << m)).any(|c| {
            let mut input = x.to_vec();
            input.extend((0..m).map(|j| (c >> (m - 1 - j)) & 1 == 1));
            self.program.evaluate(&input).0 == want
        })
    }

    pub fn accepts(&self, x: &[bool]) -> bool {
        self.outputs_bit(x, true)
    }

    pub fn rejects(&self, x: &[bool]) -> bool {
        self.outputs_bit(x, false)
    }
}

impl fmt::Display for NdCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={}", self.det_arity, self.nd_arity)?;
        let text = self.program.to_string();
        let mut lines = text.lines();
        lines.next();
        for line in lines {
            write!(f, "\n{line}")?;
        }
        Ok(())
    }
}

impl FromStr for NdCircuit {
    type Err = TsvndError;

    fn from_str(s: &str) -> Result<Self, TsvndError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| TsvndError::Parse("empty circuit".into()))?;
        let (det, nd) = parse_nm_header(header)?;
        let program =
            parse_program_body(det + nd, lines).map_err(|e| TsvndError::Parse(e.to_string()))?;
        NdCircuit::new(det, nd, program)
    }
}

/// Combines an ND circuit accepting exactly `f^-1(1)` and a coND circuit
/// rejecting exactly `f^-1(0)` into a TSVND circuit for `f`: output 1 when
/// the first accepts, 0 when the second rejects, quit otherwise. Adds two
/// gates.
pub fn merge_nd_cond(c1: &NdCircuit, c2: &NdCircuit) -> Result<TsvndCircuit, TsvndError> {
    let n = c1.det_arity;
    if c2.det_arity != n {
        return Err(TsvndError::ArityMismatch(n, c2.det_arity));
    }
    // the two halves must decide a common function
    for row in 0..(1usize << n) {
        let x: Vec<bool> = (0..n).map(|i| (row >> (n - 1 - i)) & 1 == 1).collect();
        let accepted = c1.accepts(&x);
        let rejected = c2.rejects(&x);
        if accepted && rejected {
            return Err(TsvndError::NdOverlap { row });
        }
        if !accepted && !rejected {
            return Err(TsvndError::NdUndecided { row });
        }
    }

    let (m1, m2) = (c1.nd_arity, c2.nd_arity);
    let arity = n + m1 + m2;
    let mut gates: Vec<Gate> = Vec::new();
    // inputs: x at 1..=n, c1 guesses at n+1..=n+m1, c2 guesses after
    let map1 = |k: usize| if k <= n + m1 { k } else { k + m2 };
    for gate in c1.program.gates() {
        gates.push(remap_gate(gate, map1));
    }
    let o1 = map1_output(c1, map1);
    let base2 = arity + gates.len();
    let map2 = move |k: usize| {
        if k <= n {
            k
        } else if k <= n + m2 {
            k + m1
        } else {
            base2 + (k - n - m2)
        }
    };
    for gate in c2.program.gates() {
        gates.push(remap_gate(gate, map2));
    }
    let o2 = map2(c2.program.output());
    gates.push(Gate::Not(o2));
    let not_o2 = arity + gates.len();
    gates.push(Gate::Or(o1, not_o2));
    let valid = arity + gates.len();
    let program = Program::new(arity, gates, vec![valid, o1])
        .expect("merge produces a well-formed program");
    TsvndCircuit::from_program(n, m1 + m2, program)
}

fn remap_gate(gate: &Gate, map: impl Fn(usize) -> usize) -> Gate {
    match *gate {
        Gate::And(a, b) => Gate::And(map(a), map(b)),
        Gate::Or(a, b) => Gate::Or(map(a), map(b)),
        Gate::Not(a) => Gate::Not(map(a)),
    }
}

fn map1_output(c: &NdCircuit, map: impl Fn(usize) -> usize) -> usize {
    map(c.program.output())
}

/// Splits a TSVND circuit into its ND half (quit read as 0) and coND half
/// (quit read as 1) by re-decoding the output wires; each half adds at most
/// two gates. The circuit must actually decide a function.
pub fn split_tsvnd(circuit: &TsvndCircuit) -> Result<(NdCircuit, NdCircuit), TsvndError> {
    let prog_form = circuit.to_program_form();
    prog_form.decided_function()?;
    let TsvndBody::Program(program) = prog_form.body else { unreachable!() };
    let (n, m) = (prog_form.det_arity, prog_form.nd_arity);

    match program.outputs() {
        [_] => {
            // never quits: both halves are the circuit itself
            let nd = NdCircuit::new(n, m, program.clone())?;
            Ok((nd.clone(), nd))
        }
        &[valid, value] => {
            let mut nd_gates = program.gates().to_vec();
            nd_gates.push(Gate::And(valid, value));
            let out = program.arity() + nd_gates.len();
            let nd_program = Program::new(program.arity(), nd_gates, vec![out])
                .expect("split preserves well-formedness");

            let mut cond_gates = program.gates().to_vec();
            cond_gates.push(Gate::Not(valid));
            let not_valid = program.arity() + cond_gates.len();
            cond_gates.push(Gate::Or(value, not_valid));
            let out = program.arity() + cond_gates.len();
            let cond_program = Program::new(program.arity(), cond_gates, vec![out])
                .expect("split preserves well-formedness");

            Ok((NdCircuit::new(n, m, nd_program)?, NdCircuit::new(n, m, cond_program)?))
        }
        _ => unreachable!("validated output count"),
    }
}

/// Builds the constraint-form TSVND circuit of a `pol` cover: the table's
/// columns are named `x1..x(n+1)`, every other distinct column gets a fresh
/// `y` name, and each gate is stored as one named constraint. When the
/// function is a projection of an input, the result column coincides with
/// that input column and one tautological constraint pins the guessed output
/// to it; otherwise the result column must occur among the gate columns.
pub fn tsvnd_from_pol_cover(cover: &Cover) -> Result<TsvndCircuit, TsvndError> {
    let table = cover.table();
    let n = table.arity();
    let result = table.result_column();

    let mut names: BTreeMap<Column, Var> = BTreeMap::new();
    for i in 1..=n {
        names.insert(Column::input(i, n), Var::X(i));
    }
    let projection = match table.classify_trivial() {
        TrivialClass::Projection(i) => Some(i),
        _ => None,
    };
    if projection.is_none() {
        names.insert(result, Var::X(n + 1));
    }
    let mut next_y = 1usize;
    let mut result_seen = false;
    let mut constraints = Vec::with_capacity(cover.len());
    for gate in cover.gates() {
        let mut name_of = |col: Column| -> Var {
            if col == result {
                result_seen = true;
            }
            *names.entry(col).or_insert_with(|| {
                let var = Var::Y(next_y);
                next_y += 1;
                var
            })
        };
        constraints.push(Constraint {
            kind: gate.kind(),
            a: name_of(gate.input_a()),
            b: gate.input_b().map(&mut name_of),
            out: name_of(gate.output()),
        });
    }
    if let Some(i) = projection {
        // pin the guessed output to the projected input
        constraints.push(Constraint {
            kind: GateKind::And,
            a: Var::X(i),
            b: Some(Var::X(i)),
            out: Var::X(n + 1),
        });
    } else if !result_seen {
        return Err(TsvndError::ResultColumnAbsent);
    }
    TsvndCircuit::from_constraints(n, next_y, constraints)
}

/// Extracts a `pol` cover from a TSVND circuit computing the table: fix, for
/// each input row, the lexicographically smallest accepting guess; the
/// selected rows restrict every body gate (program gate or stored
/// constraint) to a gate over length-`2^n` columns. The cover's gate count
/// equals the circuit's size.
pub fn pol_cover_from_tsvnd(circuit: &TsvndCircuit, table: &TruthTable) -> Result<Cover, TsvndError> {
    assert_eq!(table.arity(), circuit.det_arity, "table arity mismatch");
    let rows = table.rows();

    // selected guess per row
    let mut selected: Vec<Vec<bool>> = Vec::with_capacity(rows);
    for row in 0..rows {
        let x = table.row_input(row);
        let y = circuit
            .guesses()
            .find(|y| circuit.evaluate(&x, y) != TsvndValue::Quit)
            .ok_or(TsvndError::NotTotal { row })?;
        selected.push(y);
    }

    let gates = match &circuit.body {
        TsvndBody::Program(program) => {
            let mut traces: Vec<Vec<bool>> = Vec::with_capacity(rows);
            for row in 0..rows {
                let mut input = table.row_input(row);
                input.extend_from_slice(&selected[row]);
                traces.push(program.trace(&input));
            }
            let column_at = |idx: usize| -> Column {
                let mut bits = 0u64;
                for (row, trace) in traces.iter().enumerate() {
                    if trace[idx - 1] {
                        bits |= 1 << row;
                    }
                }
                Column::new(rows, bits)
            };
            program
                .gates()
                .iter()
                .enumerate()
                .map(|(j, gate)| {
                    let (a, b) = gate.inputs();
                    CoverGate::from_columns(
                        gate.kind(),
                        column_at(a),
                        b.map(column_at),
                        column_at(program.arity() + j + 1),
                    )
                    .expect("traces satisfy every gate")
                })
                .collect()
        }
        TsvndBody::Constraints(constraints) => {
            let column_of = |var: Var| -> Column {
                let mut bits = 0u64;
                for row in 0..rows {
                    let x = table.row_input(row);
                    if circuit.constraint_value(var, &x, &selected[row]) {
                        bits |= 1 << row;
                    }
                }
                Column::new(rows, bits)
            };
            constraints
                .iter()
                .map(|c| {
                    CoverGate::from_columns(
                        c.kind,
                        column_of(c.a),
                        c.b.map(column_of),
                        column_of(c.out),
                    )
                    .expect("accepting rows satisfy every constraint")
                })
                .collect()
        }
    };
    Ok(Cover::new(table.clone(), CoverFlavor::Pol, gates)?)
}
