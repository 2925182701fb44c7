//! Truth tables viewed as relations, columns, and (anti-)polymorphism checks.
//!
//! A function `f` on `n` inputs is stored as the bit vector of its outputs
//! over all `2^n` rows in lexicographic input order (`x1` most significant).
//! The relation view of `f` is the `2^n x (n+1)` matrix whose first `n`
//! columns are the inputs and whose last column is the output; a [`Column`]
//! is one length-`2^n` column of such a matrix. Witnesses assign bits (or
//! `undef`) to columns and certify that an operation fails to preserve the
//! relation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Columns and operation tables are packed into `u64`, which caps the
/// supported arity.
pub const MAX_ARITY: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("rows have different widths: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("witness has no value for column {0}")]
    MissingColumn(Column),
    #[error("witness is undefined on column {0}")]
    UndefinedColumn(Column),
    #[error("conflicting values for column {0}")]
    ConflictingColumn(Column),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A length-`2^n` bit vector: one column of a truth table or gate matrix.
///
/// Column identity is exact bit-vector equality. Row 0 is the least
/// significant bit; the text form lists row 0 first, so the input column
/// `x1` at `n = 2` prints as `0011`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Column {
    len: usize,
    bits: u64,
}

impl Column {
    pub fn new(len: usize, bits: u64) -> Self {
        assert!(len >= 1 && len <= 64, "column length out of range");
        let mask = if len == 64 { !0 } else { (1u64 << len) - 1 };
        Column { len, bits: bits & mask }
    }

    /// The `i`-th input column of an `n`-ary table (1-based): its bit at row
    /// `r` is the `i`-th most significant bit of the `n`-bit expansion of `r`.
    pub fn input(i: usize, n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_ARITY, "arity out of range");
        assert!(i >= 1 && i <= n, "input index out of range");
        let rows = 1usize << n;
        let mut bits = 0u64;
        for r in 0..rows {
            if (r >> (n - i)) & 1 == 1 {
                bits |= 1 << r;
            }
        }
        Column { len: rows, bits }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit(&self, row: usize) -> bool {
        assert!(row < self.len, "row out of range");
        (self.bits >> row) & 1 == 1
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn complement(&self) -> Column {
        Column::new(self.len, !self.bits)
    }

    pub fn and(&self, other: &Column) -> Column {
        assert_eq!(self.len, other.len, "column length mismatch");
        Column::new(self.len, self.bits & other.bits)
    }

    pub fn or(&self, other: &Column) -> Column {
        assert_eq!(self.len, other.len, "column length mismatch");
        Column::new(self.len, self.bits | other.bits)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.len {
            write!(f, "{}", (self.bits >> row) & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Column({})", self)
    }
}

impl FromStr for Column {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, TableError> {
        if s.is_empty() || s.len() > 64 {
            return Err(TableError::Parse(format!("bad column length {}", s.len())));
        }
        let mut bits = 0u64;
        for (row, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << row,
                other => {
                    return Err(TableError::Parse(format!("bad column character '{other}'")));
                }
            }
        }
        Ok(Column { len: s.len(), bits })
    }
}

/// A total `k`-ary Boolean operation stored as its value table.
///
/// The table bit for arguments `(b1, ..., bk)` sits at index
/// `b1*2^(k-1) + ... + bk` (first argument most significant), matching the
/// row order of truth tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DenseOperation {
    arity: usize,
    table: u64,
}

impl DenseOperation {
    pub fn new(arity: usize, table: u64) -> Self {
        assert!(arity >= 1 && arity <= MAX_ARITY, "operation arity out of range");
        let entries = 1usize << arity;
        let mask = if entries == 64 { !0 } else { (1u64 << entries) - 1 };
        DenseOperation { arity, table: table & mask }
    }

    pub fn from_fn(arity: usize, op: impl Fn(&[bool]) -> bool) -> Self {
        assert!(arity >= 1 && arity <= MAX_ARITY, "operation arity out of range");
        let entries = 1usize << arity;
        let mut table = 0u64;
        let mut args = vec![false; arity];
        for idx in 0..entries {
            for (j, a) in args.iter_mut().enumerate() {
                *a = (idx >> (arity - 1 - j)) & 1 == 1;
            }
            if op(&args) {
                table |= 1 << idx;
            }
        }
        DenseOperation { arity, table }
    }

    /// Projection on the `i`-th argument (1-based).
    pub fn projection(arity: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= arity, "projection index out of range");
        Self::from_fn(arity, |args| args[i - 1])
    }

    pub fn negated_projection(arity: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= arity, "projection index out of range");
        Self::from_fn(arity, |args| !args[i - 1])
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        Self::from_fn(arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Value at a packed argument index (first argument most significant).
    pub fn value_at(&self, idx: usize) -> bool {
        assert!(idx < (1 << self.arity), "argument index out of range");
        (self.table >> idx) & 1 == 1
    }

    pub fn apply(&self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity, "argument count mismatch");
        let mut idx = 0usize;
        for &a in args {
            idx = (idx << 1) | a as usize;
        }
        self.value_at(idx)
    }

    /// Applies the operation to a column of length `2^n == arity`: row `r`
    /// of the column is the `(r+1)`-th argument.
    pub fn apply_column(&self, col: &Column) -> bool {
        assert_eq!(col.len(), self.arity, "column length does not match arity");
        let mut idx = 0usize;
        for row in 0..col.len() {
            idx = (idx << 1) | col.bit(row) as usize;
        }
        self.value_at(idx)
    }
}

impl fmt::Debug for DenseOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseOperation(arity={}, table=", self.arity)?;
        for idx in 0..(1usize << self.arity) {
            write!(f, "{}", (self.table >> idx) & 1)?;
        }
        write!(f, ")")
    }
}

/// The four operations that any non-trivial closure of a truth table must
/// contain: ternary majority, ternary xor, and the binary lattice operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedOperation {
    Maj,
    Aff,
    And,
    Or,
}

impl NamedOperation {
    pub const ALL: [NamedOperation; 4] = [
        NamedOperation::Maj,
        NamedOperation::Aff,
        NamedOperation::And,
        NamedOperation::Or,
    ];

    pub fn arity(self) -> usize {
        match self {
            NamedOperation::Maj | NamedOperation::Aff => 3,
            NamedOperation::And | NamedOperation::Or => 2,
        }
    }

    pub fn apply(self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity(), "argument count mismatch");
        match self {
            NamedOperation::Maj => {
                (args[0] & args[1]) | (args[0] & args[2]) | (args[1] & args[2])
            }
            NamedOperation::Aff => args[0] ^ args[1] ^ args[2],
            NamedOperation::And => args[0] & args[1],
            NamedOperation::Or => args[0] | args[1],
        }
    }

    pub fn dense(self) -> DenseOperation {
        DenseOperation::from_fn(self.arity(), |args| self.apply(args))
    }
}

impl fmt::Display for NamedOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NamedOperation::Maj => "maj",
            NamedOperation::Aff => "aff",
            NamedOperation::And => "and",
            NamedOperation::Or => "or",
        };
        write!(f, "{s}")
    }
}

impl FromStr for NamedOperation {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, TableError> {
        match s {
            "maj" => Ok(NamedOperation::Maj),
            "aff" => Ok(NamedOperation::Aff),
            "and" => Ok(NamedOperation::And),
            "or" => Ok(NamedOperation::Or),
            other => Err(TableError::Parse(format!("unknown operation '{other}'"))),
        }
    }
}

/// Value a witness assigns to a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessValue {
    Zero,
    One,
    Undef,
}

impl WitnessValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            WitnessValue::One
        } else {
            WitnessValue::Zero
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            WitnessValue::Zero => Some(false),
            WitnessValue::One => Some(true),
            WitnessValue::Undef => None,
        }
    }

    pub fn is_defined(self) -> bool {
        !matches!(self, WitnessValue::Undef)
    }
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Zero => write!(f, "0"),
            WitnessValue::One => write!(f, "1"),
            WitnessValue::Undef => write!(f, "undef"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    Total,
    Partial,
}

/// A sparse (partial) assignment of bits to columns.
///
/// A witness stands for an operation in `B_{2^n}` or `P_{2^n}`: only its
/// values on the columns actually consulted (a table's columns, a gate's
/// columns) matter, so it is stored as a finite map. Identical columns share
/// one entry, which makes every witness a function on columns by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    mode: WitnessMode,
    assignment: BTreeMap<Column, WitnessValue>,
}

impl Witness {
    pub fn total(entries: impl IntoIterator<Item = (Column, bool)>) -> Self {
        let mut w = Witness { mode: WitnessMode::Total, assignment: BTreeMap::new() };
        for (col, v) in entries {
            w.insert(col, WitnessValue::from_bool(v));
        }
        w
    }

    pub fn partial(entries: impl IntoIterator<Item = (Column, WitnessValue)>) -> Self {
        let mut w = Witness { mode: WitnessMode::Partial, assignment: BTreeMap::new() };
        for (col, v) in entries {
            w.insert(col, v);
        }
        w
    }

    /// Restriction of a dense `2^n`-ary operation to the given columns.
    pub fn from_dense(op: &DenseOperation, columns: &[Column]) -> Self {
        Witness::total(columns.iter().map(|c| (*c, op.apply_column(c))))
    }

    fn insert(&mut self, col: Column, v: WitnessValue) {
        assert!(
            self.mode == WitnessMode::Partial || v.is_defined(),
            "total witness cannot hold undef"
        );
        if let Some(old) = self.assignment.insert(col, v) {
            assert_eq!(old, v, "conflicting values for column {col}");
        }
    }

    pub fn mode(&self) -> WitnessMode {
        self.mode
    }

    pub fn get(&self, col: &Column) -> Option<WitnessValue> {
        self.assignment.get(col).copied()
    }

    /// Defined value at a column; errors if the column is absent or undef.
    pub fn required(&self, col: &Column) -> Result<bool, TableError> {
        match self.get(col) {
            None => Err(TableError::MissingColumn(*col)),
            Some(WitnessValue::Undef) => Err(TableError::UndefinedColumn(*col)),
            Some(v) => Ok(v == WitnessValue::One),
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = (&Column, &WitnessValue)> {
        self.assignment.iter()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (col, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{col} -> {v}")?;
        }
        Ok(())
    }
}

/// Syntactic shape of the function itself, used for the trivial cases where
/// covers are empty or circuits are free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialClass {
    Constant(bool),
    Projection(usize),
    NegatedProjection(usize),
    General,
}

impl fmt::Display for TrivialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrivialClass::Constant(b) => write!(f, "constant({})", *b as u8),
            TrivialClass::Projection(i) => write!(f, "projection({i})"),
            TrivialClass::NegatedProjection(i) => write!(f, "negated_projection({i})"),
            TrivialClass::General => write!(f, "general"),
        }
    }
}

/// The truth table of an `n`-ary Boolean function, with its relation view.
///
/// Row `r` holds the input whose `n`-bit expansion is `r` (`x1` most
/// significant), so the row index equals the integer value of the input
/// string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    bits: u64,
}

impl TruthTable {
    pub fn new(arity: usize, bits: u64) -> Self {
        assert!(arity >= 1 && arity <= MAX_ARITY, "arity out of range");
        let rows = 1usize << arity;
        let mask = if rows == 64 { !0 } else { (1u64 << rows) - 1 };
        TruthTable { arity, bits: bits & mask }
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        assert!(arity >= 1 && arity <= MAX_ARITY, "arity out of range");
        let rows = 1usize << arity;
        let mut bits = 0u64;
        let mut x = vec![false; arity];
        for r in 0..rows {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (r >> (arity - 1 - i)) & 1 == 1;
            }
            if f(&x) {
                bits |= 1 << r;
            }
        }
        TruthTable { arity, bits }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> usize {
        1 << self.arity
    }

    pub fn value(&self, row: usize) -> bool {
        assert!(row < self.rows(), "row out of range");
        (self.bits >> row) & 1 == 1
    }

    pub fn value_bits(&self) -> u64 {
        self.bits
    }

    /// The input bits of a row, `x1` first.
    pub fn row_input(&self, row: usize) -> Vec<bool> {
        assert!(row < self.rows(), "row out of range");
        (0..self.arity).map(|i| (row >> (self.arity - 1 - i)) & 1 == 1).collect()
    }

    /// The full row of the relation: inputs followed by the output.
    pub fn row(&self, row: usize) -> Vec<bool> {
        let mut t = self.row_input(row);
        t.push(self.value(row));
        t
    }

    pub fn input_columns(&self) -> Vec<Column> {
        (1..=self.arity).map(|i| Column::input(i, self.arity)).collect()
    }

    pub fn result_column(&self) -> Column {
        Column::new(self.rows(), self.bits)
    }

    /// All `n + 1` columns of the relation, inputs first.
    pub fn columns(&self) -> Vec<Column> {
        let mut cols = self.input_columns();
        cols.push(self.result_column());
        cols
    }

    /// Whether the image tuple `(z1, ..., zn, b)` is a row of the relation.
    fn contains(&self, z: usize, b: bool) -> bool {
        self.value(z) == b
    }

    /// Brute-force closure check over all ordered selections of `k` rows
    /// (with repetition): true iff every componentwise image is again a row.
    pub fn is_polymorphism(&self, op: &DenseOperation) -> bool {
        let k = op.arity();
        let rows = self.rows();
        let mut sel = vec![0usize; k];
        loop {
            if !self.contains(self.image_input(op, &sel), self.image_output(op, &sel)) {
                return false;
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return true;
                }
                j -= 1;
                sel[j] += 1;
                if sel[j] < rows {
                    break;
                }
                sel[j] = 0;
            }
        }
    }

    fn image_input(&self, op: &DenseOperation, sel: &[usize]) -> usize {
        let mut z = 0usize;
        for i in 0..self.arity {
            let shift = self.arity - 1 - i;
            let mut idx = 0usize;
            for &r in sel {
                idx = (idx << 1) | ((r >> shift) & 1);
            }
            z = (z << 1) | op.value_at(idx) as usize;
        }
        z
    }

    fn image_output(&self, op: &DenseOperation, sel: &[usize]) -> bool {
        let mut idx = 0usize;
        for &r in sel {
            idx = (idx << 1) | self.value(r) as usize;
        }
        op.value_at(idx)
    }

    /// All unordered selections of `op.arity()` distinct rows for which some
    /// arrangement has a componentwise image outside the relation. For
    /// symmetric operations the arrangement does not matter; the recorded
    /// image comes from the first failing arrangement in ascending order.
    pub fn polymorphism_witnesses(&self, op: &DenseOperation) -> Vec<PolymorphismWitness> {
        let k = op.arity();
        let rows = self.rows();
        let mut found = Vec::new();
        if k > rows {
            return found;
        }
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if let Some(image) = self.failing_image(op, &combo) {
                found.push(PolymorphismWitness { rows: combo.clone(), image });
            }
            // next combination in lexicographic order
            let mut j = k;
            loop {
                if j == 0 {
                    return found;
                }
                j -= 1;
                if combo[j] < rows - (k - j) {
                    combo[j] += 1;
                    for l in (j + 1)..k {
                        combo[l] = combo[l - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn failing_image(&self, op: &DenseOperation, combo: &[usize]) -> Option<Vec<bool>> {
        for perm in permutations(combo.len()) {
            let sel: Vec<usize> = perm.iter().map(|&p| combo[p]).collect();
            let z = self.image_input(op, &sel);
            let b = self.image_output(op, &sel);
            if !self.contains(z, b) {
                let mut image: Vec<bool> =
                    (0..self.arity).map(|i| (z >> (self.arity - 1 - i)) & 1 == 1).collect();
                image.push(b);
                return Some(image);
            }
        }
        None
    }

    /// Whether a total witness maps the relation's columns to a tuple that is
    /// not a row: `w(r) != f(w(x1), ..., w(xn))`.
    pub fn is_total_anti_polymorphism(&self, w: &Witness) -> Result<bool, TableError> {
        let mut z = 0usize;
        for i in 1..=self.arity {
            let v = w.required(&Column::input(i, self.arity))?;
            z = (z << 1) | v as usize;
        }
        let b = w.required(&self.result_column())?;
        Ok(!self.contains(z, b))
    }

    /// Dense-mode membership: `w` is a full `2^n`-ary operation applied to
    /// the columns directly.
    pub fn is_dense_anti_polymorphism(&self, w: &DenseOperation) -> bool {
        assert_eq!(w.arity(), self.rows(), "dense witness arity must be 2^n");
        let mut z = 0usize;
        for i in 1..=self.arity {
            z = (z << 1) | w.apply_column(&Column::input(i, self.arity)) as usize;
        }
        let b = w.apply_column(&self.result_column());
        !self.contains(z, b)
    }

    /// Whether a partial witness is defined on all `n+1` columns and maps
    /// them outside the relation. Undefined or absent columns make this
    /// false, never an error.
    pub fn is_partial_anti_polymorphism(&self, w: &Witness) -> bool {
        let mut z = 0usize;
        for i in 1..=self.arity {
            match w.get(&Column::input(i, self.arity)).and_then(WitnessValue::as_bool) {
                Some(v) => z = (z << 1) | v as usize,
                None => return false,
            }
        }
        match w.get(&self.result_column()).and_then(WitnessValue::as_bool) {
            Some(b) => !self.contains(z, b),
            None => false,
        }
    }

    /// Fast closure check for one of the four named operations, exploiting
    /// that componentwise application on inputs is the operation on row
    /// indices.
    pub fn is_closed_under(&self, op: NamedOperation) -> bool {
        let rows = self.rows();
        match op {
            NamedOperation::And => self.closed_under_2(rows, |a, b| a & b, |a, b| a & b),
            NamedOperation::Or => self.closed_under_2(rows, |a, b| a | b, |a, b| a | b),
            NamedOperation::Aff => {
                self.closed_under_3(rows, |a, b, c| a ^ b ^ c, |a, b, c| a ^ b ^ c)
            }
            NamedOperation::Maj => self.closed_under_3(
                rows,
                |a, b, c| (a & b) | (a & c) | (b & c),
                |a, b, c| (a & b) | (a & c) | (b & c),
            ),
        }
    }

    fn closed_under_2(
        &self,
        rows: usize,
        on_rows: impl Fn(usize, usize) -> usize,
        on_bits: impl Fn(bool, bool) -> bool,
    ) -> bool {
        for a in 0..rows {
            for b in 0..rows {
                if self.value(on_rows(a, b)) != on_bits(self.value(a), self.value(b)) {
                    return false;
                }
            }
        }
        true
    }

    fn closed_under_3(
        &self,
        rows: usize,
        on_rows: impl Fn(usize, usize, usize) -> usize,
        on_bits: impl Fn(bool, bool, bool) -> bool,
    ) -> bool {
        for a in 0..rows {
            for b in 0..rows {
                for c in 0..rows {
                    if self.value(on_rows(a, b, c))
                        != on_bits(self.value(a), self.value(b), self.value(c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The named operations under which the relation is closed. An empty
    /// result certifies that the closure contains nothing beyond constants,
    /// projections, and negated projections.
    pub fn detect_nontrivial_polymorphisms(&self) -> Vec<NamedOperation> {
        NamedOperation::ALL.iter().copied().filter(|&op| self.is_closed_under(op)).collect()
    }

    pub fn classify_trivial(&self) -> TrivialClass {
        let rows = self.rows();
        let mask = if rows == 64 { !0u64 } else { (1u64 << rows) - 1 };
        if self.bits == 0 {
            return TrivialClass::Constant(false);
        }
        if self.bits == mask {
            return TrivialClass::Constant(true);
        }
        for i in 1..=self.arity {
            let col = Column::input(i, self.arity);
            if col.bits() == self.bits {
                return TrivialClass::Projection(i);
            }
            if col.complement().bits() == self.bits {
                return TrivialClass::NegatedProjection(i);
            }
        }
        TrivialClass::General
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.arity, self.result_column())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.arity)?;
        write!(f, "{}", self.result_column())
    }
}

impl FromStr for TruthTable {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, TableError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| TableError::Parse("empty table".into()))?;
        let arity = parse_arity_header(header)?;
        let bits = lines.next().ok_or_else(|| TableError::Parse("missing value row".into()))?;
        if let Some(extra) = lines.next() {
            return Err(TableError::Parse(format!("unexpected extra line '{extra}'")));
        }
        let col: Column = bits.parse()?;
        if col.len() != 1 << arity {
            return Err(TableError::Parse(format!(
                "expected {} values, got {}",
                1usize << arity,
                col.len()
            )));
        }
        Ok(TruthTable::new(arity, col.bits()))
    }
}

pub(crate) fn parse_arity_header(line: &str) -> Result<usize, TableError> {
    let rest = line
        .strip_prefix("n=")
        .ok_or_else(|| TableError::Parse(format!("expected 'n=<k>', got '{line}'")))?;
    let arity: usize =
        rest.parse().map_err(|_| TableError::Parse(format!("bad arity '{rest}'")))?;
    if arity < 1 || arity > MAX_ARITY {
        return Err(TableError::Parse(format!("arity {arity} out of range")));
    }
    Ok(arity)
}

/// A failed closure check: distinct rows whose componentwise image leaves the
/// relation, together with that image tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymorphismWitness {
    pub rows: Vec<usize>,
    pub image: Vec<bool>,
}

/// Componentwise application of a `k`-ary operation to `k` equal-width
/// tuples: position `i` of the output is the operation applied to position
/// `i` of every input.
pub fn apply_componentwise(
    op: &DenseOperation,
    rows: &[Vec<bool>],
) -> Result<Vec<bool>, TableError> {
    assert_eq!(rows.len(), op.arity(), "selection size must match operation arity");
    let width = rows[0].len();
    for t in rows {
        if t.len() != width {
            return Err(TableError::WidthMismatch { expected: width, got: t.len() });
        }
    }
    let mut out = Vec::with_capacity(width);
    let mut args = vec![false; rows.len()];
    for i in 0..width {
        for (j, t) in rows.iter().enumerate() {
            args[j] = t[i];
        }
        out.push(op.apply(&args));
    }
    Ok(out)
}

/// The 4-ary operation taking the majority of the three arguments other than
/// `omitted` (1-based).
pub fn maj_of_three(omitted: usize) -> DenseOperation {
    assert!((1..=4).contains(&omitted), "omitted argument out of range");
    DenseOperation::from_fn(4, |args| {
        let kept: Vec<bool> =
            (0..4).filter(|&j| j + 1 != omitted).map(|j| args[j]).collect();
        NamedOperation::Maj.apply(&kept)
    })
}

/// The four majority-of-three-arguments operations, ordered by the omitted
/// argument from last to first: index 0 is maj over arguments 1..3, index 3
/// is maj over arguments 2..4.
pub fn maj_of_three_family() -> [DenseOperation; 4] {
    [maj_of_three(4), maj_of_three(3), maj_of_three(2), maj_of_three(1)]
}

/// Number of dense `2^n`-ary operations that map the table's columns outside
/// the relation. Exhaustive over all `2^(2^(2^n))` operations, so `n <= 2`.
pub fn count_dense_anti_polymorphisms(table: &TruthTable) -> u64 {
    assert!(table.arity() <= 2, "dense enumeration supported for n <= 2 only");
    let k = table.rows();
    let entries = 1u64 << (1 << k);
    let mut count = 0;
    for t in 0..entries {
        if table.is_dense_anti_polymorphism(&DenseOperation::new(k, t)) {
            count += 1;
        }
    }
    count
}

/// All permutations of `0..k` in lexicographic order (identity first).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        result.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return result;
        };
        let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}
