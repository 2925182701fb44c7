//! Exhaustive minimal-circuit search over the {AND, OR, NOT} basis.
//!
//! Iterative deepening on gate count. A search state is the set of realized
//! columns; candidate gates producing an already-realized column are pruned
//! (any use can be rewired to the earlier copy), and visited column sets are
//! memoized per deepening level so permutations of the same gate set are
//! explored once. Exactness: the returned size is the circuit complexity of
//! the function within the basis.

use std::collections::HashSet;

use crate::circuit::{Gate, Program};
use crate::table::{Column, TruthTable};

/// Cap on memo entries; beyond it the search still works, just without
/// recording new sets.
const MEMO_CAP: usize = 1 << 21;

#[derive(Clone, PartialEq, Eq, Hash)]
enum SetKey {
    Packed(u8, u128),
    Wide(Vec<u64>),
}

struct Searcher {
    arity: usize,
    rows: usize,
    mask: u64,
    target: u64,
    cols: Vec<u64>,
    realized: Vec<u64>,
    gates: Vec<Gate>,
    memo: HashSet<SetKey>,
}

impl Searcher {
    fn new(table: &TruthTable) -> Self {
        let arity = table.arity();
        let rows = table.rows();
        let mask = if rows == 64 { !0 } else { (1u64 << rows) - 1 };
        let cols: Vec<u64> =
            (1..=arity).map(|i| Column::input(i, arity).bits()).collect();
        let mut s = Searcher {
            arity,
            rows,
            mask,
            target: table.value_bits(),
            cols,
            realized: vec![0u64; (1usize << rows).div_ceil(64)],
            gates: Vec::new(),
            memo: HashSet::new(),
        };
        for i in 0..arity {
            let c = s.cols[i];
            s.realized[(c >> 6) as usize] |= 1 << (c & 63);
        }
        s
    }

    fn is_realized(&self, c: u64) -> bool {
        self.realized[(c >> 6) as usize] >> (c & 63) & 1 == 1
    }

    fn set_key_with(&self, extra: u64) -> SetKey {
        let mut v: Vec<u64> = self.cols.clone();
        v.push(extra);
        v.sort_unstable();
        if self.rows <= 8 && v.len() <= 16 {
            let mut packed = 0u128;
            for &c in &v {
                packed = (packed << 8) | c as u128;
            }
            SetKey::Packed(v.len() as u8, packed)
        } else {
            SetKey::Wide(v)
        }
    }

    fn push(&mut self, gate: Gate, c: u64) {
        self.cols.push(c);
        self.gates.push(gate);
        self.realized[(c >> 6) as usize] |= 1 << (c & 63);
    }

    fn pop(&mut self) {
        let c = self.cols.pop().unwrap();
        self.gates.pop();
        self.realized[(c >> 6) as usize] &= !(1 << (c & 63));
    }

    /// One gate to finish: scan for any gate whose column is the target.
    fn finish(&mut self) -> bool {
        let t = self.cols.len();
        let not_target = !self.target & self.mask;
        for i in 0..t {
            if self.cols[i] == not_target {
                self.gates.push(Gate::Not(i + 1));
                return true;
            }
        }
        for i in 0..t {
            for j in (i + 1)..t {
                if self.cols[i] & self.cols[j] == self.target {
                    self.gates.push(Gate::And(i + 1, j + 1));
                    return true;
                }
                if self.cols[i] | self.cols[j] == self.target {
                    self.gates.push(Gate::Or(i + 1, j + 1));
                    return true;
                }
            }
        }
        false
    }

    fn dfs(&mut self, remaining: usize) -> bool {
        if remaining == 1 {
            return self.finish();
        }
        let t = self.cols.len();
        for i in 0..t {
            let c = !self.cols[i] & self.mask;
            if self.explore(Gate::Not(i + 1), c, remaining) {
                return true;
            }
        }
        for i in 0..t {
            for j in (i + 1)..t {
                let (a, b) = (self.cols[i], self.cols[j]);
                if self.explore(Gate::And(i + 1, j + 1), a & b, remaining)
                    || self.explore(Gate::Or(i + 1, j + 1), a | b, remaining)
                {
                    return true;
                }
            }
        }
        false
    }

    fn explore(&mut self, gate: Gate, c: u64, remaining: usize) -> bool {
        if self.is_realized(c) {
            return false;
        }
        if c == self.target {
            // cannot happen below the current deepening bound, but keep the
            // search correct regardless
            self.gates.push(gate);
            return true;
        }
        let key = self.set_key_with(c);
        if self.memo.len() < MEMO_CAP {
            if !self.memo.insert(key) {
                return false;
            }
        } else if self.memo.contains(&key) {
            return false;
        }
        self.push(gate, c);
        if self.dfs(remaining - 1) {
            return true;
        }
        self.pop();
        false
    }
}

/// Smallest program over {AND, OR, NOT} computing the table, or `None` if no
/// program with at most `max_size` gates does. Exhaustive, so the result's
/// gate count is exactly the circuit complexity; intended for `n <= 4`.
pub fn optimal_circuit(table: &TruthTable, max_size: usize) -> Option<Program> {
    assert!(table.arity() <= 4, "optimal search supported for n <= 4");
    let target = table.result_column();
    for i in 1..=table.arity() {
        if Column::input(i, table.arity()) == target {
            return Some(Program::new(table.arity(), vec![], vec![i]).unwrap());
        }
    }
    let mut s = Searcher::new(table);
    for size in 1..=max_size {
        s.memo.clear();
        if s.dfs(size) {
            return Some(Program::from_gates(table.arity(), s.gates.clone()).unwrap());
        }
        debug_assert!(s.gates.is_empty());
    }
    None
}

struct Enumerator {
    inner: Searcher,
    found: Vec<Program>,
    cap: usize,
}

impl Enumerator {
    fn dfs(&mut self, remaining: usize) {
        if self.found.len() >= self.cap {
            return;
        }
        if remaining == 1 {
            self.collect_finishers();
            return;
        }
        let t = self.inner.cols.len();
        for i in 0..t {
            let c = !self.inner.cols[i] & self.inner.mask;
            self.step(Gate::Not(i + 1), c, remaining);
        }
        for i in 0..t {
            for j in (i + 1)..t {
                let (a, b) = (self.inner.cols[i], self.inner.cols[j]);
                self.step(Gate::And(i + 1, j + 1), a & b, remaining);
                self.step(Gate::Or(i + 1, j + 1), a | b, remaining);
            }
        }
    }

    fn step(&mut self, gate: Gate, c: u64, remaining: usize) {
        if self.inner.is_realized(c) || c == self.inner.target {
            return;
        }
        self.inner.push(gate, c);
        self.dfs(remaining - 1);
        self.inner.pop();
    }

    fn collect_finishers(&mut self) {
        let t = self.inner.cols.len();
        let not_target = !self.inner.target & self.inner.mask;
        let mut finishers: Vec<Gate> = Vec::new();
        for i in 0..t {
            if self.inner.cols[i] == not_target {
                finishers.push(Gate::Not(i + 1));
            }
        }
        for i in 0..t {
            for j in (i + 1)..t {
                if self.inner.cols[i] & self.inner.cols[j] == self.inner.target {
                    finishers.push(Gate::And(i + 1, j + 1));
                }
                if self.inner.cols[i] | self.inner.cols[j] == self.inner.target {
                    finishers.push(Gate::Or(i + 1, j + 1));
                }
            }
        }
        let arity = self.inner.arity;
        for gate in finishers {
            if self.found.len() >= self.cap {
                return;
            }
            let mut gates = self.inner.gates.clone();
            gates.push(gate);
            self.found.push(Program::from_gates(arity, gates).unwrap());
        }
    }
}

/// All programs of exactly `size` gates computing the table whose gates all
/// realize pairwise-distinct, non-input columns and whose last gate is the
/// output. With `size` the optimal size this enumerates the optimal
/// programs, up to `cap` of them.
pub fn enumerate_optimal_programs(table: &TruthTable, size: usize, cap: usize) -> Vec<Program> {
    assert!(table.arity() <= 4, "optimal search supported for n <= 4");
    let target = table.result_column();
    for i in 1..=table.arity() {
        if Column::input(i, table.arity()) == target {
            // size-0 projection program; no gate sequence of positive size
            // has a last gate realizing an input column under dedup rules
            if size == 0 {
                return vec![Program::new(table.arity(), vec![], vec![i]).unwrap()];
            }
            return Vec::new();
        }
    }
    if size == 0 {
        return Vec::new();
    }
    let mut e = Enumerator { inner: Searcher::new(table), found: Vec::new(), cap };
    e.dfs(size);
    e.found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TruthTable;

    #[test]
    fn known_optimal_sizes() {
        let and = TruthTable::from_fn(2, |x| x[0] & x[1]);
        assert_eq!(optimal_circuit(&and, 6).unwrap().size(), 1);

        let xor = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        let p = optimal_circuit(&xor, 6).unwrap();
        assert_eq!(p.size(), 4);
        assert!(p.computes(&xor));

        let const0 = TruthTable::new(1, 0);
        assert_eq!(optimal_circuit(&const0, 6).unwrap().size(), 2);

        let proj = TruthTable::from_fn(2, |x| x[0]);
        assert_eq!(optimal_circuit(&proj, 6).unwrap().size(), 0);
    }

    #[test]
    fn budget_exhaustion_returns_none() {
        let xor = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        assert!(optimal_circuit(&xor, 3).is_none());
    }

    #[test]
    fn results_verify_against_table() {
        for bits in 0..16u64 {
            let f = TruthTable::new(2, bits);
            let p = optimal_circuit(&f, 6).unwrap();
            assert!(p.computes(&f), "f={bits:04b}");
        }
    }

    #[test]
    fn enumerated_programs_all_compute() {
        let xor = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        let programs = enumerate_optimal_programs(&xor, 4, 10_000);
        assert!(!programs.is_empty());
        for p in &programs {
            assert_eq!(p.size(), 4);
            assert!(p.computes(&xor));
        }
        assert!(enumerate_optimal_programs(&xor, 3, 10_000).is_empty());
    }
}
