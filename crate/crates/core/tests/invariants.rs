//! Cross-module invariants beyond the per-module unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polycirc_core::{
    circuit_from_cover, cover_from_circuit, minimal_cover_search, optimal_circuit, Cover,
    CoverFlavor, CoverGate, CoverVerdict, DenseOperation, Program, TruthTable, Witness,
    WitnessValue,
};

/// Everything a circuit realizes is a cover: random deduplicated programs
/// always extract to valid `ppol` covers.
#[test]
fn thousand_random_circuits_per_function_extract_to_valid_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1000);
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        for _ in 0..1000 {
            let p = Program::random_computing(&f, 8, &mut rng).dedup_columns();
            let cover = cover_from_circuit(&p, &f).expect("dedup satisfies the conditions");
            assert!(cover.verify().unwrap().is_valid(), "f={bits:04b}");
        }
    }
}

/// Minimal covers found by pool search convert to circuits of equal size.
#[test]
fn pool_search_covers_convert_to_equal_size_circuits() {
    let mut pool: Vec<CoverGate> = Vec::new();
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        let p = optimal_circuit(&f, 6).unwrap();
        for g in cover_from_circuit(&p, &f).unwrap().gates() {
            if !pool.contains(g) {
                pool.push(*g);
            }
        }
    }
    for bits in [0b1000u64, 0b0110, 0b0111, 0b0001] {
        let f = TruthTable::new(2, bits);
        let best = minimal_cover_search(&f, &pool, 5, CoverFlavor::Ppol).unwrap();
        assert_eq!(best.len(), optimal_circuit(&f, 6).unwrap().size(), "f={bits:04b}");
        let rebuilt = circuit_from_cover(&best).unwrap();
        assert_eq!(rebuilt.size(), best.len());
        assert!(rebuilt.computes(&f));
    }
}

/// A dense partial witness assigns 0, 1, or undef to every possible column.
struct DensePartial {
    values: [WitnessValue; 16],
}

impl DensePartial {
    fn from_index(mut idx: u64) -> Self {
        let mut values = [WitnessValue::Zero; 16];
        for v in values.iter_mut() {
            *v = match idx % 3 {
                0 => WitnessValue::Zero,
                1 => WitnessValue::One,
                _ => WitnessValue::Undef,
            };
            idx /= 3;
        }
        DensePartial { values }
    }

    fn value(&self, col: &polycirc_core::Column) -> WitnessValue {
        self.values[col.bits() as usize]
    }

    fn is_anti(&self, f: &TruthTable) -> bool {
        let mut z = 0usize;
        for col in f.input_columns() {
            match self.value(&col).as_bool() {
                Some(v) => z = (z << 1) | v as usize,
                None => return false,
            }
        }
        match self.value(&f.result_column()).as_bool() {
            Some(b) => f.value(z) != b,
            None => false,
        }
    }

    fn covered_by(&self, gate: &CoverGate) -> bool {
        let Some(va) = self.value(&gate.input_a()).as_bool() else { return false };
        let vb = match gate.input_b() {
            Some(b) => match self.value(&b).as_bool() {
                Some(v) => Some(v),
                None => return false,
            },
            None => None,
        };
        match self.value(&gate.output()).as_bool() {
            None => true,
            Some(vout) => gate.kind().apply(va, vb) != vout,
        }
    }
}

/// Sampled cross-check of the relevant-column `ppol` search against dense
/// partial witnesses over all 16 column values: on valid covers no sampled
/// witness is an uncovered anti-polymorphism, and on a broken cover the
/// sparse counterexample extends to a dense one.
#[test]
fn ppol_verdicts_agree_with_sampled_dense_partial_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3333);
    let total = 3u64.pow(16);
    for bits in [0b1000u64, 0b0110] {
        let f = TruthTable::new(2, bits);
        let cover = cover_from_circuit(&optimal_circuit(&f, 6).unwrap(), &f).unwrap();
        assert!(cover.verify().unwrap().is_valid());
        for _ in 0..100_000 {
            let w = DensePartial::from_index(rng.gen_range(0..total));
            if w.is_anti(&f) {
                assert!(cover.gates().iter().any(|g| w.covered_by(g)), "f={bits:04b}");
            }
        }
    }

    // a broken cover: the sparse counterexample extends densely
    let f = TruthTable::new(2, 0b1000);
    let cover = Cover::new(f.clone(), CoverFlavor::Ppol, vec![]).unwrap();
    let CoverVerdict::Uncovered(witness) = cover.verify().unwrap() else {
        panic!("empty cover cannot be valid for a non-projection");
    };
    let mut values = [WitnessValue::Undef; 16];
    for (col, v) in witness.columns() {
        values[col.bits() as usize] = *v;
    }
    let dense = DensePartial { values };
    assert!(dense.is_anti(&f));
}

/// Restriction of a total witness across flavors: a gate covers it as `ppol`
/// exactly when it covers it as `pol`.
#[test]
fn total_witness_covering_agrees_across_flavors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4444);
    let f = TruthTable::new(2, 0b0110);
    let cover = cover_from_circuit(&optimal_circuit(&f, 6).unwrap(), &f).unwrap();
    let columns: Vec<polycirc_core::Column> = {
        let mut cols = f.columns();
        for g in cover.gates() {
            for c in g.columns() {
                if !cols.contains(&c) {
                    cols.push(c);
                }
            }
        }
        cols
    };
    for _ in 0..2000 {
        let w = Witness::total(columns.iter().map(|c| (*c, rng.gen::<bool>())));
        for gate in cover.gates() {
            assert_eq!(
                gate.covers(&w, CoverFlavor::Pol).unwrap(),
                gate.covers(&w, CoverFlavor::Ppol).unwrap()
            );
        }
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_table() -> impl Strategy<Value = TruthTable> {
        (1usize..=3).prop_flat_map(|n| {
            (Just(n), 0u64..(1u64 << (1usize << n))).prop_map(|(n, bits)| TruthTable::new(n, bits))
        })
    }

    fn arb_program() -> impl Strategy<Value = (TruthTable, Program)> {
        (arb_table(), proptest::collection::vec((0usize..3, 0usize..64, 0usize..64), 1..10))
            .prop_map(|(table, raw)| {
                let n = table.arity();
                let mut gates = Vec::new();
                for (kind, a, b) in raw {
                    let index = n + gates.len() + 1;
                    let a = a % (index - 1) + 1;
                    let b = b % (index - 1) + 1;
                    gates.push(match kind {
                        0 => polycirc_core::Gate::And(a, b),
                        1 => polycirc_core::Gate::Or(a, b),
                        _ => polycirc_core::Gate::Not(a),
                    });
                }
                let program = Program::from_gates(n, gates).unwrap();
                (table, program)
            })
    }

    proptest! {
        /// Projections preserve every relation.
        #[test]
        fn projections_are_always_polymorphisms(table in arb_table(), k in 1usize..=3, i in 1usize..=3) {
            let i = (i - 1) % k + 1;
            prop_assert!(table.is_polymorphism(&DenseOperation::projection(k, i)));
        }

        /// The trace of a computation is the corresponding row of the
        /// program's column matrix.
        #[test]
        fn trace_equals_matrix_row((table, program) in arb_program()) {
            let cols = program.columns();
            for row in 0..table.rows() {
                let u = program.trace(&table.row_input(row));
                for (i, col) in cols.iter().enumerate() {
                    prop_assert_eq!(u[i], col.bit(row));
                }
            }
        }

        /// Row selectors are consistent with every program: the rows of the
        /// program matrix are computations.
        #[test]
        fn row_selectors_are_consistent((_, program) in arb_program()) {
            let cols = program.columns();
            for row in 0..(1usize << program.arity()) {
                let w = Witness::total(cols.iter().map(|c| (*c, c.bit(row))));
                prop_assert!(program.consistent_with(&w).unwrap());
            }
        }

        /// Witness listing agrees with the closure check on distinct rows;
        /// for the idempotent named operations it agrees with full closure.
        #[test]
        fn witnesses_match_closure(table in arb_table(), op_idx in 0usize..4) {
            let op = polycirc_core::NamedOperation::ALL[op_idx];
            let witnesses = table.polymorphism_witnesses(&op.dense());
            prop_assert_eq!(witnesses.is_empty(), table.is_polymorphism(&op.dense()));
        }
    }
}
