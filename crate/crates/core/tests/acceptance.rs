//! Acceptance suite: one test per claim, each printing a pass line.
//!
//! Expected values are pinned against independent oracles computed here:
//! optimal circuit sizes come from a breadth-first closure over column sets
//! (a different algorithm and representation than the library's search), and
//! cover verdicts are cross-checked against brute-force enumeration of all
//! dense witnesses. Run with `--nocapture` to see the per-criterion lines.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polycirc_core::{
    cover_from_circuit, circuit_from_cover, enumerate_optimal_programs, merge_nd_cond,
    optimal_circuit, pol_cover_from_tsvnd, run_theorem_sweep, split_tsvnd, synthesize_patched,
    tsvnd_from_pol_cover, Cover, CoverFlavor, CoverVerdict, DenseOperation, NamedOperation,
    Program, SweepCheck, SweepOptions, TruthTable, TsvndCircuit,
};
use polycirc_core::synthesis::patched_size_bound;
use polycirc_core::table::{count_dense_anti_polymorphisms, maj_of_three_family};

fn and2() -> TruthTable {
    TruthTable::from_fn(2, |x| x[0] & x[1])
}

fn xnor2() -> TruthTable {
    TruthTable::from_fn(2, |x| x[0] == x[1])
}

fn pass(line: &str, start: Instant) {
    println!("[acceptance] {line}: PASS ({:?})", start.elapsed());
}

#[test]
fn ac1_witness_table_reproduction() {
    let start = Instant::now();
    let maj = NamedOperation::Maj.dense();

    let witnesses = and2().polymorphism_witnesses(&maj);
    assert_eq!(witnesses.len(), 1);
    assert_eq!(witnesses[0].rows, vec![1, 2, 3]);
    assert_eq!(witnesses[0].image, vec![true, true, false]);

    let witnesses = xnor2().polymorphism_witnesses(&maj);
    assert_eq!(witnesses.len(), 4);
    let triples: BTreeSet<Vec<usize>> = witnesses.iter().map(|w| w.rows.clone()).collect();
    let all_triples: BTreeSet<Vec<usize>> =
        [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]].into_iter().collect();
    assert_eq!(triples, all_triples);

    pass("AC1 majority witness counts for f and g", start);
}

#[test]
fn ac2_maj_of_three_memberships() {
    let start = Instant::now();
    let family = maj_of_three_family();
    for w in &family {
        assert!(xnor2().is_dense_anti_polymorphism(w));
    }
    let and_memberships: Vec<bool> =
        family.iter().map(|w| and2().is_dense_anti_polymorphism(w)).collect();
    assert_eq!(and_memberships, vec![false, false, false, true]);
    pass("AC2 w1..w4 anti-polymorphism memberships", start);
}

#[test]
fn ac3_synthesis_sweep_b2_b3() {
    let start = Instant::now();
    for n in [2usize, 3] {
        let report = run_theorem_sweep(&SweepOptions::new(n, [SweepCheck::S3])).unwrap();
        assert!(report.all_passed(), "n={n}");
        // applicability matches detection exactly
        for (bits, record) in report.records.iter().enumerate() {
            let f = TruthTable::new(n, bits as u64);
            let applicable = !f.detect_nontrivial_polymorphisms().is_empty();
            let outcome = record.s3.as_ref().unwrap();
            assert_eq!(outcome.passed() && !record.polymorphisms.is_empty(), applicable);
        }
    }
    pass("AC3 synthesis sweep over B2 and B3 within 5n+2 gates", start);
}

/// Independent oracle for minimal gate counts at n = 2: breadth-first search
/// over sets of realized 4-bit columns, each step adding one derived column.
/// A set is a 16-bit mask, so the state space is fully enumerable.
fn b2_size_oracle(target: u64) -> usize {
    use polycirc_core::Column;
    let full = |c: u64| (c & 0xF) as u16;
    let start_set: u16 =
        (1 << full(Column::input(1, 2).bits())) | (1 << full(Column::input(2, 2).bits()));
    let mut visited: HashSet<u16> = HashSet::new();
    let mut frontier: VecDeque<(u16, usize)> = VecDeque::new();
    visited.insert(start_set);
    frontier.push_back((start_set, 0));
    while let Some((set, depth)) = frontier.pop_front() {
        if set >> full(target) & 1 == 1 {
            return depth;
        }
        let cols: Vec<u64> = (0..16).filter(|&c| set >> c & 1 == 1).map(|c| c as u64).collect();
        let mut derived: Vec<u64> = Vec::new();
        for (i, &a) in cols.iter().enumerate() {
            derived.push(!a & 0xF);
            for &b in cols.iter().skip(i + 1) {
                derived.push(a & b);
                derived.push(a | b);
            }
        }
        for c in derived {
            let next = set | 1 << full(c);
            if next != set && visited.insert(next) {
                frontier.push_back((next, depth + 1));
            }
        }
    }
    unreachable!("the basis is complete");
}

#[test]
fn ac4_cover_equals_circuit_complexity_on_b2() {
    let start = Instant::now();
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);

        // (a) exact optimal size against the independent oracle
        let optimal = optimal_circuit(&f, 6).unwrap();
        assert!(optimal.computes(&f));
        assert_eq!(optimal.size(), b2_size_oracle(bits), "f={bits:04b}");

        // (b) the optimal circuit's gates are a valid ppol cover
        let cover = cover_from_circuit(&optimal, &f).unwrap();
        assert_eq!(cover.len(), optimal.size());
        assert!(cover.verify().unwrap().is_valid(), "f={bits:04b}");

        // (c) converting back preserves the size and the function
        let rebuilt = circuit_from_cover(&cover).unwrap();
        assert_eq!(rebuilt.size(), cover.len());
        assert!(rebuilt.computes(&f));
    }
    assert_eq!(b2_size_oracle(and2().value_bits()), 1);
    assert_eq!(b2_size_oracle(0b0110), 4);

    // (d) randomly generated deduplicated circuits always extract to valid
    // covers
    let mut rng = ChaCha8Rng::seed_from_u64(0x0401);
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        for _ in 0..100 {
            let p = Program::random_computing(&f, 8, &mut rng).dedup_columns();
            let cover = cover_from_circuit(&p, &f).unwrap();
            assert!(cover.verify().unwrap().is_valid(), "f={bits:04b}");
        }
    }
    pass("AC4 optimal size = ppol cover size on all of B2, plus 1600 random covers", start);
}

/// Brute-force `pol` verdict over all 65536 dense total witnesses.
fn dense_pol_verdict(f: &TruthTable, cover: &Cover) -> bool {
    for t in 0..(1u64 << 16) {
        let w = DenseOperation::new(4, t);
        if !f.is_dense_anti_polymorphism(&w) {
            continue;
        }
        let consistent_with_all = cover.gates().iter().all(|g| {
            let va = w.apply_column(&g.input_a());
            let vb = g.input_b().map(|b| w.apply_column(&b));
            g.kind().apply(va, vb) == w.apply_column(&g.output())
        });
        if consistent_with_all {
            return false;
        }
    }
    true
}

#[test]
fn ac5_dense_and_sparse_witness_enumeration_agree() {
    let start = Instant::now();
    assert_eq!(count_dense_anti_polymorphisms(&and2()), 32768);
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        let optimal = optimal_circuit(&f, 6).unwrap();
        let cover = cover_from_circuit(&optimal, &f).unwrap().with_flavor(CoverFlavor::Pol);
        let sparse = cover.verify().unwrap().is_valid();
        let dense = dense_pol_verdict(&f, &cover);
        assert_eq!(sparse, dense, "f={bits:04b}");
        assert!(sparse);
    }
    pass("AC5 relevant-column verdicts match 2^16 dense enumeration; |anti(AND)| = 32768", start);
}

#[test]
fn ac6_no_anti_polymorphism_is_consistent_with_a_correct_program() {
    let start = Instant::now();
    let mut programs_checked = 0usize;
    let mut pairs_checked = 0u64;
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        let optimal_size = optimal_circuit(&f, 6).unwrap().size();
        let programs = enumerate_optimal_programs(&f, optimal_size, 1_000_000);
        assert!(!programs.is_empty());
        assert!(programs.len() < 1_000_000);

        let anti: Vec<DenseOperation> = (0..(1u64 << 16))
            .map(|t| DenseOperation::new(4, t))
            .filter(|w| f.is_dense_anti_polymorphism(w))
            .collect();
        for program in &programs {
            assert!(program.computes(&f));
            let cols = program.columns();
            for w in &anti {
                let consistent = program.gates().iter().enumerate().all(|(j, gate)| {
                    let (a, b) = gate.inputs();
                    let va = w.apply_column(&cols[a - 1]);
                    let vb = b.map(|b| w.apply_column(&cols[b - 1]));
                    gate.kind().apply(va, vb) == w.apply_column(&cols[program.arity() + j])
                });
                assert!(!consistent, "f={bits:04b}");
                pairs_checked += 1;
            }
        }
        programs_checked += programs.len();
    }
    pass(
        &format!(
            "AC6 zero consistent anti-polymorphisms across {programs_checked} optimal programs \
             ({pairs_checked} pairs)"
        ),
        start,
    );
}

#[test]
fn ac7_tsvnd_round_trip_on_b2() {
    let start = Instant::now();
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        let optimal = optimal_circuit(&f, 6).unwrap();
        let cover = cover_from_circuit(&optimal, &f).unwrap().with_flavor(CoverFlavor::Pol);
        assert!(cover.verify().unwrap().is_valid());

        let circuit = tsvnd_from_pol_cover(&cover).unwrap();
        let report = circuit.validate(&f);
        assert!(report.all_ok(), "f={bits:04b}: {report:?}");
        assert!(circuit.size() <= 6 * cover.len() + 3);
        // decode constant: compiling the stored gates to a program costs at
        // most 6 gates per constraint plus the tri-state tail
        let program_form = circuit.to_program_form();
        assert!(program_form.size() <= 6 * circuit.size() + 3);
        assert!(program_form.validate(&f).all_ok());

        let extracted = pol_cover_from_tsvnd(&circuit, &f).unwrap();
        assert_eq!(extracted.len(), circuit.size(), "f={bits:04b}");
        assert!(extracted.verify().unwrap().is_valid(), "f={bits:04b}");
    }
    pass("AC7 pol cover -> TSVND -> pol cover round trip on all of B2", start);
}

#[test]
fn ac8_nd_cond_split_merge_preserve_the_function() {
    let start = Instant::now();
    let mut circuits: Vec<(TruthTable, TsvndCircuit)> = Vec::new();
    for bits in 0..16u64 {
        let f = TruthTable::new(2, bits);
        let cover = cover_from_circuit(&optimal_circuit(&f, 6).unwrap(), &f)
            .unwrap()
            .with_flavor(CoverFlavor::Pol);
        circuits.push((f, tsvnd_from_pol_cover(&cover).unwrap()));
    }
    // three-input circuits kept within the m <= 4 guess budget
    for f in [
        TruthTable::from_fn(3, |x| x[0] & x[1] & x[2]),
        TruthTable::from_fn(3, |x| x[0] | x[1] | x[2]),
        TruthTable::from_fn(3, |x| x[0] & !x[2]),
        TruthTable::from_fn(3, |x| !x[1]),
    ] {
        let cover = cover_from_circuit(&optimal_circuit(&f, 6).unwrap(), &f)
            .unwrap()
            .with_flavor(CoverFlavor::Pol);
        let circuit = tsvnd_from_pol_cover(&cover).unwrap();
        assert!(circuit.nd_arity() <= 4);
        circuits.push((f, circuit));
    }

    for (f, circuit) in &circuits {
        assert!(circuit.validate(f).all_ok());

        // split, check each half, and merge back
        let (nd, cond) = split_tsvnd(circuit).unwrap();
        for row in 0..f.rows() {
            let x = f.row_input(row);
            assert_eq!(nd.accepts(&x), f.value(row));
            assert_eq!(cond.rejects(&x), !f.value(row));
        }
        let merged = merge_nd_cond(&nd, &cond).unwrap();
        assert_eq!(&merged.decided_function().unwrap(), f);

        // and the reverse: merge first, then split the result
        let (nd2, cond2) = split_tsvnd(&merged).unwrap();
        for row in 0..f.rows() {
            let x = f.row_input(row);
            assert_eq!(nd2.accepts(&x), f.value(row));
            assert_eq!(cond2.rejects(&x), !f.value(row));
        }
    }
    pass(
        &format!("AC8 split/merge preserve the decided function on {} circuits", circuits.len()),
        start,
    );
}

#[test]
fn ac9_patched_synthesis_on_random_triples() {
    let start = Instant::now();
    // closed functions per arity and operation, in a fixed order
    let mut closed: Vec<(usize, NamedOperation, Vec<u64>)> = Vec::new();
    for n in [2usize, 3] {
        for op in NamedOperation::ALL {
            let fs: Vec<u64> = (0..(1u64 << (1 << n)))
                .filter(|&bits| TruthTable::new(n, bits).is_closed_under(op))
                .collect();
            closed.push((n, op, fs));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0901);
    for case in 0..50 {
        let (n, op, fs) = &closed[rng.gen_range(0..closed.len())];
        let g = TruthTable::new(*n, fs[rng.gen_range(0..fs.len())]);
        let patch_len = rng.gen_range(0..=4usize.min(g.rows()));
        let mut patch: BTreeSet<usize> = BTreeSet::new();
        while patch.len() < patch_len {
            patch.insert(rng.gen_range(0..g.rows()));
        }
        let mut bits = g.value_bits();
        for &row in &patch {
            bits ^= 1 << row;
        }
        let f = TruthTable::new(*n, bits);

        let program = synthesize_patched(&f, &g, *op, &patch).unwrap();
        for row in 0..f.rows() {
            assert_eq!(
                program.evaluate(&f.row_input(row)).0,
                f.value(row),
                "case {case} row {row}"
            );
        }
        assert!(program.size() <= patched_size_bound(*n, patch.len()), "case {case}");
    }
    pass("AC9 patched synthesis on 50 random (f, g, patch) triples", start);
}
