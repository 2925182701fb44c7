//! Truth-table algebra for small Boolean functions: componentwise operations
//! and (partial) polymorphism checks, straight-line programs over the
//! {AND, OR, NOT} basis with an exact optimal-circuit search, linear-size
//! synthesis from closure operations, gate covers with exhaustive witness
//! verification, and total single-valued non-deterministic (TSVND) circuits.
//!
//! Everything here works at desk scale (up to a handful of inputs) and is
//! exhaustively checkable; all types are immutable values and all operations
//! are pure functions.

pub mod circuit;
pub mod cover;
pub mod search;
pub mod sweep;
pub mod synthesis;
pub mod table;
pub mod tsvnd;

pub use circuit::{Gate, GateKind, Program};
pub use cover::{circuit_from_cover, cover_from_circuit, minimal_cover_search};
pub use cover::{Cover, CoverFlavor, CoverGate, CoverVerdict, RelevantColumns};
pub use search::{enumerate_optimal_programs, optimal_circuit};
pub use sweep::{run_theorem_sweep, SweepCheck, SweepOptions, SweepReport};
pub use synthesis::{
    synthesize_from_polymorphism, synthesize_multi_output, synthesize_patched, BoundaryBits,
    MultiTable,
};
pub use table::{
    apply_componentwise, Column, DenseOperation, NamedOperation, TrivialClass, TruthTable,
    Witness, WitnessValue,
};
pub use tsvnd::{
    merge_nd_cond, pol_cover_from_tsvnd, split_tsvnd, tsvnd_from_pol_cover, Constraint, NdCircuit,
    TsvndBody, TsvndCircuit, TsvndReport, TsvndValue, Var,
};
