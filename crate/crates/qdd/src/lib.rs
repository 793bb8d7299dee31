//! Quantum circuit simulation on edge-valued decision diagrams.
//!
//! The crate has three layers. [`circuit`] holds the gate-level circuit
//! representation together with generators for common benchmark families and
//! an OpenQASM 2.0 reader/writer. [`dense`] is a brute-force statevector
//! simulator used as a reference oracle at small widths. The decision-diagram
//! engine itself lives in [`dd`], with static qubit-ordering strategies in
//! [`order`] and the instrumented simulation driver in [`sim`].

pub mod amplitude;
pub mod circuit;
pub mod dd;
pub mod dense;
pub mod order;
pub mod sim;

pub use amplitude::{AmpError, AmpTable, Amplitude, DEFAULT_TOLERANCE};
pub use circuit::qasm::{emit_qasm, parse_qasm, ParseError, ParsedProgram};
pub use circuit::{Circuit, CircuitError, CircuitStats, GateKind, GateOp};
pub use dd::{bits_from_str, format_bits, DdEngine, DdError, Edge, NodeId};
pub use dense::{max_abs_diff, simulate_dense, DenseState};
pub use order::{
    compute_order, remap, score_report, OrderError, OrderOutcome, QubitOrder, ScoreEntry,
    ScoreReport, Strategy,
};
pub use sim::{
    compare_orders, simulate, state_in_qubit_space, unpermute_dense, Comparison, SimConfig,
    SimError, SimResult, SimRun, SimTrace, StrategyOutcome, TraceRecord,
};
