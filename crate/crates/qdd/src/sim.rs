//! Instrumented circuit simulation.
//!
//! [`simulate`] runs one circuit under one ordering strategy and reports
//! node counts, applied-operation counts and wall time, optionally with a
//! per-gate trace. [`compare_orders`] runs several strategies side by side
//! and can verify each final state against the dense reference simulator.

use crate::amplitude::DEFAULT_TOLERANCE;
use crate::circuit::{Circuit, CircuitError, GateKind, GateOp};
use crate::dd::{DdEngine, DdError, Edge};
use crate::dense::{max_abs_diff, simulate_dense};
use crate::order::{compute_order, OrderError, QubitOrder, ScoreReport, Strategy};
use num_complex::Complex64;
use std::time::{Duration, Instant};

pub const DEFAULT_GC_WATERMARK: usize = 1 << 22;

/// Widest register the dense cross-check will touch.
pub const VERIFY_MAX_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub strategy: Strategy,
    pub tolerance: f64,
    /// Garbage collection runs when live nodes exceed this; staying above it
    /// even after collection aborts the run.
    pub gc_watermark: usize,
    pub trace: bool,
    /// Keep every k-th trace record (the last gate is always kept).
    pub trace_stride: usize,
    pub ordering_timeout: Duration,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            strategy: Strategy::Original,
            tolerance: DEFAULT_TOLERANCE,
            gc_watermark: DEFAULT_GC_WATERMARK,
            trace: false,
            trace_stride: 1,
            ordering_timeout: Duration::from_secs(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub gate_index: usize,
    pub gate_name: String,
    pub cumulative_ns: u128,
    /// Nodes in the state diagram after this gate.
    pub live_nodes: usize,
    pub apply_ops: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimTrace {
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error("node budget exceeded at gate {gate_index}: {live} live nodes over budget {budget}")]
    NodeBudget {
        gate_index: usize,
        live: usize,
        budget: usize,
        partial: Box<SimTrace>,
    },
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub circuit_name: String,
    pub num_qubits: usize,
    pub num_gates: usize,
    pub strategy: Strategy,
    pub order: QubitOrder,
    pub order_timed_out: bool,
    pub final_nodes: usize,
    pub max_nodes: usize,
    pub apply_ops: u64,
    pub wall: Duration,
    pub norm: f64,
    pub trace: Option<SimTrace>,
    pub score_report: Option<ScoreReport>,
}

/// A finished simulation: the engine and root edge stay available for
/// amplitude queries.
#[derive(Debug)]
pub struct SimRun {
    pub engine: DdEngine,
    pub state: Edge,
    pub result: SimResult,
}

/// Swap gates are not built directly; they expand into three multiplexed
/// flips (the middle one picks up the swap's own controls).
pub fn expand_swaps(op: &GateOp) -> Vec<GateOp> {
    if op.kind != GateKind::Swap {
        return vec![op.clone()];
    }
    let (a, b) = (op.targets[0], op.targets[1]);
    let mut mid_controls = op.controls.clone();
    mid_controls.push(a);
    vec![
        GateOp::new(GateKind::X, vec![b], vec![a], vec![]).unwrap(),
        GateOp::new(GateKind::X, mid_controls, vec![b], vec![]).unwrap(),
        GateOp::new(GateKind::X, vec![b], vec![a], vec![]).unwrap(),
    ]
}

pub fn simulate(c: &Circuit, config: &SimConfig) -> Result<SimRun, SimError> {
    let ordering = compute_order(c, &config.strategy, config.ordering_timeout)?;
    let order = ordering.order;
    let mut engine = DdEngine::new(c.num_qubits, config.tolerance)?;
    let mut state = engine.zero_state();
    let mut max_nodes = engine.node_count(state);
    let mut records: Vec<TraceRecord> = Vec::new();
    let stride = config.trace_stride.max(1);
    let start = Instant::now();
    for (gi, op) in c.ops.iter().enumerate() {
        for sub in expand_swaps(op) {
            let g = engine.make_gate_dd(&sub, &order);
            state = engine.apply(g, state);
        }
        if engine.live_nodes() > config.gc_watermark {
            let live = engine.gc(&[state], &[]);
            if live > config.gc_watermark {
                return Err(SimError::NodeBudget {
                    gate_index: gi,
                    live,
                    budget: config.gc_watermark,
                    partial: Box::new(SimTrace { records }),
                });
            }
        }
        let nodes = engine.node_count(state);
        max_nodes = max_nodes.max(nodes);
        if config.trace && (gi % stride == 0 || gi + 1 == c.ops.len()) {
            records.push(TraceRecord {
                gate_index: gi,
                gate_name: op.name(),
                cumulative_ns: start.elapsed().as_nanos(),
                live_nodes: nodes,
                apply_ops: engine.apply_ops(),
            });
        }
    }
    let wall = start.elapsed();
    let final_nodes = engine.node_count(state);
    let norm = engine.norm(state);
    let result = SimResult {
        circuit_name: c.name.clone(),
        num_qubits: c.num_qubits,
        num_gates: c.num_gates(),
        strategy: config.strategy.clone(),
        order,
        order_timed_out: ordering.timed_out,
        final_nodes,
        max_nodes,
        apply_ops: engine.apply_ops(),
        wall,
        norm,
        trace: config.trace.then_some(SimTrace { records }),
        score_report: ordering.report,
    };
    Ok(SimRun {
        engine,
        state,
        result,
    })
}

/// Reindexes a level-ordered dense state back into qubit order.
pub fn unpermute_dense(amps: &[Complex64], order: &QubitOrder) -> Vec<Complex64> {
    let n = order.len();
    assert_eq!(amps.len(), 1 << n);
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (level_idx, &a) in amps.iter().enumerate() {
        let mut qubit_idx = 0usize;
        for l in 0..n {
            if (level_idx >> (n - 1 - l)) & 1 == 1 {
                qubit_idx |= 1 << (n - 1 - order.qubit_at(l));
            }
        }
        out[qubit_idx] = a;
    }
    out
}

/// The final state as a dense vector indexed by qubit bits, regardless of
/// the order the run used.
pub fn state_in_qubit_space(run: &SimRun) -> Vec<Complex64> {
    let level_space = run.engine.to_dense(run.state);
    unpermute_dense(&level_space, &run.result.order)
}

#[derive(Debug)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    /// The best (minimum wall time) result over the repeats, or the error
    /// message that stopped the first failing attempt.
    pub result: Result<SimResult, String>,
    /// Max absolute amplitude difference against the dense reference, when
    /// verification ran.
    pub dense_diff: Option<f64>,
}

#[derive(Debug)]
pub struct Comparison {
    pub circuit_name: String,
    pub num_qubits: usize,
    pub num_gates: usize,
    pub outcomes: Vec<StrategyOutcome>,
}

pub fn compare_orders(
    c: &Circuit,
    strategies: &[Strategy],
    config: &SimConfig,
    repeats: usize,
    verify: bool,
) -> Comparison {
    let reference = if verify && c.num_qubits <= VERIFY_MAX_QUBITS {
        simulate_dense(c).ok()
    } else {
        None
    };
    let mut outcomes = Vec::new();
    for s in strategies {
        let mut cfg = config.clone();
        cfg.strategy = s.clone();
        let mut best: Option<SimRun> = None;
        let mut error: Option<String> = None;
        for _ in 0..repeats.max(1) {
            match simulate(c, &cfg) {
                Ok(run) => {
                    if best
                        .as_ref()
                        .map_or(true, |b| run.result.wall < b.result.wall)
                    {
                        best = Some(run);
                    }
                }
                Err(e) => {
                    error = Some(e.to_string());
                    break;
                }
            }
        }
        outcomes.push(match (best, error) {
            (_, Some(e)) => StrategyOutcome {
                strategy: s.clone(),
                result: Err(e),
                dense_diff: None,
            },
            (Some(run), None) => {
                let dense_diff = reference
                    .as_ref()
                    .map(|d| max_abs_diff(d, &state_in_qubit_space(&run)));
                StrategyOutcome {
                    strategy: s.clone(),
                    result: Ok(run.result),
                    dense_diff,
                }
            }
            (None, None) => unreachable!("at least one repeat runs"),
        });
    }
    Comparison {
        circuit_name: c.name.clone(),
        num_qubits: c.num_qubits,
        num_gates: c.num_gates(),
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::generators::{gen_ghz, gen_random};

    #[test]
    fn ghz_grows_one_node_per_entangling_gate() {
        let run = simulate(&gen_ghz(8).unwrap(), &SimConfig::default()).unwrap();
        assert_eq!(run.result.final_nodes, 15);
        assert_eq!(run.result.max_nodes, 15);
        assert!(run.result.apply_ops > 0);
        assert!((run.result.norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_circuit_keeps_the_zero_state() {
        let c = Circuit::new("empty", 3).unwrap();
        let cfg = SimConfig {
            trace: true,
            ..SimConfig::default()
        };
        let run = simulate(&c, &cfg).unwrap();
        assert_eq!(run.result.final_nodes, 3);
        assert_eq!(run.result.max_nodes, 3);
        assert_eq!(run.result.apply_ops, 0);
        assert!(run.result.trace.unwrap().records.is_empty());
    }

    #[test]
    fn trace_counts_are_monotonic() {
        let cfg = SimConfig {
            trace: true,
            ..SimConfig::default()
        };
        let run = simulate(&gen_ghz(8).unwrap(), &cfg).unwrap();
        let records = run.result.trace.unwrap().records;
        assert_eq!(records.len(), 8);
        for pair in records.windows(2) {
            assert!(pair[0].gate_index < pair[1].gate_index);
            assert!(pair[0].cumulative_ns <= pair[1].cumulative_ns);
            assert!(pair[0].apply_ops <= pair[1].apply_ops);
        }
        assert_eq!(records[0].gate_name, "h");
        assert_eq!(records[7].gate_name, "cx");
    }

    #[test]
    fn trace_stride_keeps_the_last_gate() {
        let cfg = SimConfig {
            trace: true,
            trace_stride: 3,
            ..SimConfig::default()
        };
        let run = simulate(&gen_ghz(8).unwrap(), &cfg).unwrap();
        let idx: Vec<usize> = run
            .result
            .trace
            .unwrap()
            .records
            .iter()
            .map(|r| r.gate_index)
            .collect();
        assert_eq!(idx, vec![0, 3, 6, 7]);
    }

    #[test]
    fn swap_circuits_match_the_dense_oracle() {
        let mut c = Circuit::new("swaps", 4).unwrap();
        c.push(GateOp::h(0)).unwrap();
        c.push(GateOp::x(2)).unwrap();
        c.push(GateOp::swap(0, 3)).unwrap();
        c.push(GateOp::new(GateKind::Swap, vec![2], vec![1, 3], vec![]).unwrap())
            .unwrap();
        let cfg = SimConfig {
            trace: true,
            ..SimConfig::default()
        };
        let run = simulate(&c, &cfg).unwrap();
        // One record per circuit gate even though swaps expand to three ops.
        assert_eq!(run.result.trace.as_ref().unwrap().records.len(), 4);
        let expect = simulate_dense(&c).unwrap();
        assert!(max_abs_diff(&expect, &state_in_qubit_space(&run)) < 1e-12);
    }

    #[test]
    fn runs_are_deterministic() {
        let c = gen_random(6, 20, 11).unwrap();
        let cfg = SimConfig {
            strategy: Strategy::Proposed,
            ..SimConfig::default()
        };
        let a = simulate(&c, &cfg).unwrap();
        let b = simulate(&c, &cfg).unwrap();
        assert_eq!(a.result.apply_ops, b.result.apply_ops);
        assert_eq!(a.result.final_nodes, b.result.final_nodes);
        assert_eq!(a.result.max_nodes, b.result.max_nodes);
        assert_eq!(state_in_qubit_space(&a), state_in_qubit_space(&b));
    }

    #[test]
    fn node_budget_aborts_with_partial_trace() {
        let cfg = SimConfig {
            gc_watermark: 10,
            trace: true,
            ..SimConfig::default()
        };
        let err = simulate(&gen_ghz(8).unwrap(), &cfg).unwrap_err();
        match err {
            SimError::NodeBudget {
                gate_index,
                live,
                budget,
                partial,
            } => {
                assert_eq!(budget, 10);
                assert!(live > budget);
                assert_eq!(partial.records.len(), gate_index);
            }
            other => panic!("expected a node budget error, got {other}"),
        }
    }

    #[test]
    fn all_strategies_agree_with_the_oracle() {
        let c = gen_random(6, 25, 3).unwrap();
        let cmp = compare_orders(
            &c,
            &Strategy::NAMED,
            &SimConfig::default(),
            1,
            true,
        );
        for o in &cmp.outcomes {
            let diff = o.dense_diff.expect("verification ran");
            assert!(diff < 1e-10, "{}: diff {diff}", o.strategy);
            assert!(o.result.is_ok());
        }
    }

    #[test]
    fn reversed_order_still_lands_in_qubit_space() {
        let c = gen_ghz(5).unwrap();
        let cfg = SimConfig {
            strategy: Strategy::Reversed,
            ..SimConfig::default()
        };
        let run = simulate(&c, &cfg).unwrap();
        let got = state_in_qubit_space(&run);
        let expect = simulate_dense(&c).unwrap();
        assert!(max_abs_diff(&expect, &got) < 1e-12);
    }

    // The W-state peak depends on the order: the scored order puts the busy
    // middle qubits on top, and the un-compute cascade then transiently holds
    // 3n-4 nodes instead of 2n-1.
    #[test]
    fn wstate_130_node_counts_depend_on_the_order() {
        let c = crate::circuit::generators::gen_wstate(130).unwrap();
        let original = simulate(&c, &SimConfig::default()).unwrap();
        assert_eq!(original.result.final_nodes, 259);
        assert_eq!(original.result.max_nodes, 259);
        let cfg = SimConfig {
            strategy: Strategy::Proposed,
            ..SimConfig::default()
        };
        let scored = simulate(&c, &cfg).unwrap();
        assert_eq!(scored.result.final_nodes, 259);
        assert_eq!(scored.result.max_nodes, 386);
    }

    // An entangled input defeats the QFT's product structure: the diagram
    // saturates at 2^n - 1 nodes.
    #[test]
    fn entangled_qft_saturates() {
        let c = crate::circuit::generators::gen_qft(8, true).unwrap();
        let run = simulate(&c, &SimConfig::default()).unwrap();
        assert_eq!(run.result.final_nodes, 255);
        assert_eq!(run.result.max_nodes, 255);
    }
}
