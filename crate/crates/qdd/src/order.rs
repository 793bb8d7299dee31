//! Static qubit orderings.
//!
//! A [`QubitOrder`] maps diagram levels to circuit qubits: `perm[0]` sits at
//! the top of the diagram and owns the most significant bit of every
//! amplitude index. Orders are chosen once, before simulation, by one of the
//! [`Strategy`] variants.

use crate::circuit::{circuit_stats, Circuit, GateOp};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("order has {got} entries, circuit has {expected} qubits")]
    WrongLength { got: usize, expected: usize },
    #[error("order is not a permutation: entry {0} is repeated or out of range")]
    NotAPermutation(usize),
    #[error("unknown ordering strategy '{0}'")]
    UnknownStrategy(String),
    #[error("bad explicit order entry '{0}'")]
    BadExplicitEntry(String),
}

/// Bijection between diagram levels and circuit qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitOrder {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl QubitOrder {
    pub fn identity(n: usize) -> Self {
        let perm: Vec<usize> = (0..n).collect();
        QubitOrder {
            inv: perm.clone(),
            perm,
        }
    }

    /// Builds an order from a level-to-qubit permutation.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self, OrderError> {
        let n = perm.len();
        let mut inv = vec![usize::MAX; n];
        for (level, &q) in perm.iter().enumerate() {
            if q >= n || inv[q] != usize::MAX {
                return Err(OrderError::NotAPermutation(q));
            }
            inv[q] = level;
        }
        Ok(QubitOrder { perm, inv })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// The qubit placed at `level`, level 0 being the top of the diagram.
    pub fn qubit_at(&self, level: usize) -> usize {
        self.perm[level]
    }

    /// The level holding `qubit`.
    pub fn level_of(&self, qubit: usize) -> usize {
        self.inv[qubit]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> QubitOrder {
        QubitOrder {
            perm: self.inv.clone(),
            inv: self.perm.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(l, &q)| l == q)
    }
}

/// How to pick the qubit order for a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Keep qubits in circuit order.
    Original,
    /// Circuit order, reversed.
    Reversed,
    /// Busiest qubits (most gates) on top.
    NGates,
    /// Greedy grouping of qubits that share multi-qubit gates.
    ControlAdjacency,
    /// Control-count ranking with a parameterized-gate multiplier.
    Proposed,
    /// A fixed level-to-qubit permutation supplied by the caller.
    Explicit(Vec<usize>),
}

impl Strategy {
    /// Every named strategy, in the order used by comparison tables.
    pub const NAMED: [Strategy; 5] = [
        Strategy::Original,
        Strategy::Reversed,
        Strategy::NGates,
        Strategy::ControlAdjacency,
        Strategy::Proposed,
    ];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Original => write!(f, "original"),
            Strategy::Reversed => write!(f, "reversed"),
            Strategy::NGates => write!(f, "ngates"),
            Strategy::ControlAdjacency => write!(f, "control_adjacency"),
            Strategy::Proposed => write!(f, "proposed"),
            Strategy::Explicit(p) => {
                write!(f, "explicit:")?;
                for (i, q) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{q}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Strategy {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        match s {
            "original" => Ok(Strategy::Original),
            "reversed" => Ok(Strategy::Reversed),
            "ngates" => Ok(Strategy::NGates),
            "control_adjacency" => Ok(Strategy::ControlAdjacency),
            "proposed" => Ok(Strategy::Proposed),
            _ => match s.strip_prefix("explicit:") {
                Some(rest) => {
                    let mut perm = Vec::new();
                    for tok in rest.split(',') {
                        match tok.trim().parse::<usize>() {
                            Ok(v) => perm.push(v),
                            Err(_) => return Err(OrderError::BadExplicitEntry(tok.to_string())),
                        }
                    }
                    Ok(Strategy::Explicit(perm))
                }
                None => Err(OrderError::UnknownStrategy(s.to_string())),
            },
        }
    }
}

/// Per-qubit numbers behind the scored strategy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub qubit: usize,
    pub n_ctrl: usize,
    pub n_param_gate: usize,
    pub base_score: f64,
    pub final_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub entries: Vec<ScoreEntry>,
}

/// Weight applied for `k` non-Clifford-angle parameterized gates on a qubit.
/// `log2(k)`, clamped below at 1 so small counts never shrink a score.
pub fn param_multiplier(k: usize) -> f64 {
    (k as f64).log2().max(1.0)
}

/// Scores every qubit: rank by control count ascending (rank r gives a base
/// score of 2^r), then multiply by [`param_multiplier`] of the qubit's
/// parameterized-gate count. High scores go to the top of the diagram.
pub fn score_report(c: &Circuit) -> ScoreReport {
    let stats = circuit_stats(c);
    let n = c.num_qubits;
    let mut by_ctrl: Vec<usize> = (0..n).collect();
    by_ctrl.sort_by_key(|&q| (stats.n_ctrl[q], q));
    let mut base = vec![0.0; n];
    for (rank, &q) in by_ctrl.iter().enumerate() {
        base[q] = 2f64.powi(rank as i32);
    }
    let entries = (0..n)
        .map(|q| ScoreEntry {
            qubit: q,
            n_ctrl: stats.n_ctrl[q],
            n_param_gate: stats.n_param_gate[q],
            base_score: base[q],
            final_score: base[q] * param_multiplier(stats.n_param_gate[q]),
        })
        .collect();
    ScoreReport { entries }
}

fn order_scored(c: &Circuit) -> (QubitOrder, ScoreReport) {
    let report = score_report(c);
    let mut qs: Vec<usize> = (0..c.num_qubits).collect();
    qs.sort_by(|&a, &b| {
        report.entries[b]
            .final_score
            .total_cmp(&report.entries[a].final_score)
            .then(a.cmp(&b))
    });
    (QubitOrder::from_perm(qs).expect("sorted a permutation"), report)
}

fn order_ngates(c: &Circuit) -> QubitOrder {
    let stats = circuit_stats(c);
    let mut qs: Vec<usize> = (0..c.num_qubits).collect();
    qs.sort_by_key(|&q| (std::cmp::Reverse(stats.n_gates[q]), q));
    QubitOrder::from_perm(qs).expect("sorted a permutation")
}

/// Greedy clustering: take the pair of qubits sharing the most multi-qubit
/// gates as the top two levels, then repeatedly append the unplaced qubit
/// with the strongest total coupling to the placed set. Ties prefer lower
/// qubit indices. Falls back to the original order when the circuit has no
/// multi-qubit gates or the deadline passes.
fn order_control_adjacency(c: &Circuit, start: Instant, timeout: Duration) -> (QubitOrder, bool) {
    let n = c.num_qubits;
    let mut w = vec![0u64; n * n];
    for op in &c.ops {
        let qs: Vec<usize> = op.qubits().collect();
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                let (a, b) = (qs[i].min(qs[j]), qs[i].max(qs[j]));
                w[a * n + b] += 1;
            }
        }
    }
    let mut best: Option<(u64, usize, usize)> = None;
    for a in 0..n {
        for b in a + 1..n {
            let wt = w[a * n + b];
            if wt > 0 && best.map_or(true, |(bw, _, _)| wt > bw) {
                best = Some((wt, a, b));
            }
        }
    }
    let Some((_, a, b)) = best else {
        return (QubitOrder::identity(n), false);
    };
    let mut placed = vec![a, b];
    let mut is_placed = vec![false; n];
    is_placed[a] = true;
    is_placed[b] = true;
    while placed.len() < n {
        if start.elapsed() > timeout {
            return (QubitOrder::identity(n), true);
        }
        let mut pick = usize::MAX;
        let mut pick_w = 0u64;
        for q in 0..n {
            if is_placed[q] {
                continue;
            }
            let total: u64 = placed
                .iter()
                .map(|&p| w[q.min(p) * n + q.max(p)])
                .sum();
            if pick == usize::MAX || total > pick_w {
                pick = q;
                pick_w = total;
            }
        }
        placed.push(pick);
        is_placed[pick] = true;
    }
    (QubitOrder::from_perm(placed).expect("placed every qubit once"), false)
}

/// The outcome of running an ordering strategy.
#[derive(Clone, Debug)]
pub struct OrderOutcome {
    pub order: QubitOrder,
    /// Present for the scored strategy only.
    pub report: Option<ScoreReport>,
    /// True when a heuristic hit its deadline and fell back to the original
    /// order.
    pub timed_out: bool,
    pub elapsed: Duration,
}

pub fn compute_order(
    c: &Circuit,
    strategy: &Strategy,
    timeout: Duration,
) -> Result<OrderOutcome, OrderError> {
    let start = Instant::now();
    let n = c.num_qubits;
    let (order, report, timed_out) = match strategy {
        Strategy::Original => (QubitOrder::identity(n), None, false),
        Strategy::Reversed => {
            let perm: Vec<usize> = (0..n).rev().collect();
            (QubitOrder::from_perm(perm).unwrap(), None, false)
        }
        Strategy::NGates => (order_ngates(c), None, false),
        Strategy::ControlAdjacency => {
            let (o, timed_out) = order_control_adjacency(c, start, timeout);
            (o, None, timed_out)
        }
        Strategy::Proposed => {
            let (o, r) = order_scored(c);
            (o, Some(r), false)
        }
        Strategy::Explicit(p) => {
            if p.len() != n {
                return Err(OrderError::WrongLength {
                    got: p.len(),
                    expected: n,
                });
            }
            (QubitOrder::from_perm(p.clone())?, None, false)
        }
    };
    Ok(OrderOutcome {
        order,
        report,
        timed_out,
        elapsed: start.elapsed(),
    })
}

/// Rewrites a circuit so qubit `q` becomes qubit `order.level_of(q)`.
/// Simulating the result under the identity order matches simulating the
/// original under `order`.
pub fn remap(c: &Circuit, order: &QubitOrder) -> Circuit {
    assert_eq!(c.num_qubits, order.len());
    let ops = c
        .ops
        .iter()
        .map(|op| {
            GateOp::new(
                op.kind,
                op.controls.iter().map(|&q| order.level_of(q)).collect(),
                op.targets.iter().map(|&q| order.level_of(q)).collect(),
                op.params.clone(),
            )
            .expect("permutation keeps ops valid")
        })
        .collect();
    Circuit::from_ops(&c.name, c.num_qubits, ops)
}
