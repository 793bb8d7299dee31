//! Edge-valued decision diagrams.
//!
//! A state is a binary tree over levels 0..n with complex weights on the
//! edges; level 0 branches on the most significant bit of the amplitude
//! index. Diagrams are quasi-reduced: every nonzero root-to-terminal path
//! visits every level, and equal subtrees are shared through a unique table.
//! Vector nodes carry two children, matrix (gate) nodes four in row-major
//! order. Node weights are normalized so the first nonzero child edge is
//! exactly one; the factored-out weight travels up the incoming edge. The
//! zero function is the weight-zero edge straight to the terminal.

mod apply;
mod gates;

use crate::amplitude::{AmpError, AmpTable, Amplitude};
use num_complex::Complex64;
use rustc_hash::FxHashMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DdError {
    #[error(transparent)]
    Amp(#[from] AmpError),
    #[error("cannot simulate an empty register")]
    EmptyRegister,
    #[error("{0} qubits exceed the engine limit of 255")]
    TooManyQubits(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub const TERMINAL: NodeId = NodeId(u32::MAX);

    pub fn is_terminal(self) -> bool {
        self == NodeId::TERMINAL
    }
}

/// A weighted pointer into a diagram. `weight == 0` implies the terminal
/// target; a terminal target with nonzero weight is a scalar leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub weight: Amplitude,
    pub target: NodeId,
}

impl Edge {
    pub const ZERO: Edge = Edge {
        weight: Amplitude::ZERO,
        target: NodeId::TERMINAL,
    };

    pub fn terminal(weight: Amplitude) -> Edge {
        Edge {
            weight,
            target: NodeId::TERMINAL,
        }
    }

    pub fn is_zero(self) -> bool {
        self.weight.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node<const W: usize> {
    level: u8,
    children: [Edge; W],
}

struct Arena<const W: usize> {
    nodes: Vec<Node<W>>,
    unique: FxHashMap<Node<W>, u32>,
    free: Vec<u32>,
}

impl<const W: usize> Arena<W> {
    fn new() -> Self {
        Arena {
            nodes: Vec::new(),
            unique: FxHashMap::default(),
            free: Vec::new(),
        }
    }

    fn get(&self, id: NodeId) -> &Node<W> {
        &self.nodes[id.0 as usize]
    }

    fn intern(&mut self, node: Node<W>) -> NodeId {
        if let Some(&id) = self.unique.get(&node) {
            return NodeId(id);
        }
        let id = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot as usize] = node;
                slot
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        self.unique.insert(node, id);
        NodeId(id)
    }

    fn live(&self) -> usize {
        self.unique.len()
    }

    fn mark(&self, root: NodeId, marked: &mut [bool]) {
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if id.is_terminal() || marked[id.0 as usize] {
                continue;
            }
            marked[id.0 as usize] = true;
            for ch in self.get(id).children {
                if !ch.target.is_terminal() {
                    stack.push(ch.target);
                }
            }
        }
    }

    fn sweep(&mut self, marked: &[bool]) {
        let mut dead: Vec<u32> = self
            .unique
            .values()
            .copied()
            .filter(|&id| !marked[id as usize])
            .collect();
        dead.sort_unstable();
        for id in dead {
            self.unique.remove(&self.nodes[id as usize]);
            self.free.push(id);
        }
    }
}

/// Shared state for building and combining diagrams: the amplitude table,
/// one arena per node arity, and the operation caches.
pub struct DdEngine {
    amps: AmpTable,
    num_qubits: usize,
    vecs: Arena<2>,
    mats: Arena<4>,
    mul_cache: FxHashMap<(NodeId, NodeId), Edge>,
    add_cache: FxHashMap<(Edge, Edge), Edge>,
    apply_ops: u64,
}

impl std::fmt::Debug for DdEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DdEngine")
            .field("num_qubits", &self.num_qubits)
            .field("vec_nodes", &self.vecs.live())
            .field("mat_nodes", &self.mats.live())
            .field("amplitudes", &self.amps.len())
            .field("apply_ops", &self.apply_ops)
            .finish()
    }
}

fn normalize<const W: usize>(
    amps: &mut AmpTable,
    mut children: [Edge; W],
) -> Option<(Amplitude, [Edge; W])> {
    let pivot = children.iter().position(|e| !e.is_zero())?;
    let w = children[pivot].weight;
    for (i, ch) in children.iter_mut().enumerate() {
        if ch.is_zero() {
            continue;
        }
        if i == pivot {
            ch.weight = Amplitude::ONE;
            continue;
        }
        let q = amps.div(ch.weight, w).expect("pivot is nonzero");
        if q.is_zero() {
            *ch = Edge::ZERO;
        } else {
            ch.weight = q;
        }
    }
    Some((w, children))
}

impl DdEngine {
    pub fn new(num_qubits: usize, tolerance: f64) -> Result<Self, DdError> {
        if num_qubits == 0 {
            return Err(DdError::EmptyRegister);
        }
        if num_qubits > 255 {
            return Err(DdError::TooManyQubits(num_qubits));
        }
        Ok(DdEngine {
            amps: AmpTable::new(tolerance)?,
            num_qubits,
            vecs: Arena::new(),
            mats: Arena::new(),
            mul_cache: FxHashMap::default(),
            add_cache: FxHashMap::default(),
            apply_ops: 0,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amp_table(&self) -> &AmpTable {
        &self.amps
    }

    pub fn amp_table_mut(&mut self) -> &mut AmpTable {
        &mut self.amps
    }

    /// Count of multiply-cache misses so far; the unit of algorithmic work.
    pub fn apply_ops(&self) -> u64 {
        self.apply_ops
    }

    /// Live nodes across both arenas, including garbage not yet collected.
    pub fn live_nodes(&self) -> usize {
        self.vecs.live() + self.mats.live()
    }

    /// Builds a normalized vector node, collapsing all-zero children to the
    /// zero edge. The returned edge weight carries the factored-out pivot.
    pub fn make_vec_node(&mut self, level: usize, children: [Edge; 2]) -> Edge {
        debug_assert!(level < self.num_qubits);
        match normalize(&mut self.amps, children) {
            None => Edge::ZERO,
            Some((w, children)) => Edge {
                weight: w,
                target: self.vecs.intern(Node {
                    level: level as u8,
                    children,
                }),
            },
        }
    }

    /// Matrix sibling of [`Self::make_vec_node`]; children are row-major
    /// `[e00, e01, e10, e11]`.
    pub fn make_mat_node(&mut self, level: usize, children: [Edge; 4]) -> Edge {
        debug_assert!(level < self.num_qubits);
        match normalize(&mut self.amps, children) {
            None => Edge::ZERO,
            Some((w, children)) => Edge {
                weight: w,
                target: self.mats.intern(Node {
                    level: level as u8,
                    children,
                }),
            },
        }
    }

    /// Basis state with `bits[level]` selecting the branch at each level.
    pub fn make_basis_state(&mut self, bits: &[bool]) -> Edge {
        assert_eq!(bits.len(), self.num_qubits);
        let mut e = Edge::terminal(Amplitude::ONE);
        for l in (0..self.num_qubits).rev() {
            let children = if bits[l] {
                [Edge::ZERO, e]
            } else {
                [e, Edge::ZERO]
            };
            e = self.make_vec_node(l, children);
        }
        e
    }

    pub fn zero_state(&mut self) -> Edge {
        self.make_basis_state(&vec![false; self.num_qubits])
    }

    /// Amplitude of one computational basis index, in level bit order
    /// (level 0 is the most significant bit).
    pub fn amplitude(&mut self, root: Edge, index: u64) -> Amplitude {
        assert!(self.num_qubits <= 63);
        if root.is_zero() {
            return Amplitude::ZERO;
        }
        let n = self.num_qubits;
        let mut acc = root.weight;
        let mut node = root.target;
        for l in 0..n {
            let bit = ((index >> (n - 1 - l)) & 1) as usize;
            let ch = self.vecs.get(node).children[bit];
            if ch.is_zero() {
                return Amplitude::ZERO;
            }
            acc = self.amps.mul(acc, ch.weight);
            node = ch.target;
        }
        debug_assert!(node.is_terminal());
        acc
    }

    pub fn node_count(&self, root: Edge) -> usize {
        Self::count_reachable(&self.vecs, root)
    }

    pub fn mat_node_count(&self, root: Edge) -> usize {
        Self::count_reachable(&self.mats, root)
    }

    fn count_reachable<const W: usize>(arena: &Arena<W>, root: Edge) -> usize {
        if root.is_zero() || root.target.is_terminal() {
            return 0;
        }
        let mut seen = vec![false; arena.nodes.len()];
        let mut stack = vec![root.target];
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if seen[id.0 as usize] {
                continue;
            }
            seen[id.0 as usize] = true;
            count += 1;
            for ch in arena.get(id).children {
                if !ch.is_zero() && !ch.target.is_terminal() {
                    stack.push(ch.target);
                }
            }
        }
        count
    }

    /// Euclidean norm of the represented vector.
    pub fn norm(&self, root: Edge) -> f64 {
        fn mag2(
            arena: &Arena<2>,
            amps: &AmpTable,
            memo: &mut FxHashMap<u32, f64>,
            id: NodeId,
        ) -> f64 {
            if id.is_terminal() {
                return 1.0;
            }
            if let Some(&v) = memo.get(&id.0) {
                return v;
            }
            let mut total = 0.0;
            for ch in arena.get(id).children {
                if !ch.is_zero() {
                    total += amps.value(ch.weight).norm_sqr() * mag2(arena, amps, memo, ch.target);
                }
            }
            memo.insert(id.0, total);
            total
        }
        if root.is_zero() {
            return 0.0;
        }
        let mut memo = FxHashMap::default();
        let sub = mag2(&self.vecs, &self.amps, &mut memo, root.target);
        (self.amps.value(root.weight).norm_sqr() * sub).sqrt()
    }

    /// Expands the state into a dense vector indexed in level bit order.
    pub fn to_dense(&self, root: Edge) -> Vec<Complex64> {
        assert!(self.num_qubits <= 26, "dense expansion is for small states");
        let n = self.num_qubits;
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
        fn walk(
            arena: &Arena<2>,
            amps: &AmpTable,
            out: &mut [Complex64],
            n: usize,
            level: usize,
            prefix: usize,
            acc: Complex64,
            target: NodeId,
        ) {
            if level == n {
                out[prefix] = acc;
                return;
            }
            for (bit, ch) in arena.get(target).children.into_iter().enumerate() {
                if ch.is_zero() {
                    continue;
                }
                walk(
                    arena,
                    amps,
                    out,
                    n,
                    level + 1,
                    (prefix << 1) | bit,
                    acc * amps.value(ch.weight),
                    ch.target,
                );
            }
        }
        if !root.is_zero() {
            walk(
                &self.vecs,
                &self.amps,
                &mut out,
                n,
                0,
                0,
                self.amps.value(root.weight),
                root.target,
            );
        }
        out
    }

    /// Expands a gate diagram into a row-major `2^n x 2^n` matrix in level
    /// bit order.
    pub fn mat_to_dense(&self, root: Edge) -> Vec<Complex64> {
        assert!(self.num_qubits <= 13, "dense expansion is for small gates");
        let n = self.num_qubits;
        let dim = 1usize << n;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        #[allow(clippy::too_many_arguments)]
        fn walk(
            arena: &Arena<4>,
            amps: &AmpTable,
            out: &mut [Complex64],
            n: usize,
            level: usize,
            row: usize,
            col: usize,
            acc: Complex64,
            target: NodeId,
        ) {
            if level == n {
                out[row * (1 << n) + col] = acc;
                return;
            }
            for (i, ch) in arena.get(target).children.into_iter().enumerate() {
                if ch.is_zero() {
                    continue;
                }
                walk(
                    arena,
                    amps,
                    out,
                    n,
                    level + 1,
                    (row << 1) | (i >> 1),
                    (col << 1) | (i & 1),
                    acc * amps.value(ch.weight),
                    ch.target,
                );
            }
        }
        if !root.is_zero() {
            walk(
                &self.mats,
                &self.amps,
                &mut out,
                n,
                0,
                0,
                0,
                self.amps.value(root.weight),
                root.target,
            );
        }
        out
    }

    /// Drops every node not reachable from the given roots and clears the
    /// operation caches. Returns the live node count afterwards.
    pub fn gc(&mut self, vec_roots: &[Edge], mat_roots: &[Edge]) -> usize {
        self.mul_cache.clear();
        self.add_cache.clear();
        let mut vmark = vec![false; self.vecs.nodes.len()];
        for r in vec_roots {
            if !r.is_zero() {
                self.vecs.mark(r.target, &mut vmark);
            }
        }
        self.vecs.sweep(&vmark);
        let mut mmark = vec![false; self.mats.nodes.len()];
        for r in mat_roots {
            if !r.is_zero() {
                self.mats.mark(r.target, &mut mmark);
            }
        }
        self.mats.sweep(&mmark);
        self.live_nodes()
    }

    /// The `k` largest amplitudes by magnitude, best-first. Returns
    /// `(index, value)` pairs in level bit order, largest magnitude first;
    /// ties prefer the lower index.
    pub fn top_amplitudes(&self, root: Edge, k: usize) -> Vec<(u64, Complex64)> {
        assert!(self.num_qubits <= 63);
        if root.is_zero() || k == 0 {
            return Vec::new();
        }
        fn max_mag(
            arena: &Arena<2>,
            amps: &AmpTable,
            memo: &mut FxHashMap<u32, f64>,
            id: NodeId,
        ) -> f64 {
            if id.is_terminal() {
                return 1.0;
            }
            if let Some(&v) = memo.get(&id.0) {
                return v;
            }
            let mut best = 0.0f64;
            for ch in arena.get(id).children {
                if !ch.is_zero() {
                    let m = amps.value(ch.weight).norm() * max_mag(arena, amps, memo, ch.target);
                    best = best.max(m);
                }
            }
            memo.insert(id.0, best);
            best
        }

        struct Cand {
            bound: f64,
            index: u64,
            level: usize,
            acc: Complex64,
            target: NodeId,
        }
        impl PartialEq for Cand {
            fn eq(&self, other: &Self) -> bool {
                self.bound == other.bound && self.index == other.index
            }
        }
        impl Eq for Cand {}
        impl PartialOrd for Cand {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Cand {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.bound
                    .total_cmp(&other.bound)
                    .then(other.index.cmp(&self.index))
            }
        }

        let mut memo = FxHashMap::default();
        let n = self.num_qubits;
        let mut heap = std::collections::BinaryHeap::new();
        let root_val = self.amps.value(root.weight);
        heap.push(Cand {
            bound: root_val.norm() * max_mag(&self.vecs, &self.amps, &mut memo, root.target),
            index: 0,
            level: 0,
            acc: root_val,
            target: root.target,
        });
        let mut out = Vec::with_capacity(k);
        while let Some(c) = heap.pop() {
            if c.level == n {
                out.push((c.index, c.acc));
                if out.len() == k {
                    break;
                }
                continue;
            }
            for (bit, ch) in self.vecs.get(c.target).children.into_iter().enumerate() {
                if ch.is_zero() {
                    continue;
                }
                let acc = c.acc * self.amps.value(ch.weight);
                heap.push(Cand {
                    bound: acc.norm() * max_mag(&self.vecs, &self.amps, &mut memo, ch.target),
                    index: (c.index << 1) | bit as u64,
                    level: c.level + 1,
                    acc,
                    target: ch.target,
                });
            }
        }
        out
    }

    /// Graphviz rendering of a state diagram.
    pub fn to_dot(&self, root: Edge) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("digraph dd {\n  rankdir=TB;\n  root [shape=point];\n");
        if root.is_zero() {
            out.push_str("  zero [label=\"0\", shape=box];\n  root -> zero;\n}\n");
            return out;
        }
        let fmt_w = |w: Amplitude| {
            let v = self.amps.value(w);
            format!("{:.4}{:+.4}i", v.re, v.im)
        };
        let _ = writeln!(out, "  terminal [label=\"1\", shape=box];");
        let _ = writeln!(out, "  root -> n{} [label=\"{}\"];", root.target.0, fmt_w(root.weight));
        let mut seen = vec![false; self.vecs.nodes.len()];
        let mut stack = vec![root.target];
        while let Some(id) = stack.pop() {
            if seen[id.0 as usize] {
                continue;
            }
            seen[id.0 as usize] = true;
            let node = self.vecs.get(id);
            let _ = writeln!(out, "  n{} [label=\"q{}\", shape=circle];", id.0, node.level);
            for (bit, ch) in node.children.into_iter().enumerate() {
                if ch.is_zero() {
                    continue;
                }
                let head = if ch.target.is_terminal() {
                    "terminal".to_string()
                } else {
                    format!("n{}", ch.target.0)
                };
                let style = if bit == 0 { "dashed" } else { "solid" };
                let _ = writeln!(
                    out,
                    "  n{} -> {head} [label=\"{}\", style={style}];",
                    id.0,
                    fmt_w(ch.weight)
                );
                if !ch.target.is_terminal() {
                    stack.push(ch.target);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Parses a string of `0`/`1` characters into basis bits.
pub fn bits_from_str(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Renders a basis index as a bit string of width `n`, most significant
/// bit first.
pub fn format_bits(index: u64, n: usize) -> String {
    (0..n)
        .map(|l| {
            if (index >> (n - 1 - l)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(n: usize) -> DdEngine {
        DdEngine::new(n, crate::amplitude::DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn zero_state_is_a_product_chain() {
        let mut e = engine(3);
        let s = e.zero_state();
        assert_eq!(e.node_count(s), 3);
        assert_eq!(e.amplitude(s, 0), Amplitude::ONE);
        for idx in 1..8 {
            assert_eq!(e.amplitude(s, idx), Amplitude::ZERO);
        }
        assert!((e.norm(s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_state_hits_its_index() {
        let mut e = engine(3);
        let s = e.make_basis_state(&[true, false, true]);
        assert_eq!(e.amplitude(s, 0b101), Amplitude::ONE);
        assert_eq!(e.amplitude(s, 0b111), Amplitude::ZERO);
        let d = e.to_dense(s);
        assert_eq!(d[0b101], Complex64::new(1.0, 0.0));
        assert_eq!(d.iter().filter(|v| v.norm() > 0.0).count(), 1);
    }

    #[test]
    fn identical_states_share_nodes() {
        let mut e = engine(4);
        let a = e.make_basis_state(&[false, true, false, true]);
        let b = e.make_basis_state(&[false, true, false, true]);
        assert_eq!(a, b);
        assert_eq!(e.live_nodes(), 4);
    }

    #[test]
    fn make_vec_node_normalizes_to_leading_one() {
        let mut e = engine(1);
        let half = e.amp_table_mut().intern(0.5, 0.0).unwrap();
        let half_i = e.amp_table_mut().intern(0.0, 0.5).unwrap();
        let edge = e.make_vec_node(0, [Edge::terminal(half), Edge::terminal(half_i)]);
        assert_eq!(edge.weight, half);
        let node = e.vecs.get(edge.target);
        assert_eq!(node.children[0].weight, Amplitude::ONE);
        let ratio = e.amps.value(node.children[1].weight);
        assert!((ratio - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn all_zero_children_collapse() {
        let mut e = engine(2);
        assert_eq!(e.make_vec_node(1, [Edge::ZERO, Edge::ZERO]), Edge::ZERO);
    }

    #[test]
    fn gc_reclaims_unreachable_nodes() {
        let mut e = engine(3);
        let keep = e.make_basis_state(&[false, false, false]);
        let _drop = e.make_basis_state(&[true, true, true]);
        assert_eq!(e.live_nodes(), 6);
        let live = e.gc(&[keep], &[]);
        assert_eq!(live, 3);
        assert_eq!(e.node_count(keep), 3);
        assert_eq!(e.amplitude(keep, 0), Amplitude::ONE);
        // Freed slots are reused by later allocations.
        let again = e.make_basis_state(&[true, true, true]);
        assert_eq!(e.live_nodes(), 6);
        assert_eq!(e.amplitude(again, 0b111), Amplitude::ONE);
    }

    #[test]
    fn norm_of_manual_superposition() {
        let mut e = engine(1);
        let s = e.amp_table_mut().intern(std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
        let edge = e.make_vec_node(0, [Edge::terminal(s), Edge::terminal(s)]);
        assert!((e.norm(edge) - 1.0).abs() < 1e-12);
        assert_eq!(e.node_count(edge), 1);
    }

    #[test]
    fn top_amplitudes_orders_by_magnitude() {
        let mut e = engine(2);
        let a = e.amp_table_mut().intern(0.8, 0.0).unwrap();
        let b = e.amp_table_mut().intern(0.6, 0.0).unwrap();
        let bottom0 = e.make_vec_node(1, [Edge::terminal(a), Edge::terminal(b)]);
        let bottom1 = e.make_vec_node(1, [Edge::ZERO, Edge::terminal(Amplitude::ONE)]);
        let half = e.amp_table_mut().intern(0.5, 0.0).unwrap();
        let root = e.make_vec_node(0, [bottom0, Edge { weight: half, target: bottom1.target }]);
        let tops = e.top_amplitudes(root, 4);
        let idx: Vec<u64> = tops.iter().map(|&(i, _)| i).collect();
        assert_eq!(idx, vec![0b00, 0b01, 0b11]);
        assert!(tops[0].1.norm() > tops[1].1.norm());
        assert!(tops[1].1.norm() > tops[2].1.norm());
    }

    #[test]
    fn bit_string_helpers_round_trip() {
        assert_eq!(bits_from_str("0110"), Some(vec![false, true, true, false]));
        assert_eq!(bits_from_str("01x"), None);
        assert_eq!(format_bits(0b0110, 4), "0110");
        assert_eq!(format_bits(1, 3), "001");
    }

    #[test]
    fn engine_rejects_bad_sizes() {
        assert_eq!(
            DdEngine::new(0, 1e-13).unwrap_err(),
            DdError::EmptyRegister
        );
        assert_eq!(
            DdEngine::new(300, 1e-13).unwrap_err(),
            DdError::TooManyQubits(300)
        );
    }

    #[test]
    fn dot_output_mentions_every_live_path() {
        let mut e = engine(2);
        let s = e.make_basis_state(&[true, false]);
        let dot = e.to_dot(s);
        assert!(dot.contains("digraph"));
        assert!(dot.contains("terminal"));
        assert!(dot.contains("q0"));
        assert!(dot.contains("q1"));
    }
}
