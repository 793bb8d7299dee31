//! Building gate diagrams.
//!
//! A gate touching target level `t` (controls anywhere) becomes a matrix
//! diagram over all levels. Below the target each of the four 2x2 entry
//! edges is extended downward: an uninvolved level tensors the entry with
//! the identity, a control level routes the 0-branch to an identity chain
//! (for diagonal entries) and the 1-branch to the entry. The four edges
//! merge into the target-level node, and levels above wrap it the same way.
//!
//! The entry table here is intentionally written out separately from the
//! dense reference simulator so the two paths stay independent.

use super::{DdEngine, Edge};
use crate::amplitude::Amplitude;
use crate::circuit::{GateKind, GateOp};
use crate::order::QubitOrder;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

fn entries(kind: GateKind, params: &[f64]) -> [[Complex64; 2]; 2] {
    use GateKind::*;
    let c = Complex64::new;
    let s = FRAC_1_SQRT_2;
    match kind {
        I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        Sdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        T => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, FRAC_PI_4)]],
        Tdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, -FRAC_PI_4)]],
        Sx => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Sxdg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        Rx => {
            let h = params[0] / 2.0;
            [[c(h.cos(), 0.0), c(0.0, -h.sin())], [c(0.0, -h.sin()), c(h.cos(), 0.0)]]
        }
        Ry => {
            let h = params[0] / 2.0;
            [[c(h.cos(), 0.0), c(-h.sin(), 0.0)], [c(h.sin(), 0.0), c(h.cos(), 0.0)]]
        }
        Rz => {
            let h = params[0] / 2.0;
            [
                [Complex64::from_polar(1.0, -h), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, h)],
            ]
        }
        Phase => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, params[0])],
        ],
        U2 => {
            let (phi, lam) = (params[0], params[1]);
            [
                [c(s, 0.0), -Complex64::from_polar(s, lam)],
                [
                    Complex64::from_polar(s, phi),
                    Complex64::from_polar(s, phi + lam),
                ],
            ]
        }
        U3 => {
            let (theta, phi, lam) = (params[0], params[1], params[2]);
            let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            [
                [c(ch, 0.0), -Complex64::from_polar(sh, lam)],
                [
                    Complex64::from_polar(sh, phi),
                    Complex64::from_polar(ch, phi + lam),
                ],
            ]
        }
        Swap => unreachable!("swap is decomposed before reaching the matrix table"),
    }
}

impl DdEngine {
    fn intern_entry(&mut self, v: Complex64) -> Edge {
        let h = self.amps.intern(v.re, v.im).expect("gate entries are finite");
        if h.is_zero() {
            Edge::ZERO
        } else {
            Edge::terminal(h)
        }
    }

    /// Builds the full-width matrix diagram for a single-target gate under
    /// the given qubit order. Swap ops must be decomposed by the caller.
    pub fn make_gate_dd(&mut self, op: &GateOp, order: &QubitOrder) -> Edge {
        assert!(
            op.kind != GateKind::Swap,
            "decompose swap before building a gate diagram"
        );
        assert_eq!(order.len(), self.num_qubits);
        let n = self.num_qubits;
        let target_level = order.level_of(op.targets[0]);
        let mut is_ctrl = vec![false; n];
        for &c in &op.controls {
            is_ctrl[order.level_of(c)] = true;
        }

        // ids[l] is the identity from level l down; ids[n] the scalar one.
        let mut ids = vec![Edge::terminal(Amplitude::ONE); n + 1];
        for l in (0..n).rev() {
            let e = ids[l + 1];
            ids[l] = self.make_mat_node(l, [e, Edge::ZERO, Edge::ZERO, e]);
        }

        let m = entries(op.kind, &op.params);
        let mut e = [
            self.intern_entry(m[0][0]),
            self.intern_entry(m[0][1]),
            self.intern_entry(m[1][0]),
            self.intern_entry(m[1][1]),
        ];
        for l in (target_level + 1..n).rev() {
            for r in 0..2 {
                for c in 0..2 {
                    let cur = e[2 * r + c];
                    e[2 * r + c] = if is_ctrl[l] {
                        let diag = if r == c { ids[l + 1] } else { Edge::ZERO };
                        self.make_mat_node(l, [diag, Edge::ZERO, Edge::ZERO, cur])
                    } else {
                        self.make_mat_node(l, [cur, Edge::ZERO, Edge::ZERO, cur])
                    };
                }
            }
        }
        let mut g = self.make_mat_node(target_level, e);
        for l in (0..target_level).rev() {
            g = if is_ctrl[l] {
                self.make_mat_node(l, [ids[l + 1], Edge::ZERO, Edge::ZERO, g])
            } else {
                self.make_mat_node(l, [g, Edge::ZERO, Edge::ZERO, g])
            };
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::DEFAULT_TOLERANCE;

    fn engine(n: usize) -> DdEngine {
        DdEngine::new(n, DEFAULT_TOLERANCE).unwrap()
    }

    fn dense_gate(n: usize, op: &GateOp, perm: Vec<usize>) -> Vec<Complex64> {
        let mut e = engine(n);
        let order = QubitOrder::from_perm(perm).unwrap();
        let g = e.make_gate_dd(op, &order);
        e.mat_to_dense(g)
    }

    fn approx(a: &[Complex64], b: &[Complex64]) {
        assert_eq!(a.len(), b.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).norm() < 1e-12, "entry {i}: {x} vs {y}");
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_gate_builds_a_chain() {
        let mut e = engine(3);
        let order = QubitOrder::identity(3);
        let g = e.make_gate_dd(&GateOp::new(GateKind::I, vec![], vec![1], vec![]).unwrap(), &order);
        assert_eq!(e.mat_node_count(g), 3);
        let mut expect = vec![z(); 64];
        for i in 0..8 {
            expect[i * 8 + i] = one();
        }
        approx(&e.mat_to_dense(g), &expect);
    }

    #[test]
    fn cx_control_above_target() {
        // Basis order |q0 q1>: flips q1 when q0 is set.
        let m = dense_gate(2, &GateOp::cx(0, 1), vec![0, 1]);
        let expect = vec![
            one(), z(), z(), z(),
            z(), one(), z(), z(),
            z(), z(), z(), one(),
            z(), z(), one(), z(),
        ];
        approx(&m, &expect);
    }

    #[test]
    fn cx_control_below_target() {
        // Flips q0 when q1 is set: |01> <-> |11>.
        let m = dense_gate(2, &GateOp::cx(1, 0), vec![0, 1]);
        let expect = vec![
            one(), z(), z(), z(),
            z(), z(), z(), one(),
            z(), z(), one(), z(),
            z(), one(), z(), z(),
        ];
        approx(&m, &expect);
    }

    #[test]
    fn reversed_order_swaps_the_roles() {
        // Under order [1, 0] the diagram's level space sees cx(0, 1) as a
        // control on the lower level.
        let m = dense_gate(2, &GateOp::cx(0, 1), vec![1, 0]);
        let expect = vec![
            one(), z(), z(), z(),
            z(), z(), z(), one(),
            z(), z(), one(), z(),
            z(), one(), z(), z(),
        ];
        approx(&m, &expect);
    }

    #[test]
    fn toffoli_matrix_is_a_permutation() {
        let m = dense_gate(3, &GateOp::ccx(0, 1, 2), vec![0, 1, 2]);
        let mut expect = vec![z(); 64];
        for i in 0..8 {
            let j = if i == 0b110 {
                0b111
            } else if i == 0b111 {
                0b110
            } else {
                i
            };
            expect[j * 8 + i] = one();
        }
        approx(&m, &expect);
    }

    #[test]
    fn phase_gate_entries() {
        let m = dense_gate(1, &GateOp::phase(0.3, 0), vec![0]);
        approx(
            &m,
            &vec![one(), z(), z(), Complex64::from_polar(1.0, 0.3)],
        );
    }

    #[test]
    fn rz_carries_half_angle_phases() {
        let m = dense_gate(1, &GateOp::rz(0.3, 0), vec![0]);
        approx(
            &m,
            &vec![
                Complex64::from_polar(1.0, -0.15),
                z(),
                z(),
                Complex64::from_polar(1.0, 0.15),
            ],
        );
    }

    #[test]
    fn controlled_phase_only_touches_one_entry() {
        let m = dense_gate(2, &GateOp::cp(0.7, 1, 0), vec![0, 1]);
        let mut expect = vec![z(); 16];
        expect[0] = one();
        expect[5] = one();
        expect[10] = one();
        expect[15] = Complex64::from_polar(1.0, 0.7);
        approx(&m, &expect);
    }

    #[test]
    fn u3_covers_the_general_case() {
        let op = GateOp::new(GateKind::U3, vec![], vec![0], vec![0.4, 0.5, 0.6]).unwrap();
        let m = dense_gate(1, &op, vec![0]);
        let (ch, sh) = ((0.2f64).cos(), (0.2f64).sin());
        approx(
            &m,
            &vec![
                c(ch, 0.0),
                -Complex64::from_polar(sh, 0.6),
                Complex64::from_polar(sh, 0.5),
                Complex64::from_polar(ch, 1.1),
            ],
        );
    }

    #[test]
    fn uninvolved_levels_tensor_identity() {
        // X on the middle qubit of three: I (x) X (x) I.
        let m = dense_gate(3, &GateOp::x(1), vec![0, 1, 2]);
        let mut expect = vec![z(); 64];
        for i in 0..8 {
            expect[(i ^ 0b010) * 8 + i] = one();
        }
        approx(&m, &expect);
    }

    #[test]
    fn gate_diagrams_are_hash_consed() {
        let mut e = engine(4);
        let order = QubitOrder::identity(4);
        let a = e.make_gate_dd(&GateOp::h(2), &order);
        let b = e.make_gate_dd(&GateOp::h(2), &order);
        assert_eq!(a, b);
    }
}
