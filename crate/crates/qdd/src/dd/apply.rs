//! Matrix-vector application and vector addition.
//!
//! Both recursions walk matching levels of their operands in lockstep, which
//! quasi-reduction guarantees. The multiply cache is keyed on the two node
//! ids with edge weights stripped: the cached result is for weight-one
//! inputs and gets rescaled by the actual weight product on a hit. The add
//! cache keys full edges, with operands in a canonical order since addition
//! commutes.

use super::{DdEngine, Edge};
use crate::amplitude::Amplitude;

impl DdEngine {
    /// Applies a gate diagram to a state and returns the new state root.
    pub fn apply(&mut self, gate: Edge, state: Edge) -> Edge {
        self.mul_rec(gate, state)
    }

    pub fn add(&mut self, a: Edge, b: Edge) -> Edge {
        self.add_rec(a, b)
    }

    pub(crate) fn scale(&mut self, e: Edge, w: Amplitude) -> Edge {
        if e.is_zero() || w == Amplitude::ONE {
            return e;
        }
        if w.is_zero() {
            return Edge::ZERO;
        }
        let nw = self.amps.mul(e.weight, w);
        if nw.is_zero() {
            Edge::ZERO
        } else {
            Edge {
                weight: nw,
                target: e.target,
            }
        }
    }

    fn mul_rec(&mut self, m: Edge, v: Edge) -> Edge {
        if m.is_zero() || v.is_zero() {
            return Edge::ZERO;
        }
        let w = self.amps.mul(m.weight, v.weight);
        if w.is_zero() {
            return Edge::ZERO;
        }
        if m.target.is_terminal() {
            debug_assert!(v.target.is_terminal());
            return Edge::terminal(w);
        }
        let key = (m.target, v.target);
        if let Some(&hit) = self.mul_cache.get(&key) {
            return self.scale(hit, w);
        }
        self.apply_ops += 1;
        let mn = *self.mats.get(m.target);
        let vn = *self.vecs.get(v.target);
        debug_assert_eq!(mn.level, vn.level);
        let mut rows = [Edge::ZERO; 2];
        for (r, row) in rows.iter_mut().enumerate() {
            let p0 = self.mul_rec(mn.children[2 * r], vn.children[0]);
            let p1 = self.mul_rec(mn.children[2 * r + 1], vn.children[1]);
            *row = self.add_rec(p0, p1);
        }
        let res = self.make_vec_node(vn.level as usize, rows);
        self.mul_cache.insert(key, res);
        self.scale(res, w)
    }

    fn add_rec(&mut self, a: Edge, b: Edge) -> Edge {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.target.is_terminal() {
            debug_assert!(b.target.is_terminal());
            let w = self.amps.add(a.weight, b.weight);
            return if w.is_zero() {
                Edge::ZERO
            } else {
                Edge::terminal(w)
            };
        }
        let ka = (a.weight.index(), a.target.0);
        let kb = (b.weight.index(), b.target.0);
        let key = if ka <= kb { (a, b) } else { (b, a) };
        if let Some(&hit) = self.add_cache.get(&key) {
            return hit;
        }
        let an = *self.vecs.get(a.target);
        let bn = *self.vecs.get(b.target);
        debug_assert_eq!(an.level, bn.level);
        let mut children = [Edge::ZERO; 2];
        for (i, ch) in children.iter_mut().enumerate() {
            let ea = self.scale(an.children[i], a.weight);
            let eb = self.scale(bn.children[i], b.weight);
            *ch = self.add_rec(ea, eb);
        }
        let res = self.make_vec_node(an.level as usize, children);
        self.add_cache.insert(key, res);
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::DEFAULT_TOLERANCE;
    use crate::circuit::GateOp;
    use crate::order::QubitOrder;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn engine(n: usize) -> DdEngine {
        DdEngine::new(n, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn x_flips_a_single_qubit() {
        let mut e = engine(1);
        let order = QubitOrder::identity(1);
        let s = e.zero_state();
        let g = e.make_gate_dd(&GateOp::x(0), &order);
        let s = e.apply(g, s);
        assert_eq!(e.to_dense(s), vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn h_splits_evenly() {
        let mut e = engine(1);
        let order = QubitOrder::identity(1);
        let s = e.zero_state();
        let g = e.make_gate_dd(&GateOp::h(0), &order);
        let s = e.apply(g, s);
        let d = e.to_dense(s);
        assert!((d[0] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((d[1] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert_eq!(e.node_count(s), 1);
    }

    #[test]
    fn bell_pair_amplitudes() {
        let mut e = engine(2);
        let order = QubitOrder::identity(2);
        let mut s = e.zero_state();
        for op in [GateOp::h(0), GateOp::cx(0, 1)] {
            let g = e.make_gate_dd(&op, &order);
            s = e.apply(g, s);
        }
        let d = e.to_dense(s);
        assert!((d[0b00] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert_eq!(d[0b01], Complex64::new(0.0, 0.0));
        assert_eq!(d[0b10], Complex64::new(0.0, 0.0));
        assert!((d[0b11] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((e.norm(s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_hadamard_keeps_a_product_chain() {
        let mut e = engine(10);
        let order = QubitOrder::identity(10);
        let s = e.zero_state();
        let g = e.make_gate_dd(&GateOp::h(3), &order);
        let s = e.apply(g, s);
        assert_eq!(e.node_count(s), 10);
    }

    #[test]
    fn repeated_application_hits_the_cache() {
        let mut e = engine(4);
        let order = QubitOrder::identity(4);
        let s = e.zero_state();
        let g = e.make_gate_dd(&GateOp::x(2), &order);
        let _ = e.apply(g, s);
        let before = e.apply_ops();
        assert!(before > 0);
        let _ = e.apply(g, s);
        assert_eq!(e.apply_ops(), before);
    }

    #[test]
    fn add_commutes_through_the_cache() {
        let mut e = engine(2);
        let a = e.make_basis_state(&[false, true]);
        let b = e.make_basis_state(&[true, false]);
        let ab = e.add(a, b);
        let ba = e.add(b, a);
        assert_eq!(ab, ba);
        let d = e.to_dense(ab);
        assert_eq!(d[0b01], Complex64::new(1.0, 0.0));
        assert_eq!(d[0b10], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn adding_opposites_cancels_to_zero() {
        let mut e = engine(2);
        let a = e.make_basis_state(&[true, true]);
        let minus_one = e.amp_table_mut().intern(-1.0, 0.0).unwrap();
        let neg = e.scale(a, minus_one);
        assert_eq!(e.add(a, neg), Edge::ZERO);
    }

    #[test]
    fn double_x_restores_the_exact_root() {
        let mut e = engine(3);
        let order = QubitOrder::identity(3);
        let s0 = e.zero_state();
        let g = e.make_gate_dd(&GateOp::x(1), &order);
        let s1 = e.apply(g, s0);
        let s2 = e.apply(g, s1);
        assert_eq!(s2, s0);
    }

    #[test]
    fn double_h_restores_the_exact_root() {
        let mut e = engine(3);
        let order = QubitOrder::identity(3);
        let s0 = e.zero_state();
        let g = e.make_gate_dd(&GateOp::h(1), &order);
        let s1 = e.apply(g, s0);
        let s2 = e.apply(g, s1);
        assert_eq!(s2, s0);
    }
}
