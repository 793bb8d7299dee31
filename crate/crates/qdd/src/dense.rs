//! Dense statevector reference simulator.
//!
//! Cross-checks the diagram engine and deliberately shares no code with it:
//! gates are applied with plain bit masks on a flat amplitude vector and the
//! 2x2 matrices are spelled out locally. Amplitude indices are big-endian,
//! qubit 0 is the most significant bit.

use crate::circuit::{Circuit, CircuitError, GateKind, GateOp};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 unitary for a single-target kind, row-major.
fn matrix2(kind: GateKind, params: &[f64]) -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        GateKind::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        GateKind::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        GateKind::Sdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        GateKind::T => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, s)]],
        GateKind::Tdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, -s)]],
        GateKind::Sx => [
            [c(0.5, 0.5), c(0.5, -0.5)],
            [c(0.5, -0.5), c(0.5, 0.5)],
        ],
        GateKind::Sxdg => [
            [c(0.5, -0.5), c(0.5, 0.5)],
            [c(0.5, 0.5), c(0.5, -0.5)],
        ],
        GateKind::Rx => {
            let h = params[0] / 2.0;
            [
                [c(h.cos(), 0.0), c(0.0, -h.sin())],
                [c(0.0, -h.sin()), c(h.cos(), 0.0)],
            ]
        }
        GateKind::Ry => {
            let h = params[0] / 2.0;
            [
                [c(h.cos(), 0.0), c(-h.sin(), 0.0)],
                [c(h.sin(), 0.0), c(h.cos(), 0.0)],
            ]
        }
        GateKind::Rz => {
            let h = params[0] / 2.0;
            [
                [Complex64::from_polar(1.0, -h), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, h)],
            ]
        }
        GateKind::Phase => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, params[0])],
        ],
        GateKind::U2 => {
            let (phi, lam) = (params[0], params[1]);
            [
                [c(s, 0.0), -Complex64::from_polar(s, lam)],
                [
                    Complex64::from_polar(s, phi),
                    Complex64::from_polar(s, phi + lam),
                ],
            ]
        }
        GateKind::U3 => {
            let (theta, phi, lam) = (params[0], params[1], params[2]);
            let h = theta / 2.0;
            [
                [c(h.cos(), 0.0), -Complex64::from_polar(h.sin(), lam)],
                [
                    Complex64::from_polar(h.sin(), phi),
                    Complex64::from_polar(h.cos(), phi + lam),
                ],
            ]
        }
        GateKind::Swap => unreachable!("swap has no single 2x2 matrix"),
    }
}

pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// |0...0> on `n` qubits. Allocates 2^n amplitudes, so keep n small.
    pub fn zero_state(n: usize) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::EmptyRegister);
        }
        assert!(n <= 26, "dense simulation of {n} qubits is not sensible");
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        Ok(DenseState { num_qubits: n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn qubit_mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<(), CircuitError> {
        for q in op.qubits() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        let ctrl_mask: usize = op.controls.iter().map(|&q| self.qubit_mask(q)).sum();
        if op.kind == GateKind::Swap {
            let (ma, mb) = (self.qubit_mask(op.targets[0]), self.qubit_mask(op.targets[1]));
            for idx in 0..self.amps.len() {
                if idx & ctrl_mask == ctrl_mask && idx & ma != 0 && idx & mb == 0 {
                    let partner = idx ^ ma ^ mb;
                    self.amps.swap(idx, partner);
                }
            }
            return Ok(());
        }
        let u = matrix2(op.kind, &op.params);
        let mt = self.qubit_mask(op.targets[0]);
        for idx in 0..self.amps.len() {
            if idx & mt == 0 && idx & ctrl_mask == ctrl_mask {
                let j = idx | mt;
                let (a0, a1) = (self.amps[idx], self.amps[j]);
                self.amps[idx] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }
}

/// Runs the whole circuit from |0...0> and returns the final amplitudes.
pub fn simulate_dense(circuit: &Circuit) -> Result<Vec<Complex64>, CircuitError> {
    let mut state = DenseState::zero_state(circuit.num_qubits)?;
    for op in &circuit.ops {
        state.apply(op)?;
    }
    Ok(state.into_amplitudes())
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "comparing states of different size");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, PI};

    fn approx(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let mut st = DenseState::zero_state(2).unwrap();
        st.apply(&GateOp::x(0)).unwrap();
        assert!(approx(st.amplitudes()[0b10], 1.0, 0.0));
    }

    #[test]
    fn hadamard_splits() {
        let mut st = DenseState::zero_state(1).unwrap();
        st.apply(&GateOp::h(0)).unwrap();
        assert!(approx(st.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(approx(st.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn bell_pair() {
        let c = Circuit::from_ops("bell", 2, vec![GateOp::h(0), GateOp::cx(0, 1)]);
        let amps = simulate_dense(&c).unwrap();
        assert!(approx(amps[0b00], FRAC_1_SQRT_2, 0.0));
        assert!(approx(amps[0b01], 0.0, 0.0));
        assert!(approx(amps[0b10], 0.0, 0.0));
        assert!(approx(amps[0b11], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn ghz3() {
        let c = Circuit::from_ops(
            "ghz3",
            3,
            vec![GateOp::h(0), GateOp::cx(0, 1), GateOp::cx(1, 2)],
        );
        let amps = simulate_dense(&c).unwrap();
        assert!(approx(amps[0b000], FRAC_1_SQRT_2, 0.0));
        assert!(approx(amps[0b111], FRAC_1_SQRT_2, 0.0));
        let rest: f64 = (1..7).map(|i| amps[i].norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn controlled_phase_hits_only_11() {
        let c = Circuit::from_ops(
            "cp",
            2,
            vec![
                GateOp::h(0),
                GateOp::h(1),
                GateOp::cp(FRAC_PI_3, 0, 1),
            ],
        );
        let amps = simulate_dense(&c).unwrap();
        assert!(approx(amps[0b00], 0.5, 0.0));
        assert!(approx(amps[0b01], 0.5, 0.0));
        assert!(approx(amps[0b10], 0.5, 0.0));
        let expect = Complex64::from_polar(0.5, FRAC_PI_3);
        assert!(approx(amps[0b11], expect.re, expect.im));
    }

    #[test]
    fn swap_moves_excitation() {
        let mut st = DenseState::zero_state(2).unwrap();
        st.apply(&GateOp::x(0)).unwrap();
        st.apply(&GateOp::swap(0, 1)).unwrap();
        assert!(approx(st.amplitudes()[0b01], 1.0, 0.0));
    }

    #[test]
    fn toffoli_flips_on_both_controls() {
        let mut st = DenseState::zero_state(3).unwrap();
        st.apply(&GateOp::x(0)).unwrap();
        st.apply(&GateOp::ccx(0, 1, 2)).unwrap();
        assert!(approx(st.amplitudes()[0b100], 1.0, 0.0));
        st.apply(&GateOp::x(1)).unwrap();
        st.apply(&GateOp::ccx(0, 1, 2)).unwrap();
        assert!(approx(st.amplitudes()[0b111], 1.0, 0.0));
    }

    #[test]
    fn ry_rotates_real_plane() {
        let mut st = DenseState::zero_state(1).unwrap();
        st.apply(&GateOp::ry(0.7, 0)).unwrap();
        assert!(approx(st.amplitudes()[0], (0.35f64).cos(), 0.0));
        assert!(approx(st.amplitudes()[1], (0.35f64).sin(), 0.0));
    }

    #[test]
    fn rz_is_diagonal_phase() {
        let mut st = DenseState::zero_state(1).unwrap();
        st.apply(&GateOp::h(0)).unwrap();
        st.apply(&GateOp::rz(PI / 2.0, 0)).unwrap();
        let lo = Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0);
        let hi = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
        assert!(approx(st.amplitudes()[0], lo.re, lo.im));
        assert!(approx(st.amplitudes()[1], hi.re, hi.im));
    }

    #[test]
    fn norm_is_preserved() {
        let c = Circuit::from_ops(
            "mix",
            3,
            vec![
                GateOp::h(0),
                GateOp::ry(1.1, 1),
                GateOp::cx(0, 2),
                GateOp::cp(0.4, 1, 2),
                GateOp::swap(0, 1),
            ],
        );
        let mut st = DenseState::zero_state(3).unwrap();
        for op in &c.ops {
            st.apply(op).unwrap();
            assert!((st.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let mut st = DenseState::zero_state(2).unwrap();
        assert!(st.apply(&GateOp::h(2)).is_err());
    }
}
