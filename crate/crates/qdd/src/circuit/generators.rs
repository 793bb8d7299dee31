//! Deterministic benchmark circuit generators.
//!
//! Same arguments always produce the same circuit, and the seeded families
//! use ChaCha so the stream is stable across platforms and releases.

use super::{Circuit, CircuitError, GateOp};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{PI, TAU};

fn need(n: usize, min: usize, family: &'static str) -> Result<(), CircuitError> {
    if n < min {
        return Err(CircuitError::TooFewQubits { family, min, n });
    }
    Ok(())
}

/// Hadamard on qubit 0 followed by a CX chain; n gates in total.
pub fn gen_ghz(n: usize) -> Result<Circuit, CircuitError> {
    need(n, 2, "ghz")?;
    let mut c = Circuit::new(format!("ghz_{n}"), n)?;
    c.push(GateOp::h(0))?;
    for q in 0..n - 1 {
        c.push(GateOp::cx(q, q + 1))?;
    }
    Ok(c)
}

/// W state on n qubits via the cascade of controlled rotations; 4n-3 gates.
pub fn gen_wstate(n: usize) -> Result<Circuit, CircuitError> {
    need(n, 2, "wstate")?;
    let mut c = Circuit::new(format!("wstate_{n}"), n)?;
    c.push(GateOp::x(n - 1))?;
    for m in 1..n {
        let theta = (1.0 / ((n - m + 1) as f64)).sqrt().acos();
        let (i, j) = (n - m, n - m - 1);
        c.push(GateOp::ry(-theta, j))?;
        c.push(GateOp::cz(i, j))?;
        c.push(GateOp::ry(theta, j))?;
    }
    for k in (1..n).rev() {
        c.push(GateOp::cx(k - 1, k))?;
    }
    Ok(c)
}

fn push_qft_core(c: &mut Circuit, n: usize) -> Result<(), CircuitError> {
    for i in 0..n {
        c.push(GateOp::h(i))?;
        for j in i + 1..n {
            c.push(GateOp::cp(PI / 2f64.powi((j - i) as i32), j, i))?;
        }
    }
    for i in 0..n / 2 {
        c.push(GateOp::swap(i, n - 1 - i))?;
    }
    Ok(())
}

/// Quantum Fourier transform. With `entangled` a GHZ preparation layer is
/// prepended so the transform acts on an entangled input.
pub fn gen_qft(n: usize, entangled: bool) -> Result<Circuit, CircuitError> {
    need(n, 2, "qft")?;
    let name = if entangled {
        format!("qftent_{n}")
    } else {
        format!("qft_{n}")
    };
    let mut c = Circuit::new(name, n)?;
    if entangled {
        c.push(GateOp::h(0))?;
        for q in 0..n - 1 {
            c.push(GateOp::cx(q, q + 1))?;
        }
    }
    push_qft_core(&mut c, n)?;
    Ok(c)
}

/// Eigenphase estimated by [`gen_qpe`], as a reduced fraction of a turn.
/// With `exact` it fits the n-1 counting bits; otherwise it is off by a
/// third of the least significant counting bit.
pub fn qpe_eigenphase(n: usize, exact: bool) -> (u128, u128) {
    let m = (n - 1) as u32;
    let denom = 1u128 << m;
    let t = ((denom as f64) * 0.3).round() as u128;
    let t = t.clamp(1, denom - 1);
    if exact {
        (t, denom)
    } else {
        (3 * t + 1, 3 * denom)
    }
}

/// Phase estimation with n-1 counting qubits and one eigenstate qubit (the
/// last one, prepared in |1>). The counting register is little-endian:
/// qubit p accumulates phase weight 2^p, and the readout lands bit p of the
/// estimate on qubit p.
pub fn gen_qpe(n: usize, exact: bool) -> Result<Circuit, CircuitError> {
    need(n, 3, "qpe")?;
    let m = n - 1;
    let name = if exact {
        format!("qpe_exact_{n}")
    } else {
        format!("qpe_inexact_{n}")
    };
    let mut c = Circuit::new(name, n)?;
    let (num, den) = qpe_eigenphase(n, exact);
    c.push(GateOp::x(m))?;
    for p in 0..m {
        c.push(GateOp::h(p))?;
    }
    for p in 0..m {
        // kickback angle 2*pi * phase * 2^p, reduced mod one turn
        let shifted = (num << p) % den;
        let angle = TAU * (shifted as f64) / (den as f64);
        c.push(GateOp::cp(angle, p, m))?;
    }
    // inverse QFT written for the little-endian register
    for i in 0..m / 2 {
        c.push(GateOp::swap(i, m - 1 - i))?;
    }
    for b in 0..m {
        for a in 0..b {
            c.push(GateOp::cp(-PI / 2f64.powi((b - a) as i32), b, a))?;
        }
        c.push(GateOp::h(b))?;
    }
    Ok(c)
}

/// Graph state over a random 2-regular graph (a shuffled cycle): h on every
/// qubit, then cz per edge.
pub fn gen_graph_state(n: usize, seed: u64) -> Result<Circuit, CircuitError> {
    need(n, 2, "graph")?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);
    let mut c = Circuit::new(format!("graph_{n}_s{seed}"), n)?;
    for q in 0..n {
        c.push(GateOp::h(q))?;
    }
    let edges = if n == 2 { 1 } else { n };
    for i in 0..edges {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        c.push(GateOp::cz(a.min(b), a.max(b)))?;
    }
    Ok(c)
}

/// Layered random circuit. Each layer shuffles the qubits and consumes them
/// with a mix of one-, two- and three-qubit gates.
pub fn gen_random(n: usize, depth: usize, seed: u64) -> Result<Circuit, CircuitError> {
    need(n, 2, "random")?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut c = Circuit::new(format!("random_{n}_d{depth}_s{seed}"), n)?;
    for _ in 0..depth {
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(&mut rng);
        let mut rest = &qubits[..];
        while !rest.is_empty() {
            let roll: f64 = rng.random_range(0.0..1.0);
            let arity = if roll < 0.5 {
                1
            } else if roll < 0.9 {
                2
            } else {
                3
            };
            let arity = arity.min(rest.len());
            let (args, tail) = rest.split_at(arity);
            rest = tail;
            c.push(random_gate(&mut rng, args))?;
        }
    }
    Ok(c)
}

fn random_gate(rng: &mut ChaCha12Rng, args: &[usize]) -> GateOp {
    let angle = |rng: &mut ChaCha12Rng| rng.random_range(0.0..TAU);
    match args.len() {
        1 => {
            let q = args[0];
            match rng.random_range(0..9u32) {
                0 => GateOp::h(q),
                1 => GateOp::x(q),
                2 => GateOp::s(q),
                3 => GateOp::rx(angle(rng), q),
                4 => GateOp::ry(angle(rng), q),
                5 => GateOp::rz(angle(rng), q),
                6 => GateOp::phase(angle(rng), q),
                7 => GateOp::new(
                    super::GateKind::U2,
                    vec![],
                    vec![q],
                    vec![angle(rng), angle(rng)],
                )
                .unwrap(),
                _ => GateOp::new(
                    super::GateKind::U3,
                    vec![],
                    vec![q],
                    vec![angle(rng), angle(rng), angle(rng)],
                )
                .unwrap(),
            }
        }
        2 => {
            let (a, b) = (args[0], args[1]);
            match rng.random_range(0..4u32) {
                0 => GateOp::cx(a, b),
                1 => GateOp::cz(a, b),
                2 => GateOp::cp(angle(rng), a, b),
                _ => GateOp::swap(a, b),
            }
        }
        _ => {
            let (a, b, t) = (args[0], args[1], args[2]);
            match rng.random_range(0..2u32) {
                0 => GateOp::ccx(a, b, t),
                _ => GateOp::new(super::GateKind::Swap, vec![a], vec![b, t], vec![]).unwrap(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::dense::simulate_dense;
    use num_complex::Complex64;

    #[test]
    fn ghz_gate_count_scales_linearly() {
        assert_eq!(gen_ghz(130).unwrap().num_gates(), 130);
        assert_eq!(gen_ghz(2).unwrap().num_gates(), 2);
    }

    #[test]
    fn ghz3_structure() {
        let c = gen_ghz(3).unwrap();
        assert_eq!(
            c.ops,
            vec![GateOp::h(0), GateOp::cx(0, 1), GateOp::cx(1, 2)]
        );
    }

    #[test]
    fn wstate_gate_count() {
        assert_eq!(gen_wstate(130).unwrap().num_gates(), 517);
        assert_eq!(gen_wstate(4).unwrap().num_gates(), 13);
    }

    #[test]
    fn wstate_amplitudes_are_uniform_single_excitations() {
        let amps = simulate_dense(&gen_wstate(4).unwrap()).unwrap();
        for idx in 0..16usize {
            let expect = if idx.count_ones() == 1 { 0.5 } else { 0.0 };
            assert!(
                (amps[idx].norm() - expect).abs() < 1e-12,
                "idx {idx} has |amp| {}",
                amps[idx].norm()
            );
        }
    }

    #[test]
    fn qft_gate_count() {
        // n + n(n-1)/2 + floor(n/2)
        assert_eq!(gen_qft(84, false).unwrap().num_gates(), 3612);
        assert_eq!(gen_qft(18, true).unwrap().num_gates(), 198);
    }

    #[test]
    fn qft_matches_fourier_matrix_on_basis_inputs() {
        let n = 3usize;
        let size = 1usize << n;
        for x in 0..size {
            let mut c = Circuit::new("probe", n).unwrap();
            for q in 0..n {
                if x >> (n - 1 - q) & 1 == 1 {
                    c.push(GateOp::x(q)).unwrap();
                }
            }
            push_qft_core(&mut c, n).unwrap();
            let amps = simulate_dense(&c).unwrap();
            let scale = 1.0 / (size as f64).sqrt();
            for k in 0..size {
                let expect =
                    Complex64::from_polar(scale, TAU * (x as f64) * (k as f64) / size as f64);
                assert!(
                    (amps[k] - expect).norm() < 1e-10,
                    "x={x} k={k}: {} vs {expect}",
                    amps[k]
                );
            }
        }
    }

    /// Exact inverse of [`push_qft_core`]: reversed sequence, negated angles.
    fn push_iqft(c: &mut Circuit, m: usize) -> Result<(), CircuitError> {
        for i in 0..m / 2 {
            c.push(GateOp::swap(i, m - 1 - i))?;
        }
        for i in (0..m).rev() {
            for j in (i + 1..m).rev() {
                c.push(GateOp::cp(-PI / 2f64.powi((j - i) as i32), j, i))?;
            }
            c.push(GateOp::h(i))?;
        }
        Ok(())
    }

    #[test]
    fn iqft_inverts_qft() {
        let n = 4usize;
        let mut c = Circuit::new("roundtrip", n).unwrap();
        c.push(GateOp::x(1)).unwrap();
        c.push(GateOp::x(3)).unwrap();
        push_qft_core(&mut c, n).unwrap();
        push_iqft(&mut c, n).unwrap();
        let amps = simulate_dense(&c).unwrap();
        assert!((amps[0b0101].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qpe_exact_lands_on_basis_state() {
        for n in [3usize, 5, 9] {
            let m = n - 1;
            let c = gen_qpe(n, true).unwrap();
            let (t, den) = qpe_eigenphase(n, true);
            assert_eq!(den, 1u128 << m);
            let amps = simulate_dense(&c).unwrap();
            // counting qubit p reads bit p of t; qubit p is bit m-p of the
            // amplitude index, so the hit sits at the bit-reversed estimate
            let rev = (0..m).fold(0usize, |acc, p| {
                acc | ((((t >> p) & 1) as usize) << (m - 1 - p))
            });
            let idx = rev * 2 + 1;
            assert!(
                (amps[idx] - Complex64::new(1.0, 0.0)).norm() < 1e-9,
                "n={n}: amp at {idx} is {}",
                amps[idx]
            );
        }
    }

    #[test]
    fn qpe_inexact_spreads() {
        let amps = simulate_dense(&gen_qpe(7, false).unwrap()).unwrap();
        let big = amps.iter().filter(|a| a.norm() > 1e-3).count();
        assert!(big > 1, "inexact phase should not collapse to one index");
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qpe_gate_count_at_18() {
        assert_eq!(gen_qpe(18, false).unwrap().num_gates(), 196);
    }

    #[test]
    fn random_18_at_depth_64_lands_near_747_gates() {
        let c = gen_random(18, 64, 1).unwrap();
        assert_eq!(c.num_gates(), 750);
        assert!((710..=784).contains(&c.num_gates()));
        let back = crate::circuit::qasm::parse_qasm(&crate::circuit::qasm::emit_qasm(&c))
            .unwrap()
            .circuit;
        assert_eq!(back.ops, c.ops);
    }

    #[test]
    fn graph_state_shape() {
        let c = gen_graph_state(48, 1).unwrap();
        assert_eq!(c.num_gates(), 96);
        assert!(c.ops[..48].iter().all(|op| op.kind == GateKind::H));
        assert!(c.ops[48..]
            .iter()
            .all(|op| op.kind == GateKind::Z && op.controls.len() == 1));
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(gen_graph_state(10, 7).unwrap(), gen_graph_state(10, 7).unwrap());
        assert_eq!(
            gen_random(10, 20, 42).unwrap(),
            gen_random(10, 20, 42).unwrap()
        );
        assert_ne!(
            gen_random(10, 20, 42).unwrap(),
            gen_random(10, 20, 43).unwrap()
        );
    }

    #[test]
    fn too_small_registers_are_rejected() {
        assert!(gen_ghz(1).is_err());
        assert!(gen_qpe(2, true).is_err());
        assert!(gen_random(1, 5, 0).is_err());
    }
}
