//! Gate-level circuit representation and per-qubit statistics.

pub mod generators;
pub mod qasm;

use std::f64::consts::FRAC_PI_2;

/// Base gate kinds. Controlled variants (cx, ccx, cp, ...) are expressed by
/// attaching control qubits to a base kind in [`GateOp`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Sxdg,
    Rx,
    Ry,
    Rz,
    /// Single-parameter phase gate, `p`/`u1` in OpenQASM.
    Phase,
    U2,
    U3,
    Swap,
}

impl GateKind {
    pub fn param_arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn target_arity(self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Rotation-like kinds whose angles feed the ordering score.
    pub fn is_parameterized(self) -> bool {
        self.param_arity() > 0
    }

    pub fn base_name(self) -> &'static str {
        match self {
            GateKind::I => "id",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Sx => "sx",
            GateKind::Sxdg => "sxdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Phase => "p",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Swap => "swap",
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit needs at least one qubit")]
    EmptyRegister,
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {qubit} used more than once in one gate")]
    DuplicateQubit { qubit: usize },
    #[error("{name} expects {expected} target(s), got {got}")]
    BadTargetCount {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{name} expects {expected} parameter(s), got {got}")]
    BadParamCount {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("gate parameter must be finite")]
    NonFiniteParam,
    #[error("{family} needs at least {min} qubits, got {n}")]
    TooFewQubits {
        family: &'static str,
        min: usize,
        n: usize,
    },
}

/// One gate application: a base kind, optional control qubits, target
/// qubit(s) and real parameters.
#[derive(Clone, PartialEq, Debug)]
pub struct GateOp {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    pub params: Vec<f64>,
}

impl GateOp {
    pub fn new(
        kind: GateKind,
        controls: Vec<usize>,
        targets: Vec<usize>,
        params: Vec<f64>,
    ) -> Result<Self, CircuitError> {
        let op = GateOp {
            kind,
            controls,
            targets,
            params,
        };
        op.check_shape()?;
        Ok(op)
    }

    fn check_shape(&self) -> Result<(), CircuitError> {
        if self.targets.len() != self.kind.target_arity() {
            return Err(CircuitError::BadTargetCount {
                name: self.kind.base_name(),
                expected: self.kind.target_arity(),
                got: self.targets.len(),
            });
        }
        if self.params.len() != self.kind.param_arity() {
            return Err(CircuitError::BadParamCount {
                name: self.kind.base_name(),
                expected: self.kind.param_arity(),
                got: self.params.len(),
            });
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(CircuitError::NonFiniteParam);
        }
        let mut seen = self.qubits().collect::<Vec<_>>();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(CircuitError::DuplicateQubit { qubit: w[0] });
            }
        }
        Ok(())
    }

    /// All qubits the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits().max().expect("gate touches at least one qubit")
    }

    /// Display name with the control prefix folded in, e.g. `cx` or `ccx`.
    pub fn name(&self) -> String {
        let base = self.kind.base_name();
        match (self.kind, self.controls.len()) {
            (_, 0) => base.to_string(),
            (GateKind::X, 1) => "cx".into(),
            (GateKind::X, 2) => "ccx".into(),
            (GateKind::X, _) => "mcx".into(),
            (GateKind::Phase, 1) => "cp".into(),
            (_, 1) => format!("c{base}"),
            (_, k) => format!("c{k}{base}"),
        }
    }

    // Shorthand constructors for the gates the generators and tests build.
    // They panic on malformed qubit lists, which indicates a caller bug.

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![], vec![q], vec![]).unwrap()
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, vec![], vec![q], vec![]).unwrap()
    }

    pub fn s(q: usize) -> Self {
        Self::new(GateKind::S, vec![], vec![q], vec![]).unwrap()
    }

    pub fn sdg(q: usize) -> Self {
        Self::new(GateKind::Sdg, vec![], vec![q], vec![]).unwrap()
    }

    pub fn z(q: usize) -> Self {
        Self::new(GateKind::Z, vec![], vec![q], vec![]).unwrap()
    }

    pub fn zdg(q: usize) -> Self {
        // z is self-inverse; kept for readable test sequences
        Self::z(q)
    }

    pub fn rx(theta: f64, q: usize) -> Self {
        Self::new(GateKind::Rx, vec![], vec![q], vec![theta]).unwrap()
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::new(GateKind::Ry, vec![], vec![q], vec![theta]).unwrap()
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self::new(GateKind::Rz, vec![], vec![q], vec![theta]).unwrap()
    }

    pub fn phase(lambda: f64, q: usize) -> Self {
        Self::new(GateKind::Phase, vec![], vec![q], vec![lambda]).unwrap()
    }

    pub fn cx(c: usize, t: usize) -> Self {
        Self::new(GateKind::X, vec![c], vec![t], vec![]).unwrap()
    }

    pub fn cz(c: usize, t: usize) -> Self {
        Self::new(GateKind::Z, vec![c], vec![t], vec![]).unwrap()
    }

    pub fn cp(lambda: f64, c: usize, t: usize) -> Self {
        Self::new(GateKind::Phase, vec![c], vec![t], vec![lambda]).unwrap()
    }

    pub fn ccx(c1: usize, c2: usize, t: usize) -> Self {
        Self::new(GateKind::X, vec![c1, c2], vec![t], vec![]).unwrap()
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap, vec![], vec![a, b], vec![]).unwrap()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::EmptyRegister);
        }
        Ok(Circuit {
            name: name.into(),
            num_qubits,
            ops: Vec::new(),
        })
    }

    pub fn push(&mut self, op: GateOp) -> Result<(), CircuitError> {
        op.check_shape()?;
        for q in op.qubits() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn num_gates(&self) -> usize {
        self.ops.len()
    }

    /// Builds a circuit from known-good ops; panics on validation failure.
    pub fn from_ops(name: impl Into<String>, num_qubits: usize, ops: Vec<GateOp>) -> Self {
        let mut c = Circuit::new(name, num_qubits).expect("non-empty register");
        for op in ops {
            c.push(op).expect("valid gate op");
        }
        c
    }
}

/// Tolerance for deciding that a rotation angle is an integer multiple of
/// pi/2 and therefore does not count as a "real" parameterized gate.
pub const ANGLE_TOL: f64 = 1e-12;

pub fn is_half_pi_multiple(angle: f64) -> bool {
    let k = (angle / FRAC_PI_2).round();
    (angle - k * FRAC_PI_2).abs() <= ANGLE_TOL
}

/// Per-qubit gate counts feeding the ordering strategies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CircuitStats {
    /// How often the qubit acts as a control of a multi-qubit controlled gate.
    pub n_ctrl: Vec<usize>,
    /// How often the qubit is touched by a parameterized gate whose angle is
    /// not an integer multiple of pi/2.
    pub n_param_gate: Vec<usize>,
    /// How often the qubit is touched by any gate.
    pub n_gates: Vec<usize>,
}

pub fn circuit_stats(c: &Circuit) -> CircuitStats {
    let n = c.num_qubits;
    let mut stats = CircuitStats {
        n_ctrl: vec![0; n],
        n_param_gate: vec![0; n],
        n_gates: vec![0; n],
    };
    for op in &c.ops {
        for q in op.qubits() {
            stats.n_gates[q] += 1;
        }
        for &q in &op.controls {
            stats.n_ctrl[q] += 1;
        }
        let effective = op.kind.is_parameterized()
            && op.params.iter().any(|&p| !is_half_pi_multiple(p));
        if effective {
            for q in op.qubits() {
                stats.n_param_gate[q] += 1;
            }
        }
    }
    stats
}
