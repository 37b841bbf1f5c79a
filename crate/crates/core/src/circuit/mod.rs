//! Gate-level representation of the walk protocols: compilation, state
//! preparation, Toffoli decomposition, coupling-map routing, OpenQASM 2.0
//! import/export and dense verification.

mod compile;
mod coupling;
mod prepare;
mod qasm;
mod route;
mod sim;
mod toffoli;

pub use compile::{
    check_protocol_equivalence, check_protocol_equivalence_with, compile_protocol, Equivalence,
    EQUIVALENCE_MAX_WIDTH,
};
pub use coupling::CouplingMap;
pub use prepare::{prepare_payload, w_first_angle, PayloadKind};
pub use qasm::{export_qasm, parse_qasm};
pub use route::{bridge_expansion, route};
pub use sim::{circuit_unitary, simulate, simulate_zero, MAX_UNITARY_QUBITS};
pub use toffoli::decompose_toffoli;

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Elementary gates. Qubit 0 is the most significant bit of a basis index.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    U3 {
        theta: f64,
        phi: f64,
        lambda: f64,
        qubit: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        control1: usize,
        control2: usize,
        target: usize,
    },
    /// Z-basis readout; ignored by the unitary simulation.
    Measure(usize),
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(control1: usize, control2: usize, target: usize) -> Gate {
        Gate::Toffoli {
            control1,
            control2,
            target,
        }
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, qubit: usize) -> Gate {
        Gate::U3 {
            theta,
            phi,
            lambda,
            qubit,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Measure(q) => vec![q],
            Gate::U3 { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => vec![control1, control2, target],
        }
    }

    /// OpenQASM mnemonic.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::U3 { .. } => "u3",
            Gate::Cnot { .. } => "cx",
            Gate::Toffoli { .. } => "ccx",
            Gate::Measure(_) => "measure",
        }
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= qubit_count {
                return Err(Error::InvalidGate(format!(
                    "{} uses qubit {q} but the circuit has {qubit_count}",
                    self.name()
                )));
            }
            if qs[..i].contains(&q) {
                return Err(Error::InvalidGate(format!(
                    "{} repeats qubit {q}",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::U3 {
                theta,
                phi,
                lambda,
                qubit,
            } => write!(f, "u3({theta},{phi},{lambda}) q[{qubit}]"),
            Gate::Measure(q) => write!(f, "measure q[{q}]"),
            g => {
                let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
                write!(f, "{} {}", g.name(), args.join(","))
            }
        }
    }
}

/// Named, contiguous span of qubits (position, coin1, coin2, ancilla…).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterSpan {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

/// Ordered gate list over `qubit_count` qubits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    registers: Vec<RegisterSpan>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit {
            qubit_count,
            gates: Vec::new(),
            registers: Vec::new(),
        }
    }

    pub fn from_gates(qubit_count: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(qubit_count);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    pub fn add_register(&mut self, name: impl Into<String>, start: usize, len: usize) -> Result<()> {
        if start + len > self.qubit_count {
            return Err(Error::InvalidGate(format!(
                "register span {start}..{} exceeds {} qubits",
                start + len,
                self.qubit_count
            )));
        }
        self.registers.push(RegisterSpan {
            name: name.into(),
            start,
            len,
        });
        Ok(())
    }

    pub fn register(&self, name: &str) -> Option<&RegisterSpan> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn registers(&self) -> &[RegisterSpan] {
        &self.registers
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Same gates on a different number of qubits.
    pub fn with_qubit_count(&self, qubit_count: usize) -> Result<Circuit> {
        let mut c = Circuit::from_gates(qubit_count, self.gates.clone())?;
        c.registers = self
            .registers
            .iter()
            .filter(|r| r.start + r.len <= qubit_count)
            .cloned()
            .collect();
        Ok(c)
    }

    /// Appends `other`, sending its qubit `i` to `mapping[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, mapping: &[usize]) -> Result<()> {
        if mapping.len() < other.qubit_count {
            return Err(Error::InvalidGate("qubit mapping too short".into()));
        }
        let m = |q: usize| mapping[q];
        for g in &other.gates {
            let mapped = match *g {
                Gate::X(q) => Gate::X(m(q)),
                Gate::H(q) => Gate::H(m(q)),
                Gate::S(q) => Gate::S(m(q)),
                Gate::Sdg(q) => Gate::Sdg(m(q)),
                Gate::Measure(q) => Gate::Measure(m(q)),
                Gate::U3 {
                    theta,
                    phi,
                    lambda,
                    qubit,
                } => Gate::u3(theta, phi, lambda, m(qubit)),
                Gate::Cnot { control, target } => Gate::cnot(m(control), m(target)),
                Gate::Toffoli {
                    control1,
                    control2,
                    target,
                } => Gate::toffoli(m(control1), m(control2), m(target)),
            };
            self.push(mapped)?;
        }
        Ok(())
    }

    /// One more than the highest qubit any gate touches (0 when empty).
    pub fn touched_width(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.qubits())
            .max()
            .map_or(0, |q| q + 1)
    }

    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.name()).or_insert(0) += 1;
        }
        m
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Toffoli { .. }))
            .count()
    }

    /// Number of layers when each gate starts as soon as all its qubits are
    /// free. Measurements are not counted.
    pub fn depth(&self) -> usize {
        let mut busy = vec![0usize; self.qubit_count];
        let mut depth = 0;
        for g in self.gates.iter().filter(|g| !matches!(g, Gate::Measure(_))) {
            let qs = g.qubits();
            let layer = qs.iter().map(|&q| busy[q]).max().unwrap_or(0) + 1;
            for q in qs {
                busy[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(3);
        assert!(c.push(Gate::cnot(0, 0)).is_err());
        assert!(c.push(Gate::toffoli(0, 1, 3)).is_err());
        assert!(c.push(Gate::toffoli(0, 1, 2)).is_ok());
        assert!(c.add_register("x", 2, 2).is_err());
    }

    #[test]
    fn depth_and_counts() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::H(0),
                Gate::X(2),
                Gate::cnot(0, 1),
                Gate::cnot(1, 2),
                Gate::Measure(2),
            ],
        )
        .unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.cnot_count(), 2);
        assert_eq!(c.gate_counts()["h"], 1);
        assert_eq!(c.touched_width(), 3);
    }

    #[test]
    fn append_mapped_relabels() {
        let bell = Circuit::from_gates(2, vec![Gate::H(0), Gate::cnot(0, 1)]).unwrap();
        let mut c = Circuit::new(5);
        c.append_mapped(&bell, &[3, 4]).unwrap();
        assert_eq!(c.gates(), &[Gate::H(3), Gate::cnot(3, 4)]);
    }
}
