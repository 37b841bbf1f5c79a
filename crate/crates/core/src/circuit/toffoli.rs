use super::{Circuit, Gate};
use std::f64::consts::FRAC_PI_4;

fn t(q: usize) -> Gate {
    Gate::u3(0.0, 0.0, FRAC_PI_4, q)
}

fn tdg(q: usize) -> Gate {
    Gate::u3(0.0, 0.0, -FRAC_PI_4, q)
}

/// Standard six-CNOT Toffoli; `T = U3(0, 0, π/4)` exactly.
fn expand(a: usize, b: usize, c: usize) -> [Gate; 15] {
    [
        Gate::H(c),
        Gate::cnot(b, c),
        tdg(c),
        Gate::cnot(a, c),
        t(c),
        Gate::cnot(b, c),
        tdg(c),
        Gate::cnot(a, c),
        t(b),
        t(c),
        Gate::H(c),
        Gate::cnot(a, b),
        t(a),
        tdg(b),
        Gate::cnot(a, b),
    ]
}

/// Replaces every Toffoli by CNOTs and single-qubit gates.
pub fn decompose_toffoli(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.gates().len());
    for g in circuit.gates() {
        match *g {
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => gates.extend(expand(control1, control2, target)),
            ref other => gates.push(other.clone()),
        }
    }
    let mut out = Circuit::from_gates(circuit.qubit_count(), gates).expect("same qubits");
    for r in circuit.registers() {
        out.add_register(r.name.clone(), r.start, r.len).expect("same span");
    }
    out
}
