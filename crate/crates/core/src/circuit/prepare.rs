use super::{Circuit, Gate};
use std::f64::consts::FRAC_PI_4;

/// Payloads with a preparation circuit from `|0…0⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PayloadKind {
    /// `U3(θ, φ, λ)|0⟩ = cos θ/2 |0⟩ + e^{iφ} sin θ/2 |1⟩`.
    Single { theta: f64, phi: f64, lambda: f64 },
    Bell,
    Ghz,
    W,
}

/// Rotation angle putting weight 1/3 on `|0⟩`: `2 arccos(1/√3) ≈ 1.9106`.
pub fn w_first_angle() -> f64 {
    2.0 * (1.0 / 3f64.sqrt()).acos()
}

pub fn prepare_payload(kind: PayloadKind) -> Circuit {
    let (n, gates) = match kind {
        PayloadKind::Single { theta, phi, lambda } => (1, vec![Gate::u3(theta, phi, lambda, 0)]),
        PayloadKind::Bell => (2, vec![Gate::H(0), Gate::cnot(0, 1)]),
        PayloadKind::Ghz => (3, vec![Gate::H(0), Gate::cnot(0, 1), Gate::cnot(1, 2)]),
        PayloadKind::W => (
            3,
            vec![
                // (|0⟩ + √2|1⟩)/√3 on qubit 0
                Gate::u3(w_first_angle(), 0.0, 0.0, 0),
                // controlled RY(π/2): qubit 1 splits the |1⟩ branch evenly
                Gate::u3(FRAC_PI_4, 0.0, 0.0, 1),
                Gate::cnot(0, 1),
                Gate::u3(FRAC_PI_4, std::f64::consts::PI, std::f64::consts::PI, 1),
                Gate::cnot(0, 1),
                // |000⟩ + |100⟩ + |110⟩ → |100⟩ + |010⟩ + |001⟩
                Gate::cnot(1, 2),
                Gate::cnot(0, 1),
                Gate::X(0),
            ],
        ),
    };
    Circuit::from_gates(n, gates).expect("fixed preparation circuits are valid")
}
