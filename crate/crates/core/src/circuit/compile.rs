//! Binary-encoded compilation of walk schedules.
//!
//! Qubit order: position bits, coin-1 bits, coin-2 bits (each most
//! significant first), then the ancilla span used by multi-controlled X.

use super::{simulate, Circuit, Gate, MAX_UNITARY_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{phase_distance, CMatrix, C64, ONE, ZERO};
use crate::par::Exec;
use crate::protocols::Schedule;
use crate::walk::{self, Coin, CoinOperator, ShiftKind};

fn log2_exact(d: usize, what: &str) -> Result<usize> {
    if d.is_power_of_two() {
        Ok(d.trailing_zeros() as usize)
    } else {
        Err(Error::Unsupported(format!(
            "{what} dimension {d} is not a power of two"
        )))
    }
}

struct Builder {
    gates: Vec<Gate>,
    ancilla_start: usize,
    ancillas_used: usize,
}

impl Builder {
    /// Multi-controlled X; three or more controls use a Toffoli V-chain
    /// over `controls − 2` clean ancillas.
    fn mcx(&mut self, controls: &[usize], target: usize) {
        match controls.len() {
            0 => self.gates.push(Gate::X(target)),
            1 => self.gates.push(Gate::cnot(controls[0], target)),
            2 => self.gates.push(Gate::toffoli(controls[0], controls[1], target)),
            m => {
                self.ancillas_used = self.ancillas_used.max(m - 2);
                let a = |i: usize| self.ancilla_start + i;
                let mut compute = vec![Gate::toffoli(controls[0], controls[1], a(0))];
                for i in 2..m - 1 {
                    compute.push(Gate::toffoli(controls[i], a(i - 2), a(i - 1)));
                }
                self.gates.extend(compute.iter().cloned());
                self.gates.push(Gate::toffoli(controls[m - 1], a(m - 3), target));
                self.gates.extend(compute.into_iter().rev());
            }
        }
    }

    /// `bits += 1 mod 2^len` (bits most significant first), under `controls`.
    fn increment(&mut self, bits: &[usize], controls: &[usize]) {
        for i in 0..bits.len() {
            let mut ctl = controls.to_vec();
            ctl.extend_from_slice(&bits[i + 1..]);
            self.mcx(&ctl, bits[i]);
        }
    }

    /// Inverse of [`Builder::increment`]: the same self-inverse gates reversed.
    fn decrement(&mut self, bits: &[usize], controls: &[usize]) {
        let start = self.gates.len();
        self.increment(bits, controls);
        self.gates[start..].reverse();
    }

    fn coin_op(&mut self, op: &CoinOperator, bits: &[usize]) -> Result<()> {
        match op {
            CoinOperator::Identity(_) => {}
            CoinOperator::PauliX | CoinOperator::GeneralizedX(_) => self.increment(bits, &[]),
            CoinOperator::U3 { theta, phi, lambda } => {
                self.gates.push(Gate::u3(*theta, *phi, *lambda, bits[0]))
            }
            CoinOperator::Matrix(m) if m.dim() == 2 => {
                let (t, p, l) = u3_angles(m);
                self.gates.push(Gate::u3(t, p, l, bits[0]));
            }
            CoinOperator::Matrix(m) => {
                return Err(Error::Unsupported(format!(
                    "explicit {0}×{0} coin matrices are not compiled",
                    m.dim()
                )))
            }
        }
        Ok(())
    }
}

/// Angles `(θ, φ, λ)` with `m = e^{iα} U3(θ, φ, λ)` for a 2×2 unitary.
pub(crate) fn u3_angles(m: &CMatrix) -> (f64, f64, f64) {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let theta = 2.0 * c.norm().atan2(a.norm());
    const EPS: f64 = 1e-12;
    if c.norm() < EPS {
        let alpha = a.arg();
        (theta, 0.0, d.arg() - alpha)
    } else if a.norm() < EPS {
        let alpha = c.arg();
        (theta, 0.0, (-b).arg() - alpha)
    } else {
        let alpha = a.arg();
        (theta, c.arg() - alpha, (-b).arg() - alpha)
    }
}

/// Compiles `schedule` to elementary gates plus Toffolis.
///
/// Every step emits its coin subcircuit followed by the shift it controls;
/// recovery operators follow the last step. All register dimensions must be
/// powers of two.
pub fn compile_protocol(schedule: &Schedule) -> Result<Circuit> {
    let layout = schedule.layout();
    let kp = log2_exact(layout.position_dim(), "position")?;
    let k1 = log2_exact(layout.coin1_dim(), "coin 1")?;
    let k2 = log2_exact(layout.coin2_dim(), "coin 2")?;
    let data = kp + k1 + k2;
    let pos: Vec<usize> = (0..kp).collect();
    let coin1: Vec<usize> = (kp..kp + k1).collect();
    let coin2: Vec<usize> = (kp + k1..data).collect();
    let bits_of = |c: Coin| match c {
        Coin::First => &coin1,
        Coin::Second => &coin2,
    };
    let mut b = Builder {
        gates: Vec::new(),
        ancilla_start: data,
        ancillas_used: 0,
    };
    for s in schedule.steps() {
        let cbits = bits_of(s.coin);
        b.coin_op(&s.operator, cbits)?;
        match schedule.shift() {
            ShiftKind::Complete => {
                // coin bit of weight 2^j adds 2^j: increment the top kp − j bits
                for (i, &c) in cbits.iter().enumerate() {
                    let j = cbits.len() - 1 - i;
                    b.increment(&pos[..kp - j], &[c]);
                }
            }
            ShiftKind::Cycle => {
                let c = cbits[0];
                b.gates.push(Gate::X(c));
                b.increment(&pos, &[c]);
                b.gates.push(Gate::X(c));
                b.decrement(&pos, &[c]);
            }
        }
    }
    for r in schedule.recovery() {
        b.coin_op(&r.operator, bits_of(r.coin))?;
    }
    let total = data + b.ancillas_used;
    let mut circuit = Circuit::from_gates(total, b.gates)?;
    circuit.add_register("position", 0, kp)?;
    circuit.add_register("coin1", kp, k1)?;
    circuit.add_register("coin2", kp + k1, k2)?;
    if b.ancillas_used > 0 {
        circuit.add_register("ancilla", data, b.ancillas_used)?;
    }
    Ok(circuit)
}

/// Outcome of comparing a circuit with a schedule's dense unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    /// Phase-insensitive distance between the data block and the oracle.
    pub phase_distance: f64,
    /// Largest amplitude left on a nonzero ancilla pattern.
    pub ancilla_leakage: f64,
    pub data_qubits: usize,
    pub ancilla_qubits: usize,
}

impl Equivalence {
    pub fn passes(&self, tol: f64) -> bool {
        self.phase_distance <= tol && self.ancilla_leakage <= tol
    }
}

/// Widest circuit [`check_protocol_equivalence`] simulates. Only the
/// ancilla-free columns are run, so this may exceed [`MAX_UNITARY_QUBITS`].
pub const EQUIVALENCE_MAX_WIDTH: usize = 16;

/// Checks `circuit` against `unitary_of(schedule)`.
///
/// The leading qubits encode the walk; every further qubit the circuit
/// touches is treated as an ancilla that starts in `|0⟩` and must return to
/// it. The walk may use at most [`MAX_UNITARY_QUBITS`] qubits and the circuit
/// at most [`EQUIVALENCE_MAX_WIDTH`].
pub fn check_protocol_equivalence(circuit: &Circuit, schedule: &Schedule) -> Result<Equivalence> {
    check_protocol_equivalence_with(circuit, schedule, Exec::default())
}

/// [`check_protocol_equivalence`] with explicit execution mode.
pub fn check_protocol_equivalence_with(
    circuit: &Circuit,
    schedule: &Schedule,
    exec: Exec,
) -> Result<Equivalence> {
    let layout = schedule.layout();
    let dim = layout.total_dim();
    let data = log2_exact(layout.position_dim(), "position")?
        + log2_exact(layout.coin1_dim(), "coin 1")?
        + log2_exact(layout.coin2_dim(), "coin 2")?;
    if data > MAX_UNITARY_QUBITS {
        return Err(Error::DimensionGuard {
            dim: data,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let width = circuit.touched_width().max(data);
    if width > EQUIVALENCE_MAX_WIDTH {
        return Err(Error::DimensionGuard {
            dim: width,
            limit: EQUIVALENCE_MAX_WIDTH,
        });
    }
    let narrowed = circuit.with_qubit_count(width)?;
    let anc = width - data;
    let oracle = walk::unitary_of(schedule)?;
    let columns = exec.map_range(0..dim, |j| -> Result<(Vec<C64>, f64)> {
        let mut init = vec![ZERO; 1 << width];
        init[j << anc] = ONE;
        let out = simulate(&narrowed, &init)?;
        let mut col = Vec::with_capacity(dim);
        let mut leak = 0f64;
        for (k, a) in out.into_iter().enumerate() {
            if k & ((1 << anc) - 1) == 0 {
                col.push(a);
            } else {
                leak = leak.max(a.norm());
            }
        }
        Ok((col, leak))
    });
    let mut got = CMatrix::zeros(dim);
    let mut leakage = 0f64;
    for (j, c) in columns.into_iter().enumerate() {
        let (col, leak) = c?;
        got.set_column(j, &col);
        leakage = leakage.max(leak);
    }
    Ok(Equivalence {
        phase_distance: phase_distance(got.entries(), oracle.entries()),
        ancilla_leakage: leakage,
        data_qubits: data,
        ancilla_qubits: anc,
    })
}
