use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::walk::u3_matrix;
use std::f64::consts::FRAC_1_SQRT_2;

/// Qubit limit for [`circuit_unitary`].
pub const MAX_UNITARY_QUBITS: usize = 10;

fn single_qubit_matrix(g: &Gate) -> Option<[[C64; 2]; 2]> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    Some(match *g {
        Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::S(_) => [[ONE, ZERO], [ZERO, i]],
        Gate::Sdg(_) => [[ONE, ZERO], [ZERO, -i]],
        Gate::U3 {
            theta, phi, lambda, ..
        } => u3_matrix(theta, phi, lambda),
        _ => return None,
    })
}

/// Spreads the bits of `i` over the positions not in `holes` (ascending).
#[inline]
fn insert_zeros(mut i: usize, holes: &[u32]) -> usize {
    for &h in holes {
        let low = i & ((1usize << h) - 1);
        i = ((i >> h) << (h + 1)) | low;
    }
    i
}

/// Indices with every bit of `holes` cleared, then `set` or-ed in.
fn bases(dim: usize, holes: &mut [u32], set: usize) -> impl Iterator<Item = usize> + '_ {
    holes.sort_unstable();
    let count = dim >> holes.len();
    let holes = &*holes;
    (0..count).map(move |i| insert_zeros(i, holes) | set)
}

fn apply_gate(state: &mut [C64], n: usize, g: &Gate) {
    let bit = |q: usize| (n - 1 - q) as u32;
    let dim = state.len();
    match *g {
        Gate::Measure(_) => {}
        Gate::X(q) => {
            let m = 1usize << bit(q);
            for i in bases(dim, &mut [bit(q)], 0) {
                state.swap(i, i | m);
            }
        }
        Gate::Cnot { control, target } => {
            let t = 1usize << bit(target);
            let c = 1usize << bit(control);
            for i in bases(dim, &mut [bit(control), bit(target)], c) {
                state.swap(i, i | t);
            }
        }
        Gate::Toffoli {
            control1,
            control2,
            target,
        } => {
            let t = 1usize << bit(target);
            let c = (1usize << bit(control1)) | (1usize << bit(control2));
            for i in bases(dim, &mut [bit(control1), bit(control2), bit(target)], c) {
                state.swap(i, i | t);
            }
        }
        _ => {
            let u = single_qubit_matrix(g).expect("single-qubit gate");
            let q = g.qubits()[0];
            let m = 1usize << bit(q);
            for i in bases(dim, &mut [bit(q)], 0) {
                let (a, b) = (state[i], state[i | m]);
                state[i] = u[0][0] * a + u[0][1] * b;
                state[i | m] = u[1][0] * a + u[1][1] * b;
            }
        }
    }
}

/// Runs `circuit` on `initial` (length `2^qubit_count`).
pub fn simulate(circuit: &Circuit, initial: &[C64]) -> Result<Vec<C64>> {
    let n = circuit.qubit_count();
    let dim = 1usize
        .checked_shl(n as u32)
        .filter(|_| n < usize::BITS as usize)
        .ok_or_else(|| Error::DimensionGuard {
            dim: n,
            limit: usize::BITS as usize - 1,
        })?;
    if initial.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: initial.len(),
        });
    }
    let mut state = initial.to_vec();
    for g in circuit.gates() {
        apply_gate(&mut state, n, g);
    }
    Ok(state)
}

/// Runs `circuit` on `|0…0⟩`.
pub fn simulate_zero(circuit: &Circuit) -> Result<Vec<C64>> {
    let mut init = vec![ZERO; 1usize << circuit.qubit_count()];
    init[0] = ONE;
    simulate(circuit, &init)
}

/// Dense unitary of `circuit` (measurements ignored), built column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.qubit_count();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::DimensionGuard {
            dim: n,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|c| *c = ZERO);
        col[j] = ONE;
        for g in circuit.gates() {
            apply_gate(&mut col, n, g);
        }
        u.set_column(j, &col);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_x() {
        let c = Circuit::from_gates(1, vec![Gate::X(0)]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert_eq!(u, CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]));
    }

    #[test]
    fn hadamard_squared_is_identity() {
        let c = Circuit::from_gates(1, vec![Gate::H(0), Gate::H(0)]).unwrap();
        assert!(circuit_unitary(&c).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let c = Circuit::from_gates(2, vec![Gate::X(0)]).unwrap();
        let out = simulate_zero(&c).unwrap();
        assert_eq!(out[2], ONE); // |10⟩
    }

    #[test]
    fn s_and_sdg_cancel() {
        let c = Circuit::from_gates(2, vec![Gate::S(1), Gate::H(0), Gate::Sdg(1), Gate::H(0)]).unwrap();
        assert!(circuit_unitary(&c).unwrap().max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn controlled_gates_match_index_definition() {
        let n = 4;
        let mask = |q: usize| 1usize << (n - 1 - q);
        for c1 in 0..n {
            for c2 in 0..n {
                for t in 0..n {
                    if t == c1 || t == c2 {
                        continue;
                    }
                    let (gate, ctl) = if c1 == c2 {
                        (Gate::cnot(c1, t), mask(c1))
                    } else {
                        (Gate::toffoli(c1, c2, t), mask(c1) | mask(c2))
                    };
                    let u = circuit_unitary(&Circuit::from_gates(n, vec![gate]).unwrap()).unwrap();
                    for i in 0..1 << n {
                        let j = if i & ctl == ctl { i ^ mask(t) } else { i };
                        assert_eq!(u.get(j, i), ONE);
                    }
                }
            }
        }
    }

    #[test]
    fn guard() {
        assert!(circuit_unitary(&Circuit::new(11)).is_err());
        assert!(simulate(&Circuit::new(2), &[ONE]).is_err());
    }

    #[test]
    fn measurement_is_ignored() {
        let c = Circuit::from_gates(1, vec![Gate::Measure(0)]).unwrap();
        assert_eq!(circuit_unitary(&c).unwrap(), CMatrix::identity(2));
    }
}
