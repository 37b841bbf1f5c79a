use super::{Circuit, CouplingMap, Gate};
use crate::error::{Error, Result};

fn push_cnot(control: usize, target: usize, map: &CouplingMap, out: &mut Vec<Gate>) -> Result<()> {
    if map.allows(control, target) {
        out.push(Gate::cnot(control, target));
        return Ok(());
    }
    if map.allows(target, control) {
        // C_{c,t} = (H⊗H) C_{t,c} (H⊗H)
        out.extend([Gate::H(control), Gate::H(target)]);
        out.push(Gate::cnot(target, control));
        out.extend([Gate::H(control), Gate::H(target)]);
        return Ok(());
    }
    let path = map
        .shortest_path(control, target)
        .ok_or(Error::Disconnected(control, target))?;
    if path.len() < 3 {
        // adjacent only in an orientation not listed: cannot happen for an
        // undirected path of length 1, both orientations were checked above
        return Err(Error::Disconnected(control, target));
    }
    // C_{c,t} = C_{c,j} C_{j,t} C_{c,j} C_{j,t}, j at the middle of the path
    let j = path[(path.len() - 1) / 2];
    for _ in 0..2 {
        push_cnot(control, j, map, out)?;
        push_cnot(j, target, map, out)?;
    }
    Ok(())
}

/// Rewrites every CNOT into CNOTs native to `map`: reversed pairs by
/// Hadamard conjugation, distant pairs by recursive four-CNOT bridging along
/// the lexicographically smallest shortest path. The output acts on
/// `max(circuit, map)` qubits.
pub fn route(circuit: &Circuit, map: &CouplingMap) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.gates().len());
    for g in circuit.gates() {
        match *g {
            Gate::Toffoli { .. } => {
                return Err(Error::InvalidGate(
                    "route needs a Toffoli-free circuit; decompose first".into(),
                ))
            }
            Gate::Cnot { control, target } => {
                if control >= map.qubit_count() || target >= map.qubit_count() {
                    return Err(Error::Disconnected(control, target));
                }
                push_cnot(control, target, map, &mut gates)?;
            }
            ref other => gates.push(other.clone()),
        }
    }
    let mut out = Circuit::from_gates(circuit.qubit_count().max(map.qubit_count()), gates)?;
    for r in circuit.registers() {
        out.add_register(r.name.clone(), r.start, r.len)?;
    }
    Ok(out)
}

/// The two-level expansion of `C_{5,1}` written out for the 14-qubit
/// Melbourne-style connectivity: bridge through 3, then bridge `C_{5,3}`
/// through 4 and realize `C_{3,1}` as a Hadamard-conjugated `C_{1,3}` that is
/// itself bridged through 2.
pub fn bridge_expansion() -> Circuit {
    fn hh(a: usize, b: usize) -> [Gate; 2] {
        [Gate::H(a), Gate::H(b)]
    }
    fn c53() -> Vec<Gate> {
        vec![Gate::cnot(5, 4), Gate::cnot(4, 3), Gate::cnot(5, 4), Gate::cnot(4, 3)]
    }
    fn c31() -> Vec<Gate> {
        let mut g = hh(1, 3).to_vec();
        g.extend([Gate::cnot(1, 2), Gate::cnot(2, 3), Gate::cnot(1, 2), Gate::cnot(2, 3)]);
        g.extend(hh(1, 3));
        g
    }
    let mut gates = Vec::new();
    for _ in 0..2 {
        gates.extend(c53());
        gates.extend(c31());
    }
    Circuit::from_gates(6, gates).expect("valid expansion")
}

#[cfg(test)]
mod tests {
    use super::super::circuit_unitary;
    use super::*;

    #[test]
    fn native_cnot_untouched() {
        let c = Circuit::from_gates(3, vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(route(&c, &CouplingMap::line(3)).unwrap().gates(), c.gates());
    }

    #[test]
    fn reversed_cnot_uses_hadamards() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(1, 0)]).unwrap();
        let r = route(&c, &CouplingMap::line(2)).unwrap();
        assert_eq!(r.cnot_count(), 1);
        assert_eq!(r.gate_counts()["h"], 4);
        assert!(circuit_unitary(&r).unwrap().max_abs_diff(&circuit_unitary(&c).unwrap()) < 1e-12);
    }

    #[test]
    fn distant_cnot_bridges() {
        let c = Circuit::from_gates(3, vec![Gate::cnot(0, 2)]).unwrap();
        let r = route(&c, &CouplingMap::line(3)).unwrap();
        assert_eq!(r.cnot_count(), 4);
        assert!(circuit_unitary(&r).unwrap().max_abs_diff(&circuit_unitary(&c).unwrap()) < 1e-12);
    }

    #[test]
    fn errors() {
        let tof = Circuit::from_gates(3, vec![Gate::toffoli(0, 1, 2)]).unwrap();
        assert!(route(&tof, &CouplingMap::line(3)).is_err());
        let c = Circuit::from_gates(4, vec![Gate::cnot(0, 3)]).unwrap();
        let split = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(route(&c, &split), Err(Error::Disconnected(0, 3)));
        assert!(route(&c, &CouplingMap::line(3)).is_err());
    }
}
