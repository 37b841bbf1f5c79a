//! OpenQASM 2.0 for the gate subset {u3, x, h, s, sdg, cx, ccx, measure}.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Serializes `circuit`; a `creg` is declared only when it measures.
pub fn export_qasm(circuit: &Circuit) -> String {
    let n = circuit.qubit_count();
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{n}];\n"));
    if circuit.gates().iter().any(|g| matches!(g, Gate::Measure(_))) {
        out.push_str(&format!("creg c[{n}];\n"));
    }
    for g in circuit.gates() {
        let line = match *g {
            Gate::Measure(q) => format!("measure q[{q}] -> c[{q}];"),
            Gate::U3 {
                theta,
                phi,
                lambda,
                qubit,
            } => format!("u3({theta:?},{phi:?},{lambda:?}) q[{qubit}];"),
            ref g => {
                let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
                format!("{} {};", g.name(), args.join(","))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the subset written by [`export_qasm`]. Parameters may use `pi`,
/// `+ - * /` and parentheses; `barrier` and comments are skipped.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<(String, Circuit)> = None;
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        for stmt in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if stmt.starts_with("OPENQASM") {
                if stmt.split_whitespace().nth(1) != Some("2.0") {
                    return Err(perr(line_no, "only OPENQASM 2.0 is supported"));
                }
                saw_header = true;
                continue;
            }
            if !saw_header {
                return Err(perr(line_no, "missing OPENQASM 2.0 header"));
            }
            if stmt.starts_with("include") || stmt.starts_with("creg") || stmt.starts_with("barrier") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                if circuit.is_some() {
                    return Err(perr(line_no, "only one qreg is supported"));
                }
                let (name, size) = parse_indexed(rest.trim(), line_no)?;
                circuit = Some((name, Circuit::new(size)));
                continue;
            }
            let (reg, c) = circuit
                .as_mut()
                .ok_or_else(|| perr(line_no, "gate before qreg declaration"))?;
            let gate = parse_gate(stmt, reg, line_no)?;
            c.push(gate).map_err(|e| perr(line_no, e.to_string()))?;
        }
    }
    circuit
        .map(|(_, c)| c)
        .ok_or_else(|| perr(text.lines().count().max(1), "no qreg declared"))
}

fn parse_indexed(s: &str, line: usize) -> Result<(String, usize)> {
    let open = s.find('[').ok_or_else(|| perr(line, format!("expected name[index], got '{s}'")))?;
    let close = s.rfind(']').ok_or_else(|| perr(line, format!("missing ']' in '{s}'")))?;
    let index = s[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| perr(line, format!("bad index in '{s}'")))?;
    Ok((s[..open].trim().to_string(), index))
}

fn parse_gate(stmt: &str, reg: &str, line: usize) -> Result<Gate> {
    let qubit = |arg: &str| -> Result<usize> {
        let (name, idx) = parse_indexed(arg.trim(), line)?;
        if name != reg {
            return Err(perr(line, format!("unknown register '{name}'")));
        }
        Ok(idx)
    };
    if let Some(rest) = stmt.strip_prefix("measure") {
        let target = rest.split("->").next().unwrap_or("");
        return Ok(Gate::Measure(qubit(target)?));
    }
    let (head, args) = match stmt.find(')') {
        Some(close) if stmt.contains('(') => (&stmt[..=close], &stmt[close + 1..]),
        _ => stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| perr(line, format!("cannot parse '{stmt}'")))?,
    };
    let (name, params) = match head.find('(') {
        Some(open) => {
            let inner = &head[open + 1..head.len() - 1];
            let params = inner
                .split(',')
                .map(|p| eval_expr(p, line))
                .collect::<Result<Vec<f64>>>()?;
            (head[..open].trim(), params)
        }
        None => (head.trim(), vec![]),
    };
    let qs = args
        .split(',')
        .map(qubit)
        .collect::<Result<Vec<usize>>>()?;
    let arity = |n: usize, p: usize| -> Result<()> {
        if qs.len() != n || params.len() != p {
            return Err(perr(
                line,
                format!("'{name}' takes {p} parameters and {n} qubits"),
            ));
        }
        Ok(())
    };
    Ok(match name {
        "x" => {
            arity(1, 0)?;
            Gate::X(qs[0])
        }
        "h" => {
            arity(1, 0)?;
            Gate::H(qs[0])
        }
        "s" => {
            arity(1, 0)?;
            Gate::S(qs[0])
        }
        "sdg" => {
            arity(1, 0)?;
            Gate::Sdg(qs[0])
        }
        "u3" | "U" => {
            arity(1, 3)?;
            Gate::u3(params[0], params[1], params[2], qs[0])
        }
        "cx" | "CX" => {
            arity(2, 0)?;
            Gate::cnot(qs[0], qs[1])
        }
        "ccx" => {
            arity(3, 0)?;
            Gate::toffoli(qs[0], qs[1], qs[2])
        }
        other => return Err(perr(line, format!("unsupported gate '{other}'"))),
    })
}

/// Recursive-descent evaluation of a parameter expression.
fn eval_expr(src: &str, line: usize) -> Result<f64> {
    struct P<'a> {
        s: &'a [u8],
        i: usize,
        line: usize,
    }
    impl P<'_> {
        fn ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.ws();
            self.s.get(self.i).copied()
        }
        fn expr(&mut self) -> Result<f64> {
            let mut v = self.term()?;
            while let Some(op @ (b'+' | b'-')) = self.peek() {
                self.i += 1;
                let r = self.term()?;
                v = if op == b'+' { v + r } else { v - r };
            }
            Ok(v)
        }
        fn term(&mut self) -> Result<f64> {
            let mut v = self.unary()?;
            while let Some(op @ (b'*' | b'/')) = self.peek() {
                self.i += 1;
                let r = self.unary()?;
                v = if op == b'*' { v * r } else { v / r };
            }
            Ok(v)
        }
        fn unary(&mut self) -> Result<f64> {
            match self.peek() {
                Some(b'-') => {
                    self.i += 1;
                    Ok(-self.unary()?)
                }
                Some(b'+') => {
                    self.i += 1;
                    self.unary()
                }
                _ => self.atom(),
            }
        }
        fn atom(&mut self) -> Result<f64> {
            match self.peek() {
                Some(b'(') => {
                    self.i += 1;
                    let v = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(perr(self.line, "unbalanced parenthesis"));
                    }
                    self.i += 1;
                    Ok(v)
                }
                Some(b'p') if self.s[self.i..].starts_with(b"pi") => {
                    self.i += 2;
                    Ok(std::f64::consts::PI)
                }
                Some(_) => {
                    let start = self.i;
                    while self.i < self.s.len() {
                        let c = self.s[self.i];
                        let exp_sign = (c == b'-' || c == b'+')
                            && self.i > start
                            && matches!(self.s[self.i - 1], b'e' | b'E');
                        if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                            self.i += 1;
                        } else {
                            break;
                        }
                    }
                    let tok = std::str::from_utf8(&self.s[start..self.i]).unwrap_or("");
                    tok.parse()
                        .map_err(|_| perr(self.line, format!("bad number '{tok}'")))
                }
                None => Err(perr(self.line, "empty expression")),
            }
        }
    }
    let mut p = P {
        s: src.as_bytes(),
        i: 0,
        line,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(perr(line, format!("trailing input in '{}'", src.trim())));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_circuit_export() {
        assert_eq!(
            export_qasm(&Circuit::new(3)),
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n"
        );
    }

    #[test]
    fn expressions() {
        assert_eq!(eval_expr("pi/2", 1).unwrap(), PI / 2.0);
        assert_eq!(eval_expr("-(1+2)*3", 1).unwrap(), -9.0);
        assert_eq!(eval_expr("1e-3", 1).unwrap(), 1e-3);
        assert_eq!(eval_expr("2*pi/3", 1).unwrap(), 2.0 * PI / 3.0);
        assert!(eval_expr("1+", 1).is_err());
        assert!(eval_expr("(1", 1).is_err());
    }

    #[test]
    fn parses_handwritten_file() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n// prep\nqreg q[3];\ncreg c[3];\n\
                   u3(2*pi/3,0,pi/2) q[0];\ncx q[0],q[1]; ccx q[0],q[1],q[2];\nbarrier q[0],q[1];\n\
                   measure q[2] -> c[2];\n";
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.qubit_count(), 3);
        assert_eq!(c.gates().len(), 4);
        assert_eq!(c.gates()[0], Gate::u3(2.0 * PI / 3.0, 0.0, PI / 2.0, 0));
        assert_eq!(c.gates()[3], Gate::Measure(2));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[5];\n";
        assert!(matches!(parse_qasm(bad), Err(Error::Parse { line: 3, .. })));
        let bad = "OPENQASM 2.0;\nqreg q[2];\n\nrz(0.1) q[0];\n";
        assert!(matches!(parse_qasm(bad), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_qasm("qreg q[1];"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_qasm("OPENQASM 3.0;").is_err());
    }

    #[test]
    fn measurement_declares_creg() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Measure(0)]).unwrap();
        let text = export_qasm(&c);
        assert!(text.contains("creg c[2];"));
        assert_eq!(parse_qasm(&text).unwrap(), c);
    }
}
