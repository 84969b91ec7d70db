// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::instruction::{Circuit, Instruction};
use super::validate::validate;
use super::CircuitError;

/// OpenQASM 3 program for `circuit`. Angles and durations use the shortest
/// text that parses back to the same `f64`, so emission is byte-stable.
pub fn export_qasm3(circuit: &Circuit) -> Result<String, CircuitError> {
    validate(circuit).map_err(CircuitError::Invalid)?;
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    for (q, role) in &circuit.qubit_roles {
        let _ = writeln!(out, "// q[{q}]: {}", role.as_str());
    }
    let _ = writeln!(out, "qubit[{}] q;", circuit.num_qubits);
    if circuit.num_clbits > 0 {
        let _ = writeln!(out, "bit[{}] c;", circuit.num_clbits);
    }
    for ins in &circuit.instructions {
        match ins {
            Instruction::X { qubit } => writeln!(out, "x q[{qubit}];"),
            Instruction::H { qubit } => writeln!(out, "h q[{qubit}];"),
            Instruction::Ry { qubit, theta } => writeln!(out, "ry({theta:?}) q[{qubit}];"),
            Instruction::Cry {
                control,
                target,
                theta,
            } => writeln!(out, "cry({theta:?}) q[{control}], q[{target}];"),
            Instruction::Measure { qubit, clbit } => writeln!(out, "c[{clbit}] = measure q[{qubit}];"),
            Instruction::ConditionalX { qubit, condition } => writeln!(
                out,
                "if (c[{}] == {}) {{\n    x q[{qubit}];\n}}",
                condition.clbit, condition.value
            ),
            Instruction::Delay { qubits, duration } => {
                let targets: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
                writeln!(out, "delay[{duration:?}us] {};", targets.join(", "))
            }
        }
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_x() {
        let mut c = Circuit::new(1, 0);
        c.x(0);
        let text = export_qasm3(&c).unwrap();
        assert!(text.starts_with("OPENQASM 3.0;\n"));
        assert!(text.contains("qubit[1] q;\n"));
        assert!(text.contains("\nx q[0];\n"));
        assert!(!text.contains("\nbit["));
    }

    #[test]
    fn conditional_guards_flip() {
        let mut c = Circuit::new(4, 1);
        c.measure(1, 0).conditional_x(3, 0, 1);
        let text = export_qasm3(&c).unwrap();
        assert!(text.contains("c[0] = measure q[1];\nif (c[0] == 1) {\n    x q[3];\n}\n"));
    }

    #[test]
    fn delay_and_angles_round_trip_text() {
        let mut c = Circuit::new(2, 0);
        c.cry(0, 1, std::f64::consts::FRAC_PI_4).delay(vec![0, 1], 50.0);
        let text = export_qasm3(&c).unwrap();
        assert!(text.contains("cry(0.7853981633974483) q[0], q[1];"));
        assert!(text.contains("delay[50.0us] q[0], q[1];"));
    }

    #[test]
    fn invalid_circuit_is_not_emitted() {
        let mut c = Circuit::new(1, 0);
        c.h(4);
        assert!(export_qasm3(&c).is_err());
    }
}
