// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::protocol::{build_protocol, ProtocolParams, CLBIT_CONTROL, CLBIT_TEST};
use super::ExperimentError;
use crate::circuit::{clbit_probability, evolve_exact, qubit_marginal, Circuit, InstructionKind};
use crate::qmath::DensityMatrix;

/// Record-averaged single-qubit states of both primaries after one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionStage {
    pub name: &'static str,
    pub test: DensityMatrix,
    pub control: DensityMatrix,
}

/// Outcome probabilities `(P(0), P(1))` of one final readout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub p0: f64,
    pub p1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub stages: Vec<PredictionStage>,
    pub test: Outcome,
    pub control: Outcome,
}

impl Prediction {
    pub fn stage(&self, name: &str) -> Option<&PredictionStage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

/// Stage names, in order.
pub const STAGES: [&str; 4] = ["prepared", "partial_measurement", "delay", "final_hadamard"];

/// Evolves the protocol and reports the primaries' states after each stage
/// and the final readout probabilities.
pub fn predict(params: &ProtocolParams) -> Result<Prediction, ExperimentError> {
    let circuit = build_protocol(params)?;
    let opts = params.evolve_options();
    let layout = params.layout();

    let ins = &circuit.instructions;
    let first = |kind: InstructionKind| ins.iter().position(|i| i.kind() == kind);
    let after_last = |kind: InstructionKind| ins.iter().rposition(|i| i.kind() == kind).map(|k| k + 1);
    let ends = [
        first(InstructionKind::Cry),
        after_last(InstructionKind::ConditionalX),
        after_last(InstructionKind::Delay),
        Some(ins.len() - 2),
    ];

    let mut stages = Vec::with_capacity(STAGES.len());
    for (name, end) in STAGES.iter().zip(ends) {
        let end = end.expect("protocol contains every stage");
        let prefix = Circuit {
            instructions: circuit.instructions[..end].to_vec(),
            ..circuit.clone()
        };
        let branches = evolve_exact(&prefix, &opts)?;
        stages.push(PredictionStage {
            name,
            test: qubit_marginal(&branches, layout.test)?,
            control: qubit_marginal(&branches, layout.control)?,
        });
    }

    let branches = evolve_exact(&circuit, &opts)?;
    let outcome = |clbit| {
        let p1 = clbit_probability(&branches, clbit).clamp(0.0, 1.0);
        Outcome { p0: 1.0 - p1, p1 }
    };
    Ok(Prediction {
        stages,
        test: outcome(CLBIT_TEST),
        control: outcome(CLBIT_CONTROL),
    })
}
