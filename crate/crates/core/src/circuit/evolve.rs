// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact density-matrix evolution with classical branching.
//!
//! A mid-circuit `Measure` splits every branch into one branch per outcome,
//! weighted by its Born probability and carrying the classical record. The
//! list of branches is therefore the proper mixture an observer holding the
//! record would assign; summing the branches without looking at the record
//! gives back the improper mixture of the unmeasured qubits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::instruction::{Circuit, Instruction};
use super::validate::validate;
use super::CircuitError;
use crate::collapse::or_factor;
use crate::counts::Calibration;
use crate::gravity::OrSettings;
use crate::qmath::{
    apply_gate, dephase, gate_cry, gate_h, gate_ry, gate_x, idle, ChannelMode, ComplexMatrix,
    DensityMatrix, NoiseParams, QmathError,
};

/// Branches lighter than this are dropped after a measurement.
pub const BRANCH_PRUNE: f64 = 1e-14;

/// Per-qubit relaxation times; qubits without an entry (and no default)
/// idle without noise.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<NoiseParams>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_qubit: BTreeMap<usize, NoiseParams>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel::default()
    }

    pub fn uniform(params: NoiseParams) -> Self {
        NoiseModel {
            default: Some(params),
            per_qubit: BTreeMap::new(),
        }
    }

    pub fn for_qubit(&self, qubit: usize) -> Option<NoiseParams> {
        self.per_qubit.get(&qubit).copied().or(self.default)
    }

    /// Overrides per-qubit entries with a calibration snapshot.
    pub fn with_calibration(mut self, calibration: &BTreeMap<usize, Calibration>) -> Result<Self, QmathError> {
        for (&q, cal) in calibration {
            self.per_qubit.insert(q, NoiseParams::new(cal.t1_us, cal.t2_us)?);
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvolveOptions {
    pub noise: NoiseModel,
    pub mode: ChannelMode,
    /// Collapse channel applied during delays to coupled qubits of armed
    /// branches.
    pub or: Option<OrSettings>,
    /// When set, measuring the target of a CRY replaces the coherence
    /// magnitude of that CRY's control with this value (populations and
    /// phase taken from the state just before the measurement).
    pub coherence_injection: Option<f64>,
}

/// One classical outcome history and the quantum state conditioned on it.
///
/// `rho` spans every qubit of the circuit; measured qubits sit in the basis
/// state they were projected onto.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchState {
    pub record: Vec<u8>,
    pub probability: f64,
    pub rho: DensityMatrix,
    /// Set once a conditional flip has fired in this branch.
    pub gravity_armed: bool,
}

impl BranchState {
    /// Record as a bitstring with `c[0]` rightmost.
    pub fn record_key(&self) -> String {
        record_key(&self.record)
    }
}

pub(crate) fn record_key(record: &[u8]) -> String {
    record
        .iter()
        .rev()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect()
}

/// Simulates `circuit` instruction by instruction from `|0…0⟩`.
pub fn evolve_exact(circuit: &Circuit, opts: &EvolveOptions) -> Result<Vec<BranchState>, CircuitError> {
    validate(circuit).map_err(CircuitError::Invalid)?;
    if let Some(c) = opts.coherence_injection {
        if !(0.0..=0.5).contains(&c) {
            return Err(CircuitError::Injection(format!(
                "coherence injection {c} outside [0, 0.5]"
            )));
        }
    }
    for q in 0..circuit.num_qubits {
        if let Some(n) = opts.noise.for_qubit(q) {
            NoiseParams::new(n.t1, n.t2)?;
        }
    }

    let mut branches = vec![BranchState {
        record: vec![0; circuit.num_clbits],
        probability: 1.0,
        rho: DensityMatrix::basis(circuit.num_qubits, 0),
        gravity_armed: false,
    }];
    // latest CRY control per target qubit, for coherence injection
    let mut cry_partner: BTreeMap<usize, usize> = BTreeMap::new();

    for ins in &circuit.instructions {
        match ins {
            Instruction::X { qubit } => gate_all(&mut branches, &gate_x(), &[*qubit])?,
            Instruction::H { qubit } => gate_all(&mut branches, &gate_h(), &[*qubit])?,
            Instruction::Ry { qubit, theta } => gate_all(&mut branches, &gate_ry(*theta), &[*qubit])?,
            Instruction::Cry {
                control,
                target,
                theta,
            } => {
                gate_all(&mut branches, &gate_cry(*theta), &[*control, *target])?;
                cry_partner.insert(*target, *control);
            }
            Instruction::Measure { qubit, clbit } => {
                let partner = opts
                    .coherence_injection
                    .and_then(|c| cry_partner.get(qubit).map(|&p| (p, c)));
                branches = measure_all(branches, *qubit, *clbit, partner)?;
            }
            Instruction::ConditionalX { qubit, condition } => {
                let x = gate_x();
                for b in branches.iter_mut() {
                    if b.record[condition.clbit] == condition.value {
                        b.rho = apply_gate(&b.rho, &x, &[*qubit])?;
                        b.gravity_armed = true;
                    }
                }
            }
            Instruction::Delay { qubits, duration } => {
                delay_all(&mut branches, qubits, *duration, opts)?;
            }
        }
    }
    Ok(branches)
}

fn gate_all(branches: &mut [BranchState], u: &ComplexMatrix, targets: &[usize]) -> Result<(), CircuitError> {
    for b in branches.iter_mut() {
        b.rho = apply_gate(&b.rho, u, targets)?;
    }
    Ok(())
}

fn measure_all(
    branches: Vec<BranchState>,
    qubit: usize,
    clbit: usize,
    injection: Option<(usize, f64)>,
) -> Result<Vec<BranchState>, CircuitError> {
    let mut out = Vec::with_capacity(branches.len() * 2);
    for b in branches {
        let injected = match injection {
            Some((partner, magnitude)) => Some((partner, injected_state(&b.rho, partner, magnitude)?)),
            None => None,
        };
        for outcome in 0..2u8 {
            let (p, post) = b.rho.project(qubit, outcome);
            let prob = b.probability * p;
            let Some(mut rho) = post else { continue };
            if prob < BRANCH_PRUNE {
                continue;
            }
            if let Some((partner, sigma)) = &injected {
                rho = rho.replace_qubit(*partner, sigma)?;
            }
            let mut record = b.record.clone();
            record[clbit] = outcome;
            out.push(BranchState {
                record,
                probability: prob,
                rho,
                gravity_armed: b.gravity_armed,
            });
        }
    }
    Ok(out)
}

/// `[[p0, c·e^{iφ}], [c·e^{-iφ}, p1]]` from the partner's current marginal.
fn injected_state(rho: &DensityMatrix, partner: usize, magnitude: f64) -> Result<DensityMatrix, CircuitError> {
    let m = rho.reduce(&[partner])?;
    let (p0, p1) = (m.get(0, 0).re, m.get(1, 1).re);
    let coh = m.get(0, 1);
    let phase = if coh.norm() > 0.0 {
        coh / coh.norm()
    } else {
        num_complex::Complex64::new(1.0, 0.0)
    };
    if magnitude * magnitude > p0 * p1 + 1e-12 {
        return Err(CircuitError::Injection(format!(
            "coherence {magnitude} impossible with populations ({p0}, {p1})"
        )));
    }
    let c = phase * magnitude;
    let sigma = ComplexMatrix::from_row_major(&[m.get(0, 0), c, c.conj(), m.get(1, 1)]);
    Ok(DensityMatrix::new(sigma)?)
}

fn delay_all(
    branches: &mut [BranchState],
    qubits: &[usize],
    duration: f64,
    opts: &EvolveOptions,
) -> Result<(), CircuitError> {
    let coupled: BTreeSet<usize> = opts
        .or
        .as_ref()
        .map(|o| o.coupled_qubits.iter().copied().collect())
        .unwrap_or_default();
    for b in branches.iter_mut() {
        for &q in qubits {
            if let Some(noise) = opts.noise.for_qubit(q) {
                b.rho = idle(&b.rho, q, duration, &noise, opts.mode)?;
            }
        }
        if let (Some(or), true) = (&opts.or, b.gravity_armed) {
            let factor = or_factor(duration, or.tau);
            for &q in qubits.iter().filter(|q| coupled.contains(q)) {
                b.rho = dephase(&b.rho, q, factor)?;
            }
        }
    }
    Ok(())
}

/// Probability of every classical record, merged across branches.
pub fn record_distribution(branches: &[BranchState]) -> BTreeMap<String, f64> {
    let mut dist = BTreeMap::new();
    for b in branches {
        *dist.entry(b.record_key()).or_insert(0.0) += b.probability;
    }
    dist
}

/// Probability that classical bit `clbit` holds 1 at the end.
pub fn clbit_probability(branches: &[BranchState], clbit: usize) -> f64 {
    branches
        .iter()
        .filter(|b| b.record[clbit] == 1)
        .map(|b| b.probability)
        .sum()
}

/// Record-averaged reduced state of `qubit`.
pub fn qubit_marginal(branches: &[BranchState], qubit: usize) -> Result<DensityMatrix, CircuitError> {
    let reduced: Vec<(f64, DensityMatrix)> = branches
        .iter()
        .map(|b| Ok((b.probability, b.rho.reduce(&[qubit])?)))
        .collect::<Result<_, CircuitError>>()?;
    let parts: Vec<(f64, &DensityMatrix)> = reduced.iter().map(|(p, r)| (*p, r)).collect();
    Ok(DensityMatrix::mixture(&parts)?)
}
