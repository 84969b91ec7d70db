// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::circuit::{validate, Circuit, EvolveOptions, NoiseModel, QubitRole};
use crate::gravity::OrSettings;
use crate::qmath::{ChannelMode, NoiseParams};

/// Number of qubits in the protocol circuit.
pub const PROTOCOL_QUBITS: usize = 6;
/// Classical bits: test-ancilla record, test final, control final (or
/// gravity readout), control-ancilla record.
pub const PROTOCOL_CLBITS: usize = 4;
/// Test-ancilla record; drives the gravity flips.
pub const CLBIT_RECORD: usize = 0;
/// Final measurement of the test qubit.
pub const CLBIT_TEST: usize = 1;
/// Final measurement of the control qubit (or of gravity qubit 1).
pub const CLBIT_CONTROL: usize = 2;
/// Control-ancilla record.
pub const CLBIT_CONTROL_RECORD: usize = 3;

/// What the third final readout measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalReadout {
    #[default]
    Control,
    GravityQubit,
}

/// Protocol parameters. Times in μs, angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolParams {
    pub delay: f64,
    pub cry_angle: f64,
    pub noise: NoiseModel,
    pub channel_mode: ChannelMode,
    /// Coherence magnitude imposed on each primary qubit after its ancilla
    /// is read; `None` keeps the exact post-measurement state. Written as a
    /// number or as the string `"exact"` in configuration files.
    #[serde(with = "injection")]
    pub coherence_injection: Option<f64>,
    pub or_settings: Option<OrSettings>,
    pub swap_roles: bool,
    pub readout: FinalReadout,
}

mod injection {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Magnitude(f64),
        Keyword(String),
    }

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(c) => Wire::Magnitude(*c),
            None => Wire::Keyword("exact".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Wire::deserialize(d)? {
            Wire::Magnitude(c) => Ok(Some(c)),
            Wire::Keyword(k) if k == "exact" => Ok(None),
            Wire::Keyword(k) => Err(serde::de::Error::custom(format!(
                "coherence_injection must be a number or \"exact\", got {k:?}"
            ))),
        }
    }
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            delay: 50.0,
            cry_angle: FRAC_PI_4,
            noise: NoiseModel::uniform(NoiseParams { t1: 300.0, t2: 150.0 }),
            channel_mode: ChannelMode::Paper,
            coherence_injection: Some(0.25),
            or_settings: None,
            swap_roles: false,
            readout: FinalReadout::Control,
        }
    }
}

/// Physical qubit indices for each role.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub test: usize,
    pub control: usize,
    pub ancilla_test: usize,
    pub ancilla_control: usize,
    pub gravity1: usize,
    pub gravity2: usize,
}

impl Layout {
    /// Qubits 0 and 1 are the primaries, 2 and 5 their ancillas, 3 and 4 the
    /// gravity qubits; `swap` exchanges the two primary/ancilla pairs.
    pub fn new(swap: bool) -> Self {
        let (a, b) = ((0, 2), (1, 5));
        let ((test, ancilla_test), (control, ancilla_control)) = if swap { (b, a) } else { (a, b) };
        Layout {
            test,
            control,
            ancilla_test,
            ancilla_control,
            gravity1: 3,
            gravity2: 4,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.delay >= 0.0 && self.delay.is_finite()) {
            return Err(ExperimentError::Invalid(format!(
                "delay must be a non-negative number of us, got {}",
                self.delay
            )));
        }
        if !self.cry_angle.is_finite() {
            return Err(ExperimentError::Invalid("cry_angle must be finite".into()));
        }
        if let Some(c) = self.coherence_injection {
            if !(0.0..=0.5).contains(&c) {
                return Err(ExperimentError::Invalid(format!(
                    "coherence_injection must lie in [0, 0.5], got {c}"
                )));
            }
        }
        let noise = self.noise.default.iter().chain(self.noise.per_qubit.values());
        for n in noise {
            NoiseParams::new(n.t1, n.t2).map_err(|e| ExperimentError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.swap_roles)
    }

    /// Evolution options with the collapse channel bound to the physical
    /// test qubit.
    pub fn evolve_options(&self) -> EvolveOptions {
        let test = self.layout().test;
        EvolveOptions {
            noise: self.noise.clone(),
            mode: self.channel_mode,
            or: self.or_settings.as_ref().map(|o| o.with_coupled([test])),
            coherence_injection: self.coherence_injection,
        }
    }
}

/// Builds the six-qubit protocol circuit.
pub fn build_protocol(params: &ProtocolParams) -> Result<Circuit, ExperimentError> {
    params.validate()?;
    let l = params.layout();
    let mut c = Circuit::new(PROTOCOL_QUBITS, PROTOCOL_CLBITS);
    for (q, role) in [
        (l.test, QubitRole::Test),
        (l.control, QubitRole::Control),
        (l.ancilla_test, QubitRole::AncillaTest),
        (l.ancilla_control, QubitRole::AncillaControl),
        (l.gravity1, QubitRole::Gravity1),
        (l.gravity2, QubitRole::Gravity2),
    ] {
        c.qubit_roles.insert(q, role);
    }
    c.x(l.test).h(l.test).x(l.control).h(l.control);
    c.cry(l.test, l.ancilla_test, params.cry_angle)
        .cry(l.control, l.ancilla_control, params.cry_angle);
    c.measure(l.ancilla_test, CLBIT_RECORD)
        .measure(l.ancilla_control, CLBIT_CONTROL_RECORD);
    c.conditional_x(l.gravity1, CLBIT_RECORD, 1)
        .conditional_x(l.gravity2, CLBIT_RECORD, 0);
    c.delay(vec![l.test, l.control, l.gravity1, l.gravity2], params.delay);
    c.h(l.test).h(l.control);
    let third = match params.readout {
        FinalReadout::Control => l.control,
        FinalReadout::GravityQubit => l.gravity1,
    };
    c.measure(l.test, CLBIT_TEST).measure(third, CLBIT_CONTROL);
    validate(&c).map_err(|v| ExperimentError::Circuit(crate::circuit::CircuitError::Invalid(v)))?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Instruction, InstructionKind};

    fn count(c: &Circuit, kind: InstructionKind) -> usize {
        c.instructions.iter().filter(|i| i.kind() == kind).count()
    }

    #[test]
    fn default_protocol_shape() {
        let c = build_protocol(&ProtocolParams::default()).unwrap();
        assert_eq!(validate(&c), Ok(()));
        assert_eq!(count(&c, InstructionKind::Cry), 2);
        assert_eq!(count(&c, InstructionKind::ConditionalX), 2);
        assert_eq!(count(&c, InstructionKind::Delay), 1);
        assert_eq!(c.qubit_with_role(QubitRole::Test), Some(0));
        assert_eq!(c.qubit_with_role(QubitRole::Gravity1), Some(3));
    }

    #[test]
    fn gravity_flips_follow_test_record() {
        let c = build_protocol(&ProtocolParams::default()).unwrap();
        let flips: Vec<(usize, u8)> = c
            .instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::ConditionalX { qubit, condition } => {
                    assert_eq!(condition.clbit, CLBIT_RECORD);
                    Some((*qubit, condition.value))
                }
                _ => None,
            })
            .collect();
        assert_eq!(flips, vec![(3, 1), (4, 0)]);
    }

    #[test]
    fn swap_exchanges_roles_only() {
        let a = build_protocol(&ProtocolParams::default()).unwrap();
        let b = build_protocol(&ProtocolParams {
            swap_roles: true,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(b.qubit_with_role(QubitRole::Test), Some(1));
        assert_eq!(b.qubit_with_role(QubitRole::Control), Some(0));
        let kinds = |c: &Circuit| {
            let mut k: Vec<_> = c.instructions.iter().map(|i| i.kind()).collect();
            k.sort();
            k
        };
        assert_eq!(kinds(&a), kinds(&b));
        assert_ne!(a.instructions, b.instructions);
    }

    #[test]
    fn zero_delay_is_kept() {
        let c = build_protocol(&ProtocolParams {
            delay: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!(c
            .instructions
            .iter()
            .any(|i| matches!(i, Instruction::Delay { duration, .. } if *duration == 0.0)));
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            ProtocolParams {
                delay: -1.0,
                ..Default::default()
            },
            ProtocolParams {
                coherence_injection: Some(0.7),
                ..Default::default()
            },
        ] {
            assert!(matches!(build_protocol(&p), Err(ExperimentError::Invalid(_))));
        }
    }

    #[test]
    fn gravity_readout_switch() {
        let c = build_protocol(&ProtocolParams {
            readout: FinalReadout::GravityQubit,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(
            c.instructions.last(),
            Some(&Instruction::Measure {
                qubit: 3,
                clbit: CLBIT_CONTROL
            })
        );
    }

    #[test]
    fn injection_accepts_number_or_exact() {
        let p: ProtocolParams = serde_json::from_str(r#"{"coherence_injection": "exact"}"#).unwrap();
        assert_eq!(p.coherence_injection, None);
        let p: ProtocolParams = serde_json::from_str(r#"{"coherence_injection": 0.1}"#).unwrap();
        assert_eq!(p.coherence_injection, Some(0.1));
        assert!(serde_json::from_str::<ProtocolParams>(r#"{"coherence_injection": "some"}"#).is_err());
        let exact = ProtocolParams {
            coherence_injection: None,
            ..Default::default()
        };
        let text = serde_json::to_string(&exact).unwrap();
        assert_eq!(serde_json::from_str::<ProtocolParams>(&text).unwrap(), exact);
    }
}
