// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shot counts and their JSON exchange format.
//!
//! ```json
//! {"role": "test", "shots": 2590, "counts": {"0": 1502, "1": 1088},
//!  "backend": "ibm_eagle",
//!  "calibration": {"0": {"t1_us": 300.0, "t2_us": 150.0, "timestamp": "2025-03-01T00:00:00Z"}}}
//! ```
//!
//! Bitstrings put the highest classical bit first, so `c[0]` is the
//! rightmost character. `role` is `null` for raw register counts that have
//! not been split into experiment arms.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArmRole {
    Test,
    Control,
}

impl std::fmt::Display for ArmRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ArmRole::Test => "test",
            ArmRole::Control => "control",
        })
    }
}

/// One qubit's calibration snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub t1_us: f64,
    pub t2_us: f64,
    pub timestamp: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountData {
    pub role: Option<ArmRole>,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<BTreeMap<usize, Calibration>>,
}

#[derive(Debug, Error)]
pub enum CountsError {
    #[error("counts sum to {sum} but shots = {shots}")]
    ShotMismatch { sum: u64, shots: u64 },
    #[error("outcome key {0:?} is not a bitstring")]
    BadKey(String),
    #[error("outcome keys have mixed widths")]
    MixedWidths,
    #[error("classical bit {clbit} out of range for {width}-bit outcomes")]
    ClbitOutOfRange { clbit: usize, width: usize },
    #[error("malformed counts JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CountData {
    pub fn new(
        role: Option<ArmRole>,
        counts: BTreeMap<String, u64>,
        backend: impl Into<String>,
    ) -> Result<Self, CountsError> {
        let shots = counts.values().sum();
        let data = CountData {
            role,
            shots,
            counts,
            backend: backend.into(),
            calibration: None,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<(), CountsError> {
        let sum: u64 = self.counts.values().sum();
        if sum != self.shots {
            return Err(CountsError::ShotMismatch {
                sum,
                shots: self.shots,
            });
        }
        let mut width = None;
        for key in self.counts.keys() {
            if key.is_empty() || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(CountsError::BadKey(key.clone()));
            }
            match width {
                None => width = Some(key.len()),
                Some(w) if w != key.len() => return Err(CountsError::MixedWidths),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    /// Width of the outcome bitstrings, if any outcome was recorded.
    pub fn width(&self) -> Option<usize> {
        self.counts.keys().next().map(String::len)
    }

    /// Single-bit counts of classical bit `clbit`, labelled with `role`.
    pub fn marginal(&self, clbit: usize, role: ArmRole) -> Result<CountData, CountsError> {
        let width = self.width().unwrap_or(0);
        if clbit >= width {
            return Err(CountsError::ClbitOutOfRange { clbit, width });
        }
        let mut out: BTreeMap<String, u64> = BTreeMap::new();
        for (key, &n) in &self.counts {
            let bit = key.as_bytes()[width - 1 - clbit];
            *out.entry(if bit == b'1' { "1" } else { "0" }.to_string()).or_default() += n;
        }
        Ok(CountData {
            role: Some(role),
            shots: self.shots,
            counts: out,
            backend: self.backend.clone(),
            calibration: self.calibration.clone(),
        })
    }

    /// Adds another batch of counts for the same role.
    pub fn merge(&mut self, other: &CountData) {
        for (k, &n) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += n;
        }
        self.shots += other.shots;
        if let Some(cal) = &other.calibration {
            let mine = self.calibration.get_or_insert_with(BTreeMap::new);
            for (q, c) in cal {
                mine.entry(*q).or_insert_with(|| c.clone());
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("count data serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CountsError> {
        let data: CountData = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }

    pub fn read(path: &Path) -> Result<Self, CountsError> {
        let text = std::fs::read_to_string(path).map_err(|source| CountsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CountsError> {
        std::fs::write(path, self.to_json()).map_err(|source| CountsError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Reads a calibration file `{q: {t1_us, t2_us, timestamp}}`.
pub fn read_calibration(text: &str) -> Result<BTreeMap<usize, Calibration>, CountsError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CountData {
        let counts = [("00".to_string(), 5), ("01".to_string(), 3), ("11".to_string(), 2)]
            .into_iter()
            .collect();
        CountData::new(None, counts, "sim").unwrap()
    }

    #[test]
    fn marginal_reads_rightmost_bit_as_c0() {
        let m0 = sample().marginal(0, ArmRole::Test).unwrap();
        assert_eq!(m0.count("1"), 5);
        assert_eq!(m0.count("0"), 5);
        let m1 = sample().marginal(1, ArmRole::Control).unwrap();
        assert_eq!(m1.count("1"), 2);
        assert_eq!(m1.role, Some(ArmRole::Control));
        assert!(sample().marginal(2, ArmRole::Test).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"role":"test","shots":2590,"counts":{"0":1502,"1":1088},
            "backend":"ibm_eagle","calibration":{"3":{"t1_us":300.0,"t2_us":150.0,"timestamp":"2025-03-01T00:00:00Z"}}}"#;
        let data = CountData::from_json(text).unwrap();
        assert_eq!(data.role, Some(ArmRole::Test));
        assert_eq!(data.calibration.as_ref().unwrap()[&3].t2_us, 150.0);
        assert_eq!(CountData::from_json(&data.to_json()).unwrap(), data);
    }

    #[test]
    fn rejects_inconsistent_counts() {
        let bad = r#"{"role":"test","shots":10,"counts":{"0":1,"1":2},"backend":"x"}"#;
        assert!(matches!(CountData::from_json(bad), Err(CountsError::ShotMismatch { .. })));
        let bad = r#"{"role":null,"shots":3,"counts":{"0":1,"10":2},"backend":"x"}"#;
        assert!(matches!(CountData::from_json(bad), Err(CountsError::MixedWidths)));
        let bad = r#"{"role":null,"shots":1,"counts":{"2":1},"backend":"x"}"#;
        assert!(matches!(CountData::from_json(bad), Err(CountsError::BadKey(_))));
    }
}
