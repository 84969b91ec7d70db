// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Protocol configuration files.
//!
//! A config is a TOML document whose keys are the protocol parameters; every
//! key is optional and falls back to the replication defaults.
//!
//! ```toml
//! delay = 50.0                  # us
//! cry_angle = 0.7853981633974483
//! channel_mode = "paper"        # or "kraus"
//! coherence_injection = 0.25    # or "exact"
//! swap_roles = false
//! readout = "control"           # or "gravity_qubit"
//!
//! [noise.default]
//! t1 = 300.0
//! t2 = 150.0
//!
//! [noise.per_qubit.2]
//! t1 = 280.0
//! t2 = 140.0
//!
//! [or_settings]
//! tau = 65.5                    # us
//! gamma = 1.0
//! ```

use std::path::Path;

use orsim_core::counts::read_calibration;
use orsim_core::experiment::ProtocolParams;

use crate::error::CliError;

/// Reads and validates a protocol config; `None` gives the defaults.
pub fn load_params(path: Option<&Path>) -> Result<ProtocolParams, CliError> {
    let Some(path) = path else {
        return Ok(ProtocolParams::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_params(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn parse_params(text: &str) -> Result<ProtocolParams, String> {
    let params: ProtocolParams = toml::from_str(text).map_err(|e| e.to_string())?;
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

/// Overlays a calibration file on the config's noise model.
pub fn apply_calibration(params: ProtocolParams, path: &Path) -> Result<ProtocolParams, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read calibration {}: {e}", path.display())))?;
    let cal = read_calibration(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let noise = params
        .noise
        .clone()
        .with_calibration(&cal)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(ProtocolParams { noise, ..params })
}
