// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the criterion benches.

use orsim_core::experiment::ProtocolParams;
use orsim_core::gravity::OrSettings;

/// Replication parameters with the collapse channel at `tau` us.
pub fn working_point(tau: f64) -> ProtocolParams {
    ProtocolParams {
        or_settings: Some(OrSettings::new(tau, 1.0, []).expect("positive tau")),
        ..Default::default()
    }
}
