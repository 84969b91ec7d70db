// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{collapse_time, self_energy_point, GravityError, MassConfig};
use crate::fmt_sig;

/// Default rows: gravity-coupled bit counts.
pub const FIG1_BITS: [u32; 6] = [2, 4, 8, 16, 32, 64];
/// Default columns: mass per bit in kg.
pub const FIG1_MASSES: [f64; 6] = [1e-15, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10];
/// Default separation in m.
pub const FIG1_SEPARATION: f64 = 1e-4;

/// Experimental feasibility of a collapse time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    /// 10 μs ≤ τ ≤ 100 μs.
    Green,
    /// 100 μs < τ ≤ 500 μs.
    Yellow,
    /// τ < 10 μs or τ > 500 μs.
    Red,
}

impl Feasibility {
    pub fn classify(tau_seconds: f64) -> Self {
        let us = tau_seconds * 1e6;
        if (10.0..=100.0).contains(&us) {
            Feasibility::Green
        } else if (10.0..=500.0).contains(&us) {
            Feasibility::Yellow
        } else {
            Feasibility::Red
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Feasibility::Green => "green",
            Feasibility::Yellow => "yellow",
            Feasibility::Red => "red",
        }
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub n_bits: u32,
    pub mass_per_bit: f64,
    /// Collapse time in seconds.
    pub tau: f64,
    pub class: Feasibility,
}

/// Collapse times over a bits × masses grid, row-major by bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauTable {
    pub bits: Vec<u32>,
    pub masses: Vec<f64>,
    pub separation: f64,
    pub gamma: f64,
    pub cells: Vec<TableCell>,
}

/// Point-geometry collapse times for every `(bits, mass)` pair.
pub fn fig1_table(bits: &[u32], masses: &[f64], separation: f64, gamma: f64) -> Result<TauTable, GravityError> {
    if bits.is_empty() || masses.is_empty() {
        return Err(GravityError::EmptyTable);
    }
    let mut cells = Vec::with_capacity(bits.len() * masses.len());
    for &n in bits {
        for &m in masses {
            let e = self_energy_point(&MassConfig::point(n, m, separation))?;
            let tau = collapse_time(e, gamma)?;
            cells.push(TableCell {
                n_bits: n,
                mass_per_bit: m,
                tau,
                class: Feasibility::classify(tau),
            });
        }
    }
    Ok(TauTable {
        bits: bits.to_vec(),
        masses: masses.to_vec(),
        separation,
        gamma,
        cells,
    })
}

/// Seconds rendered with 6 significant digits in the largest unit that keeps
/// the mantissa at or above 1 (`s`, `ms`, `us`, `ns`, `ps`, `fs`).
pub fn format_duration(seconds: f64) -> String {
    const UNITS: [(&str, f64); 6] = [
        ("s", 1.0),
        ("ms", 1e-3),
        ("us", 1e-6),
        ("ns", 1e-9),
        ("ps", 1e-12),
        ("fs", 1e-15),
    ];
    for (name, scale) in UNITS {
        if seconds >= scale {
            return format!("{} {name}", fmt_sig(seconds / scale, 6));
        }
    }
    format!("{} s", fmt_sig(seconds, 6))
}

impl TauTable {
    pub fn cell(&self, n_bits: u32, mass_per_bit: f64) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.n_bits == n_bits && c.mass_per_bit == mass_per_bit)
    }

    /// `n_bits,mass_kg,tau_s,class`, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_bits,mass_kg,tau_s,class\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{:e},{},{}\n",
                c.n_bits,
                c.mass_per_bit,
                fmt_sig(c.tau, 6),
                c.class
            ));
        }
        out
    }

    /// Aligned grid with one column per mass; each cell reads `τ [class]`.
    pub fn to_text(&self) -> String {
        let header: Vec<String> = std::iter::once("bits".to_string())
            .chain(self.masses.iter().map(|m| format!("{m:e} kg")))
            .collect();
        let mut rows = vec![header];
        for (r, n) in self.bits.iter().enumerate() {
            let mut row = vec![n.to_string()];
            for c in &self.cells[r * self.masses.len()..(r + 1) * self.masses.len()] {
                row.push(format!("{} [{}]", format_duration(c.tau), c.class));
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|k| rows.iter().map(|row| row[k].len()).max().unwrap_or(0))
            .collect();
        let mut out = format!(
            "collapse time, separation {:e} m, gamma {}\n",
            self.separation,
            fmt_sig(self.gamma, 6)
        );
        for row in rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
