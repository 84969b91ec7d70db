// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command bodies. Each returns the text to print on stdout.

use std::fmt::Write;
use std::path::Path;

use orsim_core::circuit::export_qasm3;
use orsim_core::experiment::{
    analyze_counts, build_protocol, fit_tau, predict as run_prediction, run_experiment,
    ReportFormat, TauFit, STAGES,
};
use orsim_core::gravity::fig1_table;
use orsim_core::{fmt_sig, CountData, DensityMatrix};

use crate::config::{apply_calibration, load_params};
use crate::error::{write_file, CliError};

const SIG: usize = 6;

fn entry(rho: &DensityMatrix, i: usize, j: usize) -> String {
    let z = rho.get(i, j);
    if z.im.abs() > 1e-12 {
        let sign = if z.im < 0.0 { "-" } else { "+" };
        format!("{}{sign}{}i", fmt_sig(z.re, SIG), fmt_sig(z.im.abs(), SIG))
    } else {
        fmt_sig(z.re, SIG)
    }
}

fn matrix_line(rho: &DensityMatrix) -> String {
    let rows: Vec<String> = (0..rho.dim())
        .map(|i| {
            let cells: Vec<String> = (0..rho.dim()).map(|j| entry(rho, i, j)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn predict(config: Option<&Path>, calibration: Option<&Path>, csv: Option<&Path>) -> Result<String, CliError> {
    let mut params = load_params(config)?;
    if let Some(path) = calibration {
        params = apply_calibration(params, path)?;
    }
    let p = run_prediction(&params)?;
    let mut out = String::new();
    let mut rows = String::from("stage,arm,row,col,re,im\n");
    for name in STAGES {
        let stage = p.stage(name).expect("every stage is reported");
        writeln!(out, "[{name}]").unwrap();
        for (arm, rho) in [("test", &stage.test), ("control", &stage.control)] {
            writeln!(out, "{arm:<7} = {}", matrix_line(rho)).unwrap();
            for i in 0..rho.dim() {
                for j in 0..rho.dim() {
                    let z = rho.get(i, j);
                    writeln!(rows, "{name},{arm},{i},{j},{},{}", fmt_sig(z.re, SIG), fmt_sig(z.im, SIG)).unwrap();
                }
            }
        }
    }
    writeln!(
        out,
        "control: P(0)={} P(1)={}",
        fmt_sig(p.control.p0, SIG),
        fmt_sig(p.control.p1, SIG)
    )
    .unwrap();
    writeln!(out, "test:    P(0)={} P(1)={}", fmt_sig(p.test.p0, SIG), fmt_sig(p.test.p1, SIG)).unwrap();
    writeln!(out, "P(0)={:.3} P(1)={:.3}", p.test.p0, p.test.p1).unwrap();
    if let Some(path) = csv {
        write_file(path, &rows)?;
    }
    Ok(out)
}

pub fn table(
    sep: f64,
    gamma: f64,
    bits: &[u32],
    masses: &[f64],
    csv: bool,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let t = fig1_table(bits, masses, sep, gamma)?;
    let text = if csv { t.to_csv() } else { t.to_text() };
    emit(text, out)
}

fn emit(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn simulate(
    config: Option<&Path>,
    shots: u64,
    seed: u64,
    repetitions: u32,
    out_dir: &Path,
) -> Result<String, CliError> {
    let params = load_params(config)?;
    let run = run_experiment(&params, shots, seed, repetitions)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let test_path = out_dir.join("test.json");
    let control_path = out_dir.join("control.json");
    write_file(&test_path, &run.test.to_json())?;
    write_file(&control_path, &run.control.to_json())?;
    let r = &run.report;
    let mut out = String::new();
    writeln!(out, "wrote {} and {}", test_path.display(), control_path.display()).unwrap();
    writeln!(
        out,
        "test P(1)={} control P(1)={} z={}",
        fmt_sig(r.test.p_one, SIG),
        fmt_sig(r.control.p_one, SIG),
        fmt_sig(r.z, SIG)
    )
    .unwrap();
    if let Some(fit) = &r.fitted_tau {
        writeln!(out, "{}", fit_line(fit)).unwrap();
    }
    Ok(out)
}

fn read_counts(path: &Path) -> Result<CountData, CliError> {
    CountData::read(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn analyze(
    test: &Path,
    control: &Path,
    delay: Option<f64>,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let (test, control) = (read_counts(test)?, read_counts(control)?);
    let mut report = analyze_counts(&test, &control)?;
    if let Some(delay) = delay {
        report.fitted_tau = Some(fit_tau(&test, &control, delay)?);
    }
    emit(format.render(&report), out)
}

fn fit_line(fit: &TauFit) -> String {
    match fit {
        TauFit::Finite { tau, se, ratio, ratio_se } => format!(
            "tau = {} us ± {} us (coherence ratio {} ± {})",
            fmt_sig(*tau, SIG),
            fmt_sig(*se, SIG),
            fmt_sig(*ratio, SIG),
            fmt_sig(*ratio_se, SIG)
        ),
        TauFit::CompleteCollapse => "tau = 0 us (test arm fully collapsed)".to_string(),
        TauFit::NoSignal { ratio } => format!("tau = inf (no collapse signal, coherence ratio {})", fmt_sig(*ratio, SIG)),
    }
}

pub fn fit(test: &Path, control: &Path, delay: f64) -> Result<String, CliError> {
    let fit = fit_tau(&read_counts(test)?, &read_counts(control)?, delay)?;
    Ok(format!("{}\n", fit_line(&fit)))
}

pub fn export(config: Option<&Path>, json: bool, out: Option<&Path>) -> Result<String, CliError> {
    let circuit = build_protocol(&load_params(config)?)?;
    let text = if json { circuit.to_json() } else { export_qasm3(&circuit)? };
    emit(text, out)
}
