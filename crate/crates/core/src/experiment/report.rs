// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fit::TauFit;
use super::stats::{AnalysisReport, ArmStats};
use super::ExperimentError;
use crate::fmt_sig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Markdown,
    Svg,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
            ReportFormat::Svg => "svg",
        }
    }

    pub fn render(self, report: &AnalysisReport) -> String {
        match self {
            ReportFormat::Csv => report_csv(report),
            ReportFormat::Markdown => report_markdown(report),
            ReportFormat::Svg => report_svg(report),
        }
    }
}

/// Writes `report` to `path` in `format`.
pub fn emit_report(report: &AnalysisReport, format: ReportFormat, path: &Path) -> Result<(), ExperimentError> {
    std::fs::write(path, format.render(report)).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn arm_fields(out: &mut Vec<(String, String)>, name: &str, a: &ArmStats) {
    out.push((format!("{name}_shots"), a.shots.to_string()));
    out.push((format!("{name}_p_one"), a.p_one.to_string()));
    out.push((format!("{name}_se"), a.se.to_string()));
    out.push((format!("{name}_distance_from_uniform"), a.distance_from_uniform.to_string()));
}

/// `field,value` rows; floats use the shortest text that parses back exactly.
pub fn report_csv(r: &AnalysisReport) -> String {
    let mut rows = Vec::new();
    arm_fields(&mut rows, "test", &r.test);
    arm_fields(&mut rows, "control", &r.control);
    rows.push(("difference".into(), r.difference.to_string()));
    rows.push(("difference_se".into(), r.difference_se.to_string()));
    rows.push(("z".into(), r.z.to_string()));
    rows.push(("p_value".into(), r.p_value.to_string()));
    match r.fitted_tau {
        None => rows.push(("tau_fit".into(), "none".into())),
        Some(TauFit::CompleteCollapse) => rows.push(("tau_fit".into(), "complete_collapse".into())),
        Some(TauFit::NoSignal { ratio }) => {
            rows.push(("tau_fit".into(), "no_signal".into()));
            rows.push(("tau_ratio".into(), ratio.to_string()));
        }
        Some(TauFit::Finite {
            tau,
            se,
            ratio,
            ratio_se,
        }) => {
            rows.push(("tau_fit".into(), "finite".into()));
            rows.push(("tau_us".into(), tau.to_string()));
            rows.push(("tau_se_us".into(), se.to_string()));
            rows.push(("tau_ratio".into(), ratio.to_string()));
            rows.push(("tau_ratio_se".into(), ratio_se.to_string()));
        }
    }
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

/// Parses the output of [`report_csv`].
pub fn parse_report_csv(text: &str) -> Result<AnalysisReport, ExperimentError> {
    let bad = |m: String| ExperimentError::Invalid(format!("report csv: {m}"));
    let mut lines = text.lines();
    if lines.next() != Some("field,value") {
        return Err(bad("missing header".into()));
    }
    let mut map = BTreeMap::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let (k, v) = line.split_once(',').ok_or_else(|| bad(format!("bad row {line:?}")))?;
        map.insert(k.to_string(), v.to_string());
    }
    let text_of = |k: &str| map.get(k).cloned().ok_or_else(|| bad(format!("missing {k}")));
    let num = |k: &str| -> Result<f64, ExperimentError> {
        text_of(k)?.parse().map_err(|_| bad(format!("{k} is not a number")))
    };
    let shots = |k: &str| -> Result<u64, ExperimentError> {
        text_of(k)?.parse().map_err(|_| bad(format!("{k} is not an integer")))
    };
    let arm = |n: &str| -> Result<ArmStats, ExperimentError> {
        Ok(ArmStats {
            shots: shots(&format!("{n}_shots"))?,
            p_one: num(&format!("{n}_p_one"))?,
            se: num(&format!("{n}_se"))?,
            distance_from_uniform: num(&format!("{n}_distance_from_uniform"))?,
        })
    };
    let fitted_tau = match text_of("tau_fit")?.as_str() {
        "none" => None,
        "complete_collapse" => Some(TauFit::CompleteCollapse),
        "no_signal" => Some(TauFit::NoSignal {
            ratio: num("tau_ratio")?,
        }),
        "finite" => Some(TauFit::Finite {
            tau: num("tau_us")?,
            se: num("tau_se_us")?,
            ratio: num("tau_ratio")?,
            ratio_se: num("tau_ratio_se")?,
        }),
        other => return Err(bad(format!("unknown tau_fit {other:?}"))),
    };
    Ok(AnalysisReport {
        test: arm("test")?,
        control: arm("control")?,
        difference: num("difference")?,
        difference_se: num("difference_se")?,
        z: num("z")?,
        p_value: num("p_value")?,
        fitted_tau,
    })
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// Results-style summary: per-arm distributions, difference, significance
/// and the fitted collapse time.
pub fn report_markdown(r: &AnalysisReport) -> String {
    let mut out = String::from("# Results\n\n");
    out.push_str("| Arm | P(0) | P(1) | Shots | Distance from 50:50 |\n");
    out.push_str("|---|---|---|---|---|\n");
    for (name, a) in [("Test", &r.test), ("Control", &r.control)] {
        let _ = writeln!(
            out,
            "| {name} | {} ± {} | {} ± {} | {} | {} |",
            pct(1.0 - a.p_one),
            pct(a.se),
            pct(a.p_one),
            pct(a.se),
            a.shots,
            pct(a.distance_from_uniform)
        );
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "- Difference: {} ± {} (combining error margins)",
        pct(r.difference.abs()),
        pct(r.difference_se)
    );
    let _ = writeln!(
        out,
        "- Significance: {:.1}σ (z = {}, two-sided p = {})",
        r.z.abs(),
        fmt_sig(r.z, 6),
        fmt_sig(r.p_value, 3)
    );
    let _ = writeln!(
        out,
        "- Test arm is {} away from a 50:50 distribution; control arm is {} away",
        pct(r.test.distance_from_uniform),
        pct(r.control.distance_from_uniform)
    );
    let line = match r.fitted_tau {
        None => "not fitted".to_string(),
        Some(TauFit::CompleteCollapse) => "complete collapse (τ → 0)".to_string(),
        Some(TauFit::NoSignal { .. }) => "no collapse signal (τ = ∞)".to_string(),
        Some(TauFit::Finite {
            tau,
            se,
            ratio,
            ratio_se,
        }) => format!(
            "{} ± {} μs (coherence ratio {} ± {})",
            fmt_sig(tau, 3),
            fmt_sig(se, 2),
            fmt_sig(ratio, 4),
            fmt_sig(ratio_se, 2)
        ),
    };
    let _ = writeln!(out, "- Fitted collapse time: {line}");
    out
}

/// Bar chart of P(0) and P(1) for both arms with ±1σ error bars.
pub fn report_svg(r: &AnalysisReport) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const TOP: f64 = 30.0;
    const BASE: f64 = 270.0;
    let scale = BASE - TOP;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="40" y1="{BASE}" x2="{}" y2="{BASE}" stroke="black"/>"#,
        W - 20.0
    );
    let half = BASE - 0.5 * scale;
    let _ = writeln!(
        out,
        r#"<line x1="40" y1="{half}" x2="{}" y2="{half}" stroke="gray" stroke-dasharray="4 4"/>"#,
        W - 20.0
    );
    let bars = [
        ("0", "#4c72b0", 0.0),
        ("1", "#dd8452", 1.0),
    ];
    for (g, (name, a)) in [("Test", &r.test), ("Control", &r.control)].iter().enumerate() {
        let x0 = 70.0 + g as f64 * 200.0;
        for (label, colour, which) in bars {
            let p = if which == 0.0 { 1.0 - a.p_one } else { a.p_one };
            let x = x0 + which * 70.0;
            let h = p * scale;
            let y = BASE - h;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{y:.3}" width="60" height="{h:.3}" fill="{colour}"><title>{name} P({label}) = {}</title></rect>"#,
                pct(p)
            );
            let cx = x + 30.0;
            let lo = BASE - (p - a.se).max(0.0) * scale;
            let hi = BASE - (p + a.se).min(1.0) * scale;
            let _ = writeln!(
                out,
                r#"<line x1="{cx}" y1="{lo:.3}" x2="{cx}" y2="{hi:.3}" stroke="black"/>"#
            );
            for yy in [lo, hi] {
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{yy:.3}" x2="{}" y2="{yy:.3}" stroke="black"/>"#,
                    cx - 6.0,
                    cx + 6.0
                );
            }
            let _ = writeln!(
                out,
                r#"<text x="{cx}" y="{}" font-size="11" text-anchor="middle">|{label}⟩</text>"#,
                BASE + 14.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{name}</text>"#,
            x0 + 65.0,
            BASE + 32.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" font-size="13" text-anchor="middle">Δ = {} ± {}, z = {}</text>"#,
        W / 2.0,
        pct(r.difference),
        pct(r.difference_se),
        fmt_sig(r.z, 3)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::stats::analyze_proportions;
    use crate::experiment::fit::fit_tau_from_stats;

    fn reference_report() -> AnalysisReport {
        let mut r = analyze_proportions(0.4201, 2590, 0.3287, 2610).unwrap();
        r.fitted_tau = Some(fit_tau_from_stats(&r.test, &r.control, 50.0).unwrap());
        r
    }

    #[test]
    fn markdown_carries_results_lines() {
        let md = report_markdown(&reference_report());
        assert!(md.contains("- Difference: 9.14% ± 1.34%"));
        assert!(md.contains("- Significance: 6.8σ"));
        assert!(md.contains("| Test | 57.99% ± 0.97%"));
        assert!(md.contains("7.99% away"));
        assert!(md.contains("17.13% away"));
    }

    #[test]
    fn csv_round_trips() {
        for r in [
            reference_report(),
            analyze_proportions(0.3, 100, 0.3, 100).unwrap(),
            AnalysisReport {
                fitted_tau: Some(TauFit::NoSignal { ratio: 1.25 }),
                ..reference_report()
            },
            AnalysisReport {
                fitted_tau: Some(TauFit::CompleteCollapse),
                ..reference_report()
            },
        ] {
            assert_eq!(parse_report_csv(&report_csv(&r)).unwrap(), r);
        }
    }

    #[test]
    fn empty_difference_chart() {
        let r = analyze_proportions(0.3, 100, 0.3, 100).unwrap();
        let svg = report_svg(&r);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("z = 0.00"));
        // equal arms draw equal bars
        let heights: Vec<&str> = svg.lines().filter(|l| l.starts_with("<rect x")).collect();
        assert_eq!(heights.len(), 4);
        let h = |l: &str| l.split("height=").nth(1).unwrap().split(' ').next().unwrap().to_string();
        assert_eq!(h(heights[0]), h(heights[2]));
        assert_eq!(report_svg(&r), svg);
    }

    #[test]
    fn unwritable_destination() {
        let r = reference_report();
        let err = emit_report(&r, ReportFormat::Csv, Path::new("/nonexistent/dir/report.csv"));
        assert!(matches!(err, Err(ExperimentError::Io { .. })));
    }
}
