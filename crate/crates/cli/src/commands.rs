use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use risnoma_core::channel::linear_to_db;
use risnoma_core::montecarlo::{apply_axis, run_trials_with, sweep, Execution, McResult};
use risnoma_core::{AnalyticBler, AnalyticModel, ScenarioKind, SystemConfig};

use crate::config::{core_config_err, RunConfig, Sweep};
use crate::presets::{self, Preset};
use crate::table::{write_csv, Metric, Row, Source};
use crate::CliError;

/// Below this MC mean the log-ratio test for CU and CEU-SC is not applied.
pub const COMPARE_FLOOR: f64 = 1e-4;
/// Allowed `|log10(analytic / mc)|` for CU and CEU-SC.
pub const COMPARE_DECADES: f64 = 0.3;
/// Standard errors of slack for the MRC lower bound.
pub const BOUND_SIGMAS: f64 = 3.0;

/// One evaluated point of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub axis: &'static str,
    pub value: f64,
    pub mc: McResult,
    /// Present for the two-zone scenario when the closed forms apply.
    pub analytic: Option<AnalyticBler>,
}

/// Outcome of a run: evaluated points plus the points that were rejected.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutput {
    pub points: Vec<PointResult>,
    pub failed: Vec<String>,
}

fn analytic_for(cfg: &SystemConfig, scenario: ScenarioKind) -> Option<AnalyticBler> {
    if scenario != ScenarioKind::TwoZoneAligned {
        return None;
    }
    AnalyticModel::new(cfg).ok().map(|m| m.evaluate())
}

fn single_point_axis(cfg: &SystemConfig) -> (&'static str, f64) {
    ("rho_s_db", linear_to_db(cfg.rho_s))
}

/// Evaluates every point of a run configuration.
pub fn evaluate(rc: &RunConfig, exec: Execution) -> Result<RunOutput, CliError> {
    evaluate_series(
        &rc.system,
        rc.scenario,
        rc.sweep.as_ref(),
        rc.trials,
        rc.seed,
        exec,
    )
}

fn evaluate_series(
    base: &SystemConfig,
    scenario: ScenarioKind,
    sweep_spec: Option<&Sweep>,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<RunOutput, CliError> {
    let mut out = RunOutput::default();
    let Some(s) = sweep_spec else {
        let mc = run_trials_with(base, scenario, trials, seed, exec).map_err(core_config_err)?;
        let (axis, value) = single_point_axis(base);
        out.points.push(PointResult {
            axis,
            value,
            mc,
            analytic: analytic_for(base, scenario),
        });
        return Ok(out);
    };
    let points =
        sweep(base, scenario, s.axis, &s.values, trials, seed, exec).map_err(core_config_err)?;
    for p in points {
        match p.result {
            Ok(mc) => {
                let cfg = apply_axis(base, s.axis, p.value).map_err(core_config_err)?;
                out.points.push(PointResult {
                    axis: s.axis.name(),
                    value: p.value,
                    mc,
                    analytic: analytic_for(&cfg, scenario),
                });
            }
            Err(e) => out
                .failed
                .push(format!("{} = {}: {e}", s.axis.name(), p.value)),
        }
    }
    Ok(out)
}

/// CSV rows for evaluated points; analytic rows carry `stderr = 0`, `n = 0`
/// and `seed = 0`.
pub fn rows(points: &[PointResult], seed: u64) -> Vec<Row> {
    let mut rows = Vec::new();
    for p in points {
        let row = |metric, source, bler, stderr, n, seed| Row {
            axis: p.axis,
            value: p.value,
            metric,
            source,
            bler,
            stderr,
            n,
            seed,
        };
        for (metric, est) in [
            (Metric::Cu, p.mc.cu),
            (Metric::CeuSc, p.mc.ceu_sc),
            (Metric::CeuMrc, p.mc.ceu_mrc),
        ] {
            rows.push(row(metric, Source::Mc, est.mean, est.stderr, est.n, seed));
        }
        if let Some(a) = p.analytic {
            rows.push(row(Metric::Cu, Source::Analytic, a.cu, 0.0, 0, 0));
            rows.push(row(Metric::CeuSc, Source::Analytic, a.ceu_sc, 0.0, 0, 0));
            rows.push(row(
                Metric::CeuMrc,
                Source::AnalyticLb,
                a.ceu_mrc,
                0.0,
                0,
                0,
            ));
        }
    }
    rows
}

fn write_rows(path: &Path, rows: &mut [Row]) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let file = File::create(path).map_err(io_err)?;
    write_csv(rows, BufWriter::new(file)).map_err(io_err)
}

/// Runs the configured experiment and writes the CSV to `out`.
///
/// Rejected sweep points are skipped in the file and returned in
/// [`RunOutput::failed`].
pub fn cmd_run(rc: &RunConfig, out: &Path, exec: Execution) -> Result<RunOutput, CliError> {
    let result = evaluate(rc, exec)?;
    write_rows(out, &mut rows(&result.points, rc.seed))?;
    Ok(result)
}

/// Path of a figure's sibling series: `<stem>-<suffix>.<ext>` next to `out`.
pub fn series_path(out: &Path, suffix: Option<&str>) -> PathBuf {
    let Some(suffix) = suffix else {
        return out.to_path_buf();
    };
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{suffix}"),
    };
    out.with_file_name(name)
}

/// Runs a figure preset; returns the files written.
pub fn cmd_fig(
    preset: Preset,
    base: &SystemConfig,
    trials: u64,
    seed: u64,
    out: &Path,
    exec: Execution,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for s in presets::series(preset, base) {
        let spec = Sweep {
            axis: s.axis,
            values: s.values.clone(),
        };
        let result = evaluate_series(&s.base, s.scenario, Some(&spec), trials, seed, exec)?;
        if let Some(bad) = result.failed.first() {
            return Err(CliError::Config(format!("preset {}: {bad}", preset.name())));
        }
        let path = series_path(out, s.suffix);
        write_rows(&path, &mut rows(&result.points, seed))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// MC mean below [`COMPARE_FLOOR`]; not judged.
    Skip,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        }
    }
}

/// Judges an estimate-type closed form against MC.
pub fn judge_estimate(analytic: f64, mc_mean: f64) -> Verdict {
    if mc_mean < COMPARE_FLOOR {
        Verdict::Skip
    } else if analytic > 0.0 && (analytic / mc_mean).log10().abs() <= COMPARE_DECADES {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Judges the MRC lower bound against MC.
pub fn judge_bound(bound: f64, mc_mean: f64, mc_stderr: f64) -> Verdict {
    if bound > mc_mean + BOUND_SIGMAS * mc_stderr {
        Verdict::Fail
    } else {
        Verdict::Pass
    }
}

/// Report of a comparison and whether nothing failed.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub text: String,
    pub all_pass: bool,
}

/// Compares closed forms with MC at every configured point.
pub fn cmd_compare(rc: &RunConfig, exec: Execution) -> Result<CompareReport, CliError> {
    if rc.scenario != ScenarioKind::TwoZoneAligned {
        return Err(CliError::Config(
            "scenario: closed forms exist only for two_zone_aligned".into(),
        ));
    }
    AnalyticModel::new(&rc.system).map_err(core_config_err)?;
    let result = evaluate(rc, exec)?;
    let mut text = String::new();
    let mut all_pass = result.failed.is_empty();
    for f in &result.failed {
        let _ = writeln!(text, "error {f}");
    }
    let _ = writeln!(
        text,
        "{:<8} {:>12} {:<8} {:>16} {:>16} {:>16} {:>10}  verdict",
        "axis", "value", "metric", "analytic", "mc_mean", "mc_stderr", "ratio"
    );
    for p in &result.points {
        let Some(a) = p.analytic else {
            all_pass = false;
            let _ = writeln!(text, "{} {}: closed forms unavailable", p.axis, p.value);
            continue;
        };
        for (metric, analytic, est, bound) in [
            (Metric::Cu, a.cu, p.mc.cu, false),
            (Metric::CeuSc, a.ceu_sc, p.mc.ceu_sc, false),
            (Metric::CeuMrc, a.ceu_mrc, p.mc.ceu_mrc, true),
        ] {
            let verdict = if bound {
                judge_bound(analytic, est.mean, est.stderr)
            } else {
                judge_estimate(analytic, est.mean)
            };
            all_pass &= verdict != Verdict::Fail;
            let ratio = if est.mean > 0.0 {
                format!("{:.3e}", analytic / est.mean)
            } else {
                "inf".to_string()
            };
            let _ = writeln!(
                text,
                "{:<8} {:>12.6} {:<8} {:>16.6e} {:>16.6e} {:>16.6e} {:>10}  {}",
                p.axis,
                p.value,
                metric.name(),
                analytic,
                est.mean,
                est.stderr,
                ratio,
                verdict.label()
            );
        }
    }
    let _ = writeln!(
        text,
        "trials {} seed {}: {}",
        rc.trials,
        rc.seed,
        if all_pass { "all PASS" } else { "FAIL" }
    );
    Ok(CompareReport { text, all_pass })
}

/// Closed forms only, as CSV rows with `source` analytic / analytic_lb.
pub fn cmd_analytic(rc: &RunConfig) -> Result<String, CliError> {
    if rc.scenario != ScenarioKind::TwoZoneAligned {
        return Err(CliError::Config(
            "scenario: closed forms exist only for two_zone_aligned".into(),
        ));
    }
    let points: Vec<(SystemConfig, &'static str, f64)> = match &rc.sweep {
        None => {
            let (axis, value) = single_point_axis(&rc.system);
            vec![(rc.system.clone(), axis, value)]
        }
        Some(s) => s
            .values
            .iter()
            .map(|&v| Ok((apply_axis(&rc.system, s.axis, v)?, s.axis.name(), v)))
            .collect::<Result<_, risnoma_core::Error>>()
            .map_err(core_config_err)?,
    };
    let mut out = Vec::new();
    for (cfg, axis, value) in points {
        let a = AnalyticModel::new(&cfg)
            .map_err(core_config_err)?
            .evaluate();
        for (metric, source, bler) in [
            (Metric::Cu, Source::Analytic, a.cu),
            (Metric::CeuSc, Source::Analytic, a.ceu_sc),
            (Metric::CeuMrc, Source::AnalyticLb, a.ceu_mrc),
        ] {
            out.push(Row {
                axis,
                value,
                metric,
                source,
                bler,
                stderr: 0.0,
                n: 0,
                seed: 0,
            });
        }
    }
    Ok(crate::table::render_csv(&mut out))
}
