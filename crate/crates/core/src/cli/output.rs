//! CSV writers. Numbers are written in scientific notation with 17
//! significant digits so that every value round-trips exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::Scenario;
use crate::bounds::{feasible_interval, ChannelSnapshot, FeasibleInterval};
use crate::channel::{correlate, sample_rician_vector};
use crate::error::Result;
use crate::sim::{sweep_thresholds, trial_rng, OutageCurve};

const VERSION: &str = env!("RIS_SELECT_VERSION");

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_metadata(out: &mut impl Write, scenario: &Scenario) -> Result<()> {
    writeln!(out, "# ris-select {VERSION}")?;
    writeln!(out, "# seed = {}", scenario.trial.seed)?;
    writeln!(out, "# scenario:")?;
    for line in scenario.to_toml().lines() {
        if line.is_empty() {
            writeln!(out, "#")?;
        } else {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(())
}

/// Writes one outage curve with its metadata block.
pub fn write_curve_csv(
    out: &mut impl Write,
    scenario: &Scenario,
    curve: &OutageCurve,
) -> Result<()> {
    write_metadata(out, scenario)?;
    writeln!(
        out,
        "sweep_value,analytic_outage,empirical_outage,ci_halfwidth,n_trials,scheme,k,mode"
    )?;
    for p in &curve.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(p.value),
            num(p.analytic),
            num(p.estimate.p_hat),
            num(p.estimate.ci_halfwidth),
            p.estimate.n,
            curve.scheme,
            p.k,
            curve.mode
        )?;
    }
    Ok(())
}

/// One output file per SNR threshold when there are several, named
/// `<stem>_gth<value>dB.<ext>`.
pub fn output_paths(out: &Path, gamma_th_db: &[f64]) -> Vec<PathBuf> {
    if gamma_th_db.len() <= 1 {
        return vec![out.to_path_buf()];
    }
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let ext = out
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    gamma_th_db
        .iter()
        .map(|g| out.with_file_name(format!("{stem}_gth{g}dB.{ext}")))
        .collect()
}

/// Runs the scenario's sweep and writes one CSV per threshold.
pub fn run(scenario: &Scenario, out: &Path) -> Result<Vec<PathBuf>> {
    let curves = sweep_thresholds(
        &scenario.params,
        &scenario.trial,
        scenario.sweep.variable,
        &scenario.sweep.grid,
        &scenario.thresholds,
    )?;
    let paths = output_paths(out, &scenario.gamma_th_db);
    for (path, curve) in paths.iter().zip(&curves) {
        let mut w = BufWriter::new(File::create(path)?);
        write_curve_csv(&mut w, scenario, curve)?;
        w.flush()?;
        log::info!("wrote {}", path.display());
    }
    Ok(paths)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub channel_draw: usize,
    pub interval: FeasibleInterval,
}

/// Feasible ranges over independent single-group channel draws.
pub fn bounds_rows(scenario: &Scenario) -> Result<Vec<BoundsRow>> {
    let p = &scenario.params;
    let corr = p.correlation_matrix()?;
    let spec = &scenario.bounds;
    (0..spec.draws)
        .map(|i| {
            let mut rng = trial_rng(scenario.trial.seed, i);
            let h = sample_rician_vector(p.m_per_group, p.k_h, &mut rng);
            let g = sample_rician_vector(p.m_per_group, p.k_g, &mut rng);
            let snap = ChannelSnapshot::new(
                correlate(&corr, &h, p.beta_gain)?,
                correlate(&corr, &g, p.beta_gain)?,
            )?;
            let interval = feasible_interval(
                spec.target,
                p,
                &scenario.trial.budget,
                &scenario.trial.eh,
                &snap,
                spec.r_req,
            )?;
            Ok(BoundsRow {
                channel_draw: i,
                interval,
            })
        })
        .collect()
}

pub fn write_bounds_csv(
    out: &mut impl Write,
    scenario: &Scenario,
    rows: &[BoundsRow],
) -> Result<()> {
    write_metadata(out, scenario)?;
    writeln!(out, "channel_draw,lower,upper,feasible")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.channel_draw,
            num(r.interval.lower),
            num(r.interval.upper),
            r.interval.feasible
        )?;
    }
    Ok(())
}

pub fn run_bounds(scenario: &Scenario, out: &Path) -> Result<Vec<BoundsRow>> {
    let rows = bounds_rows(scenario)?;
    for r in &rows {
        if let Some(cause) = r.interval.cause {
            log::info!("draw {}: infeasible ({cause})", r.channel_draw);
        }
    }
    if rows.iter().all(|r| !r.interval.feasible) {
        log::warn!(
            "no channel draw admits a feasible range; check the transmit power and requirements"
        );
    }
    let mut w = BufWriter::new(File::create(out)?);
    write_bounds_csv(&mut w, scenario, &rows)?;
    w.flush()?;
    Ok(rows)
}
