//! Plot-ready tables; no plotting is done here.
//!
//! `runtime_vs_horizon.csv`: one row per (system, solver, executor,
//! horizon) with the mean and population standard deviation of the wall
//! time and of the inner iteration count over repetitions, plus the fraction
//! of converged repetitions.
//!
//! `mpc_trajectory.csv`: time, states and controls of a closed-loop run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::bench::BenchmarkRecord;
use super::mpc::MpcLog;

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRow {
    pub system: String,
    pub solver: String,
    pub executor: String,
    pub horizon: usize,
    pub count: usize,
    pub mean_wall_s: f64,
    pub std_wall_s: f64,
    pub mean_inner_iters: f64,
    pub std_inner_iters: f64,
    pub converged_fraction: f64,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn aggregate(records: &[BenchmarkRecord]) -> Result<Vec<RuntimeRow>> {
    if records.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut groups: BTreeMap<(String, String, String, usize), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.system.clone(), r.solver.clone(), r.executor.clone(), r.horizon))
            .or_default()
            .push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((system, solver, executor, horizon), rs)| {
            let wall: Vec<f64> = rs.iter().map(|r| r.wall_s).collect();
            let inner: Vec<f64> = rs.iter().map(|r| r.inner_iters as f64).collect();
            let (mean_wall_s, std_wall_s) = mean_std(&wall);
            let (mean_inner_iters, std_inner_iters) = mean_std(&inner);
            RuntimeRow {
                system,
                solver,
                executor,
                horizon,
                count: rs.len(),
                mean_wall_s,
                std_wall_s,
                mean_inner_iters,
                std_inner_iters,
                converged_fraction: rs.iter().filter(|r| r.converged).count() as f64 / rs.len() as f64,
            }
        })
        .collect())
}

/// Writes `runtime_vs_horizon.csv` into `dir` and returns its path.
pub fn emit_plotdata(records: &[BenchmarkRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    let rows = aggregate(records)?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join("runtime_vs_horizon.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record([
        "system",
        "solver",
        "executor",
        "horizon",
        "count",
        "mean_wall_s",
        "std_wall_s",
        "mean_inner_iters",
        "std_inner_iters",
        "converged_fraction",
    ])?;
    for r in &rows {
        w.write_record([
            r.system.clone(),
            r.solver.clone(),
            r.executor.clone(),
            r.horizon.to_string(),
            r.count.to_string(),
            r.mean_wall_s.to_string(),
            r.std_wall_s.to_string(),
            r.mean_inner_iters.to_string(),
            r.std_inner_iters.to_string(),
            r.converged_fraction.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(vec![path])
}

/// Writes `mpc_trajectory.csv` (time, states, controls) into `dir`.
pub fn emit_mpc_plotdata(log: &MpcLog, dir: &Path) -> Result<PathBuf> {
    if log.steps.is_empty() {
        return Err(Error::EmptySequence);
    }
    std::fs::create_dir_all(dir)?;
    let path = dir.join("mpc_trajectory.csv");
    let mut w = csv::Writer::from_path(&path)?;
    let header = log.header();
    w.write_record(&header[..header.len() - 1])?;
    for s in &log.steps {
        let mut row = vec![s.t.to_string()];
        row.extend(s.state.iter().chain(s.control.iter()).map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(path)
}
