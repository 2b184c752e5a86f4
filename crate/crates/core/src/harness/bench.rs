//! Horizon-scaling benchmark: repeated seeded swing-up solves per horizon.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::inf_norm;
use crate::model::{AugmentedCost, Problem, Trajectory};
use crate::models::make_swingup_problem;
use crate::solvers::{admm_solve, barrier_augmentation, barrier_solve, first_order_residual};

use super::config::{RunConfig, SolverKind};
use super::initial_controls;

pub const BENCHMARK_HEADER: &str = "system,solver,executor,horizon,rep,wall_s,outer_iters,inner_iters,converged";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub system: String,
    pub solver: String,
    pub executor: String,
    pub horizon: usize,
    pub rep: usize,
    pub wall_s: f64,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub converged: bool,
}

/// Result of one constrained solve.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub trajectory: Trajectory,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub converged: bool,
    /// Augmentation of the last inner subproblem (barrier runs only).
    pub final_subproblem: Option<AugmentedCost>,
    pub wall_s: f64,
}

/// Solves `problem` from `controls` with the configured outer solver. Only
/// the solver call is timed.
pub fn solve_once(config: &RunConfig, problem: &Problem, controls: &[crate::linalg::Vector]) -> Result<SolveOutcome> {
    let initial = problem.rollout(controls)?;
    match config.solver {
        SolverKind::Barrier => {
            let start = Instant::now();
            let (trajectory, report) = barrier_solve(problem, &initial, &config.barrier)?;
            let wall_s = start.elapsed().as_secs_f64();
            let final_subproblem = match (report.rounds.last(), problem.constraints()) {
                (Some(round), Some(c)) => Some(barrier_augmentation(c.clone(), round.mu)?),
                _ => None,
            };
            Ok(SolveOutcome {
                trajectory,
                outer_iters: report.outer_iterations(),
                inner_iters: report.inner_iterations(),
                converged: report.converged(),
                final_subproblem,
                wall_s,
            })
        }
        SolverKind::Admm => {
            let start = Instant::now();
            let (trajectory, report) = admm_solve(problem, &initial, &config.admm)?;
            let wall_s = start.elapsed().as_secs_f64();
            Ok(SolveOutcome {
                trajectory,
                outer_iters: report.iterations,
                inner_iters: report.inner_iterations,
                converged: report.converged,
                final_subproblem: None,
                wall_s,
            })
        }
    }
}

/// Post-hoc checks of a returned trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    /// `max(0, max w)` over all stages.
    pub constraint_violation: f64,
    /// `max_t ‖x_{t+1} − f(x_t, u_t)‖∞`
    pub dynamics_defect: f64,
    /// `max_t ‖∂H_t/∂u_t‖∞` of the final barrier subproblem, if any.
    pub first_order: Option<f64>,
}

pub fn validate_solution(problem: &Problem, outcome: &SolveOutcome, config: &RunConfig) -> Result<Validation> {
    let traj = &outcome.trajectory;
    let mut violation: f64 = 0.0;
    let mut defect: f64 = 0.0;
    for t in 0..traj.horizon() {
        let (x, u) = (&traj.states()[t], &traj.controls()[t]);
        if let Some(c) = problem.constraints() {
            violation = violation.max(c.stacked(t, x, u).max());
        }
        defect = defect.max(inf_norm(&(problem.dynamics().step(t, x, u) - &traj.states()[t + 1])));
    }
    let first_order = match &outcome.final_subproblem {
        Some(aug) => Some(first_order_residual(problem, aug, traj, config.executor)?),
        None => None,
    };
    Ok(Validation {
        constraint_violation: violation.max(0.0),
        dynamics_defect: defect,
        first_order,
    })
}

fn rep_seed(seed: u64, horizon: usize, rep: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((horizon as u64) << 20)
        .wrapping_add(rep as u64)
}

/// For each horizon: one discarded warm-up solve, then `reps` timed solves
/// from seeded random controls. Solver errors produce unconverged rows.
pub fn run_benchmark(config: &RunConfig) -> Result<Vec<BenchmarkRecord>> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.horizons.len() * config.reps);
    for &n in &config.horizons {
        let problem = make_swingup_problem(config.system, n, config.bench_dt(n), &config.weights)?;
        let warm = initial_controls(config, &problem, rep_seed(config.seed, n, usize::MAX))?;
        let _ = solve_once(config, &problem, &warm);
        for rep in 0..config.reps {
            let controls = initial_controls(config, &problem, rep_seed(config.seed, n, rep))?;
            let record = match solve_once(config, &problem, &controls) {
                Ok(o) => BenchmarkRecord {
                    system: config.system.name().into(),
                    solver: config.solver.name().into(),
                    executor: config.executor.name().into(),
                    horizon: n,
                    rep,
                    wall_s: o.wall_s,
                    outer_iters: o.outer_iters,
                    inner_iters: o.inner_iters,
                    converged: o.converged,
                },
                Err(_) => BenchmarkRecord {
                    system: config.system.name().into(),
                    solver: config.solver.name().into(),
                    executor: config.executor.name().into(),
                    horizon: n,
                    rep,
                    wall_s: 0.0,
                    outer_iters: 0,
                    inner_iters: 0,
                    converged: false,
                },
            };
            records.push(record);
        }
    }
    Ok(records)
}

pub fn write_records<W: std::io::Write>(records: &[BenchmarkRecord], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(BENCHMARK_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<BenchmarkRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != BENCHMARK_HEADER {
        return Err(Error::Config(format!("unexpected benchmark header '{}'", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
