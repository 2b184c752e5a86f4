//! Closed-loop MPC simulation: re-solve a fixed-horizon swing-up problem at
//! every control step from the measured state, apply the first control.

use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::models::{make_swingup_problem, System};
use crate::model::{Problem, Trajectory};
use crate::solvers::{admm_solve, barrier_solve};

use super::config::{RunConfig, SolverKind};
use super::initial_controls;

/// One row per control step.
#[derive(Debug, Clone, PartialEq)]
pub struct MpcStep {
    pub t: f64,
    /// Measured state before the control is applied.
    pub state: Vector,
    pub control: Vector,
    pub solve_s: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpcLog {
    pub system: System,
    pub steps: Vec<MpcStep>,
    /// State after the last control step.
    pub final_state: Vector,
}

impl MpcLog {
    pub fn max_abs_control(&self) -> f64 {
        self.steps.iter().map(|s| s.control.amax()).fold(0.0, f64::max)
    }

    pub fn failed_steps(&self) -> usize {
        self.steps.iter().filter(|s| !s.converged).count()
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t_s".to_string()];
        h.extend(self.system.state_names().iter().map(|s| s.to_string()));
        h.extend(self.system.control_names().iter().map(|s| s.to_string()));
        h.push("solve_s".into());
        h
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_to<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        w.write_record(self.header())?;
        for s in &self.steps {
            let mut row = vec![format!("{}", s.t)];
            row.extend(s.state.iter().chain(s.control.iter()).map(|v| format!("{v}")));
            row.push(format!("{}", s.solve_s));
            w.write_record(&row)?;
        }
        Ok(())
    }
}

fn solve(problem: &Problem, warm: &[Vector], config: &RunConfig) -> Result<(Trajectory, bool)> {
    let initial = problem.rollout(warm)?;
    match config.solver {
        SolverKind::Barrier => {
            let (traj, report) = barrier_solve(problem, &initial, &config.barrier)?;
            Ok((traj, report.converged()))
        }
        SolverKind::Admm => {
            let (traj, report) = admm_solve(problem, &initial, &config.admm)?;
            Ok((traj, report.converged))
        }
    }
}

/// Simulates `mpc_steps` control steps of length `mpc_dt` with an
/// `mpc_horizon`-step prediction model identical to the plant.
///
/// Solver failures are logged as unconverged steps; the plant then receives
/// the shifted previous plan.
pub fn run_mpc(config: &RunConfig) -> Result<MpcLog> {
    config.validate()?;
    let system = config.system;
    let dt = config.mpc_dt();
    let limit = system.control_limit();
    let template = make_swingup_problem(system, config.mpc_horizon, dt, &config.weights)?;
    let plant = template.dynamics();
    let mut x = match &config.initial_state {
        Some(x0) => Vector::from_column_slice(x0),
        None => system.mpc_start(),
    };
    if x.len() != system.state_dim() {
        return Err(Error::Config(format!(
            "initial_state needs {} components, got {}",
            system.state_dim(),
            x.len()
        )));
    }

    let mut warm = initial_controls(config, &template, config.seed)?;
    let mut steps = Vec::with_capacity(config.mpc_steps);
    for k in 0..config.mpc_steps {
        let problem = template.with_initial_state(x.clone())?;
        let start = Instant::now();
        let result = solve(&problem, &warm, config);
        let solve_s = start.elapsed().as_secs_f64();
        let (plan, converged) = match result {
            Ok((traj, converged)) => (traj.controls().to_vec(), converged),
            Err(_) => (warm.clone(), false),
        };
        // actuator saturation; only ADMM plans can sit marginally outside the box
        let control = plan[0].map(|u| u.clamp(-limit, limit));
        steps.push(MpcStep {
            t: k as f64 * dt,
            state: x.clone(),
            control: control.clone(),
            solve_s,
            converged,
        });
        x = plant.step(k, &x, &control);
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { index: k + 1 });
        }
        let mut next = plan[1..].to_vec();
        next.push(plan[plan.len() - 1].clone());
        warm = next;
    }
    Ok(MpcLog {
        system,
        steps,
        final_state: x,
    })
}
