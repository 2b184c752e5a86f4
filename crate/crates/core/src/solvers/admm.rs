//! ADMM outer loop: a penalized Newton solve for the trajectory, a closed-form
//! projection for the consensus variable and a dual ascent step.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, Vector};
use crate::model::{AugmentedCost, Constraints, Problem, Trajectory};

use super::newton::{newton_solve, NewtonOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmOptions {
    pub rho: f64,
    /// Threshold on `‖r_p‖∞` and `‖r_d‖∞`.
    pub residual_tol: f64,
    pub max_iters: usize,
    pub newton: NewtonOptions,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        AdmmOptions {
            rho: 1.0,
            residual_tol: 1e-2,
            max_iters: 500,
            newton: NewtonOptions::default(),
        }
    }
}

impl AdmmOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidOption(format!("rho must be > 0, got {}", self.rho)));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::InvalidOption(format!(
                "residual_tol must be > 0, got {}",
                self.residual_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOption("ADMM max_iters must be >= 1".into()));
        }
        self.newton.validate()
    }
}

/// Consensus variables, scaled multipliers and the latest residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub z: Vec<Vector>,
    pub v: Vec<Vector>,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmReport {
    pub iterations: usize,
    pub inner_iterations: usize,
    pub converged: bool,
    pub state: AdmmState,
    /// `(‖r_p‖∞, ‖r_d‖∞)` after each outer iteration.
    pub residuals: Vec<(f64, f64)>,
}

pub fn admm_augmentation(
    constraints: Arc<dyn Constraints>,
    rho: f64,
    z: Vec<Vector>,
    v: Vec<Vector>,
) -> Result<AugmentedCost> {
    AugmentedCost::admm(constraints, rho, z, v)
}

/// Euclidean projection onto `{y ≤ 0}`.
pub fn project_box(point: &Vector) -> Vector {
    point.map(|p| p.min(0.0))
}

fn stacked(constraints: &dyn Constraints, traj: &Trajectory) -> Vec<Vector> {
    (0..traj.horizon())
        .map(|t| constraints.stacked(t, &traj.states()[t], &traj.controls()[t]))
        .collect()
}

fn max_norm<'a>(vs: impl Iterator<Item = Vector>) -> f64 {
    vs.map(|v| inf_norm(&v)).fold(0.0, f64::max)
}

/// Runs ADMM from `initial` with `z = Π(w(initial))`, `v = 0`.
///
/// Hitting `max_iters` is reported through `AdmmReport::converged`, not as
/// an error.
pub fn admm_solve(problem: &Problem, initial: &Trajectory, opts: &AdmmOptions) -> Result<(Trajectory, AdmmReport)> {
    let start = AdmmState {
        z: Vec::new(),
        v: Vec::new(),
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
    };
    admm_solve_from(problem, initial, start, opts)
}

/// Like [`admm_solve`] but resumes from the given consensus variables and
/// multipliers. Empty `z`/`v` select the default initialization.
pub fn admm_solve_from(
    problem: &Problem,
    initial: &Trajectory,
    state: AdmmState,
    opts: &AdmmOptions,
) -> Result<(Trajectory, AdmmReport)> {
    opts.validate()?;
    let constraints = problem
        .constraints()
        .cloned()
        .ok_or_else(|| Error::InvalidOption("ADMM needs a constrained problem".into()))?;
    let rho = opts.rho;
    let mut traj = problem.rollout(initial.controls())?;
    let n = traj.horizon();
    let dim = constraints.dim();
    let (mut z, mut v) = if state.z.is_empty() {
        let z: Vec<Vector> = stacked(constraints.as_ref(), &traj).iter().map(project_box).collect();
        (z, vec![Vector::zeros(dim); n])
    } else {
        if state.z.len() != n || state.v.len() != n {
            return Err(Error::Dimension {
                what: "ADMM warm-start state",
                expected: n,
                got: state.z.len().min(state.v.len()),
            });
        }
        (state.z, state.v)
    };

    let mut residuals = Vec::new();
    let mut inner = 0;
    let mut converged = false;
    let (mut rp, mut rd) = (f64::INFINITY, f64::INFINITY);
    while residuals.len() < opts.max_iters {
        let aug = admm_augmentation(constraints.clone(), rho, z.clone(), v.clone())?;
        let (next, report) = newton_solve(problem, &aug, &traj, &opts.newton)?;
        inner += report.iterations;
        traj = next;

        let w = stacked(constraints.as_ref(), &traj);
        let z_new: Vec<Vector> = w.iter().zip(&v).map(|(w, v)| project_box(&(w + v / rho))).collect();
        for ((v, w), z) in v.iter_mut().zip(&w).zip(&z_new) {
            *v += (w - z) * rho;
        }
        rp = max_norm(w.iter().zip(&z_new).map(|(w, z)| w - z));
        rd = max_norm(z_new.iter().zip(&z).map(|(a, b)| a - b));
        z = z_new;
        residuals.push((rp, rd));
        if rp <= opts.residual_tol && rd <= opts.residual_tol {
            converged = true;
            break;
        }
    }

    Ok((
        traj,
        AdmmReport {
            iterations: residuals.len(),
            inner_iterations: inner,
            converged,
            state: AdmmState {
                z,
                v,
                primal_residual: rp,
                dual_residual: rd,
            },
            residuals,
        },
    ))
}
