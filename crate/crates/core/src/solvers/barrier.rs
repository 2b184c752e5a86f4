//! Interior-point outer loop: a decreasing sequence of log-barrier
//! subproblems, each solved by the Newton method and warm-started from the
//! previous solution.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::model::{AugmentedCost, BoxConstraints, Constraints, Problem, Trajectory};

use super::newton::{newton_solve, NewtonOptions, NewtonReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierOptions {
    pub mu0: f64,
    /// Multiplicative decrease of `μ` per round, in `(0, 1)`.
    pub zeta: f64,
    /// Rounds continue while `μ > mu_tol`.
    pub mu_tol: f64,
    pub newton: NewtonOptions,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            mu0: 0.1,
            zeta: 0.2,
            mu_tol: 1e-4,
            newton: NewtonOptions::default(),
        }
    }
}

impl BarrierOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return Err(Error::InvalidOption(format!("mu0 must be > 0, got {}", self.mu0)));
        }
        if !(self.zeta > 0.0 && self.zeta < 1.0) {
            return Err(Error::InvalidOption(format!("zeta must lie in (0, 1), got {}", self.zeta)));
        }
        if !(self.mu_tol > 0.0) {
            return Err(Error::InvalidOption(format!("mu_tol must be > 0, got {}", self.mu_tol)));
        }
        self.newton.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierRound {
    pub mu: f64,
    pub newton: NewtonReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierReport {
    pub rounds: Vec<BarrierRound>,
    /// `μ` after the last decrease; at most `mu_tol`.
    pub final_mu: f64,
}

impl BarrierReport {
    pub fn outer_iterations(&self) -> usize {
        self.rounds.len()
    }

    pub fn inner_iterations(&self) -> usize {
        self.rounds.iter().map(|r| r.newton.iterations).sum()
    }

    /// Every inner solve reached its tolerance.
    pub fn converged(&self) -> bool {
        self.rounds.iter().all(|r| r.newton.converged())
    }
}

pub fn barrier_augmentation(constraints: Arc<dyn Constraints>, mu: f64) -> Result<AugmentedCost> {
    AugmentedCost::barrier(constraints, mu)
}

/// All `(stage, component, value)` with `w ≥ 0` along `traj`.
pub fn constraint_violations(constraints: &dyn Constraints, traj: &Trajectory) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for t in 0..traj.horizon() {
        let w = constraints.stacked(t, &traj.states()[t], &traj.controls()[t]);
        for (m, &v) in w.iter().enumerate() {
            if !(v < 0.0) {
                out.push((t, m, v));
            }
        }
    }
    out
}

/// Maps controls in `[-1, 1]` into `fraction` of the control box, centered.
pub fn scale_into_box(unit: &[Vector], bounds: &BoxConstraints, fraction: f64) -> Vec<Vector> {
    match bounds.control_bounds() {
        None => unit.to_vec(),
        Some((lb, ub)) => {
            let mid = (lb + ub) * 0.5;
            let half = (ub - lb) * (0.5 * fraction);
            unit.iter().map(|u| &mid + half.component_mul(u)).collect()
        }
    }
}

/// Runs barrier rounds `μ0, ζμ0, ζ²μ0, …` while `μ > mu_tol`.
///
/// `initial` must be strictly feasible; otherwise an `Infeasible` error
/// names the first violated component.
pub fn barrier_solve(
    problem: &Problem,
    initial: &Trajectory,
    opts: &BarrierOptions,
) -> Result<(Trajectory, BarrierReport)> {
    opts.validate()?;
    let constraints = problem
        .constraints()
        .cloned()
        .ok_or_else(|| Error::InvalidOption("barrier method needs a constrained problem".into()))?;
    let start = problem.rollout(initial.controls())?;
    if let Some(&(stage, component, value)) = constraint_violations(constraints.as_ref(), &start).first() {
        return Err(Error::Infeasible {
            stage,
            component,
            value,
        });
    }

    let mut traj = start;
    let mut mu = opts.mu0;
    let mut rounds = Vec::new();
    while mu > opts.mu_tol {
        let aug = barrier_augmentation(constraints.clone(), mu)?;
        let (next, report) = newton_solve(problem, &aug, &traj, &opts.newton)?;
        traj = next;
        rounds.push(BarrierRound { mu, newton: report });
        mu *= opts.zeta;
    }
    Ok((traj, BarrierReport { rounds, final_mu: mu }))
}
