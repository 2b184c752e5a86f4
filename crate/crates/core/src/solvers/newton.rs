//! Parallel Newton's method for the augmented, equality-constrained
//! subproblem.
//!
//! Each iteration runs the co-state, value and propagation passes, applies
//! the control step, re-rolls the states through the nonlinear dynamics and
//! accepts or rejects the candidate with a Levenberg–Marquardt style gain
//! ratio. There is no line search.

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, Vector};
use crate::model::{rollout, total_cost, AugmentedCost, Dynamics, Problem, Trajectory};
use crate::passes::{
    costate_boundary, costate_scan, hamiltonian_expansion, linearize, propagation_pass,
    value_pass, Expansion, FeedbackLaw,
};
use crate::scan::Executor;

/// Regularization beyond which the solver gives up.
pub const MAX_ALPHA: f64 = 1e12;

// Restart value when a step is rejected at α = 0.
const ALPHA_RESTART: f64 = 1e-6;

/// How a candidate trajectory is re-rolled after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepRollout {
    /// `u ← u + δu*`, then roll out the new controls.
    OpenLoop,
    /// `u_t ← ū_t + γ_t + Γ_t (x_t − x̄_t)` along the new rollout.
    #[default]
    ClosedLoop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub alpha0: f64,
    pub nu0: f64,
    /// Relative cost-change tolerance.
    pub inner_tol: f64,
    pub max_iters: usize,
    pub executor: Executor,
    pub rollout: StepRollout,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            alpha0: 1.0,
            nu0: 2.0,
            inner_tol: 1e-8,
            max_iters: 100,
            executor: Executor::parallel(),
            rollout: StepRollout::default(),
        }
    }
}

impl NewtonOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return Err(Error::InvalidOption(format!("alpha0 must be >= 0, got {}", self.alpha0)));
        }
        if !(self.nu0 > 1.0) {
            return Err(Error::InvalidOption(format!("nu0 must be > 1, got {}", self.nu0)));
        }
        if !(self.inner_tol > 0.0) {
            return Err(Error::InvalidOption(format!("inner_tol must be > 0, got {}", self.inner_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOption("max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Relative cost change or predicted decrease fell below `inner_tol`.
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Augmented cost of the nominal after this iteration.
    pub cost: f64,
    /// Regularization used to compute this iteration's step.
    pub alpha: f64,
    pub gain_ratio: f64,
    /// `max_t ‖δu_t‖∞`
    pub step_norm: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub final_cost: f64,
    pub history: Vec<IterationRecord>,
    pub termination: Termination,
}

impl NewtonReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn accepted_steps(&self) -> usize {
        self.history.iter().filter(|r| r.accepted).count()
    }
}

/// Trust-region update of the regularization.
///
/// On a positive gain ratio the step is accepted and
/// `α ← α·max(1/3, 1 − (2ρ − 1)³)`, `ν ← 2`; otherwise `α ← α·ν`, `ν ← 2ν`.
pub fn regularization_update(alpha: f64, nu: f64, gain_ratio: f64) -> (f64, f64, bool) {
    if gain_ratio > 0.0 {
        let factor = (1.0 - (2.0 * gain_ratio - 1.0).powi(3)).max(1.0 / 3.0);
        (alpha * factor, 2.0, true)
    } else {
        (alpha * nu, 2.0 * nu, false)
    }
}

/// `actual / predicted`, or `−∞` when the model predicts no decrease.
pub fn gain_ratio(actual_reduction: f64, predicted_reduction: f64) -> f64 {
    if predicted_reduction > 0.0 && actual_reduction.is_finite() {
        actual_reduction / predicted_reduction
    } else {
        f64::NEG_INFINITY
    }
}

/// Decrease of the quadratic model for the regularized step:
/// `½ Σ_t δu_tᵀ(α δu_t − d_t)`.
pub fn predicted_reduction(du: &[Vector], expansion: &Expansion) -> f64 {
    0.5 * du
        .iter()
        .zip(&expansion.stages)
        .map(|(du, s)| du.dot(&(du * expansion.alpha - &s.d)))
        .sum::<f64>()
}

fn expand(problem: &Problem, aug: &AugmentedCost, traj: &Trajectory, alpha: f64, executor: Executor) -> Result<Expansion> {
    let lin = linearize(problem.dynamics(), problem.cost(), aug, traj, executor)?;
    let boundary = costate_boundary(problem.cost(), traj.final_state());
    let costates = costate_scan(&lin, boundary, executor)?;
    hamiltonian_expansion(&lin, &costates, problem.cost().terminal_hessian(traj.final_state()), alpha)
}

/// `max_t ‖∂H_t/∂u_t‖∞` at `traj`, i.e. the gradient of the augmented
/// objective with respect to the controls.
pub fn first_order_residual(
    problem: &Problem,
    aug: &AugmentedCost,
    traj: &Trajectory,
    executor: Executor,
) -> Result<f64> {
    Ok(expand(problem, aug, traj, 0.0, executor)?.gradient_norm())
}

/// Minimizes `l_{N+1} + Σ (l_t + c_t)` subject to the dynamics, starting
/// from `initial`.
///
/// The returned trajectory is always a rollout of its controls from
/// `initial.initial_state()`.
pub fn newton_solve(
    problem: &Problem,
    aug: &AugmentedCost,
    initial: &Trajectory,
    opts: &NewtonOptions,
) -> Result<(Trajectory, NewtonReport)> {
    opts.validate()?;
    let executor = opts.executor;
    let x1 = initial.initial_state().clone();
    let mut traj = rollout(problem.dynamics(), &x1, initial.controls())?;
    let mut cost = total_cost(problem.cost(), aug, &traj)?;
    let mut alpha = opts.alpha0;
    let mut nu = opts.nu0;
    let mut history = Vec::new();
    let mut expansion: Option<Expansion> = None;
    let mut termination = Termination::MaxIterations;

    while history.len() < opts.max_iters {
        let exp = match expansion.as_mut() {
            Some(e) => {
                e.set_alpha(alpha);
                e
            }
            None => expansion.insert(expand(problem, aug, &traj, alpha, executor)?),
        };
        let step = value_pass(exp, executor)
            .and_then(|sol| propagation_pass(&sol.law, exp, executor).map(|(_, du)| (sol.law, du)));
        let (law, du) = match step {
            Ok(step) => step,
            Err(e) if e.is_regularization_failure() => {
                history.push(IterationRecord {
                    cost,
                    alpha,
                    gain_ratio: f64::NEG_INFINITY,
                    step_norm: 0.0,
                    accepted: false,
                });
                (alpha, nu) = reject(alpha, nu)?;
                continue;
            }
            Err(e) => return Err(e),
        };
        let predicted = predicted_reduction(&du, exp);
        let step_norm = du.iter().map(inf_norm).fold(0.0, f64::max);
        let scale = cost.abs().max(1.0);
        if predicted.abs() <= opts.inner_tol * scale {
            history.push(IterationRecord {
                cost,
                alpha,
                gain_ratio: 1.0,
                step_norm,
                accepted: false,
            });
            termination = Termination::Converged;
            break;
        }

        let candidate = match opts.rollout {
            StepRollout::OpenLoop => {
                let controls: Vec<Vector> = traj.controls().iter().zip(&du).map(|(u, d)| u + d).collect();
                rollout(problem.dynamics(), &x1, &controls)
            }
            StepRollout::ClosedLoop => closed_loop_rollout(problem.dynamics(), &traj, &law),
        };
        let candidate = candidate
            .and_then(|c| total_cost(problem.cost(), aug, &c).map(|j| (c, j)));
        let (ratio, candidate) = match candidate {
            Ok((c, j)) if j.is_finite() => (gain_ratio(cost - j, predicted), Some((c, j))),
            Ok(_) | Err(Error::Divergence { .. }) | Err(Error::Infeasible { .. }) => (f64::NEG_INFINITY, None),
            Err(e) => return Err(e),
        };
        let (next_alpha, next_nu, accepted) = regularization_update(alpha, nu, ratio);
        match (accepted, candidate) {
            (true, Some((c, j))) => {
                let change = (cost - j).abs();
                history.push(IterationRecord {
                    cost: j,
                    alpha,
                    gain_ratio: ratio,
                    step_norm,
                    accepted: true,
                });
                traj = c;
                cost = j;
                expansion = None;
                alpha = next_alpha;
                nu = next_nu;
                if change <= opts.inner_tol * scale {
                    termination = Termination::Converged;
                    break;
                }
            }
            _ => {
                history.push(IterationRecord {
                    cost,
                    alpha,
                    gain_ratio: ratio,
                    step_norm,
                    accepted: false,
                });
                (alpha, nu) = reject(alpha, nu)?;
            }
        }
    }

    Ok((
        traj,
        NewtonReport {
            iterations: history.len(),
            final_cost: cost,
            history,
            termination,
        },
    ))
}

/// Rolls out `u_t = ū_t + γ_t + Γ_t (x_t − x̄_t)` around `nominal`.
pub fn closed_loop_rollout(dynamics: &dyn Dynamics, nominal: &Trajectory, law: &FeedbackLaw) -> Result<Trajectory> {
    let n = nominal.horizon();
    let mut states = Vec::with_capacity(n + 1);
    let mut controls = Vec::with_capacity(n);
    let mut x = nominal.initial_state().clone();
    for t in 0..n {
        let u = &nominal.controls()[t] + &law.offsets[t] + &law.gains[t] * (&x - &nominal.states()[t]);
        let next = dynamics.step(t, &x, &u);
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { index: t + 1 });
        }
        states.push(std::mem::replace(&mut x, next));
        controls.push(u);
    }
    states.push(x);
    Trajectory::new(states, controls)
}

fn reject(alpha: f64, nu: f64) -> Result<(f64, f64)> {
    let (mut alpha, nu, _) = regularization_update(alpha, nu, f64::NEG_INFINITY);
    if alpha == 0.0 {
        alpha = ALPHA_RESTART;
    }
    if alpha > MAX_ALPHA {
        return Err(Error::Stalled { alpha });
    }
    Ok((alpha, nu))
}
