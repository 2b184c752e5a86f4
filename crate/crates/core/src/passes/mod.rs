//! The three scan passes of one Newton iteration.
//!
//! 1. [`costate_pass`]: reverse scan of affine co-state maps.
//! 2. [`value_pass`]: reverse scan of conditional value functions kept in
//!    dual form, followed by the affine feedback law.
//! 3. [`propagation_pass`]: forward scan of the closed-loop linearized
//!    dynamics giving the Newton step `(δx*, δu*)`.
//!
//! Stage evaluations (`linearize`) are independent across stages and run
//! on the rayon pool under the parallel executor.

mod costate;
mod expansion;
mod propagation;
mod value;

use rayon::prelude::*;

use crate::error::Result;
use crate::model::{
    AugmentedCost, Cost, Dynamics, DynamicsHessians, DynamicsJacobians, StageDerivatives,
    Trajectory,
};
use crate::scan::Executor;

pub use costate::{costate_boundary, costate_combine, costate_elements, costate_pass, costate_scan, CostateElement};
pub use expansion::{hamiltonian_expansion, Expansion, StageExpansion};
pub use propagation::{propagation_pass, rollout_combine, RolloutElement};
pub use value::{
    feedback_law, value_combine, value_element_init, value_pass, FeedbackLaw, ValueElement,
    ValueSolution,
};

/// Everything a Newton iteration needs from the models at one stage of the
/// nominal trajectory.
#[derive(Debug, Clone)]
pub struct StageLinearization {
    pub cost: StageDerivatives,
    pub aug: StageDerivatives,
    pub jac: DynamicsJacobians,
    pub hess: DynamicsHessians,
}

/// Evaluates cost, augmentation and dynamics derivatives at every stage.
pub fn linearize(
    dynamics: &dyn Dynamics,
    cost: &dyn Cost,
    aug: &AugmentedCost,
    traj: &Trajectory,
    executor: Executor,
) -> Result<Vec<StageLinearization>> {
    let eval = |t: usize| -> Result<StageLinearization> {
        let x = &traj.states()[t];
        let u = &traj.controls()[t];
        Ok(StageLinearization {
            cost: cost.stage_derivatives(t, x, u),
            aug: aug.derivatives(t, x, u)?,
            jac: dynamics.jacobians(t, x, u),
            hess: dynamics.hessians(t, x, u),
        })
    };
    let n = traj.horizon();
    if executor.is_parallel() {
        (0..n).into_par_iter().map(eval).collect()
    } else {
        (0..n).map(eval).collect()
    }
}

pub(crate) fn map_stages<T, F>(n: usize, executor: Executor, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if executor.is_parallel() {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}
