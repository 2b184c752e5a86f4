//! Iterative Newton method and the two constrained outer loops built on it.

mod admm;
mod barrier;
mod newton;

pub use admm::{admm_augmentation, admm_solve, admm_solve_from, project_box, AdmmOptions, AdmmReport, AdmmState};
pub use barrier::{
    barrier_augmentation, barrier_solve, constraint_violations, scale_into_box, BarrierOptions,
    BarrierReport, BarrierRound,
};
pub use newton::{
    closed_loop_rollout, first_order_residual, gain_ratio, newton_solve, predicted_reduction, regularization_update,
    IterationRecord, NewtonOptions, NewtonReport, StepRollout, Termination, MAX_ALPHA,
};
