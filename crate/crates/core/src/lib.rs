//! Parallel-in-time Newton's method for constrained nonlinear trajectory
//! optimization.
//!
//! One Newton iteration is expressed as three associative scans over the
//! horizon: a reverse co-state scan, a reverse value-function scan in dual
//! form, and a forward closed-loop state propagation scan. Every scan runs
//! under either a sequential fold or a work-efficient parallel tree, so the
//! span of an iteration is logarithmic in the horizon length.
//!
//! Constrained problems are handled by two outer loops that each call
//! [`newton_solve`] on an augmented subproblem:
//!
//! - [`barrier_solve`]: primal log-barrier interior point.
//! - [`admm_solve`]: ADMM with a projected consensus variable.
//!
//! Benchmark models (torque-limited pendulum, force-limited cart-pole), an
//! MPC simulation loop and a horizon-scaling benchmark harness live in
//! [`models`] and [`harness`].

// `!(x > 0.0)` is used on purpose so that NaN fails option checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fd;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod models;
pub mod passes;
pub mod scan;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{
    check_augmentation, check_constraints, check_cost, check_dynamics, rollout, total_cost,
    AugmentedCost, Augmentation, BoxConstraints, Constraints, Cost, DerivativeReport, Dynamics,
    DynamicsHessians, DynamicsJacobians, Problem, QuadraticCost, StageDerivatives, Trajectory,
};
pub use passes::{
    costate_pass, hamiltonian_expansion, propagation_pass, value_pass, CostateElement,
    FeedbackLaw, RolloutElement, StageExpansion, ValueElement, ValueSolution,
};
pub use scan::{scan, scan_depth_probe, try_scan, Executor, ScanDirection};
pub use solvers::{
    admm_augmentation, admm_solve, barrier_augmentation, barrier_solve, first_order_residual,
    newton_solve, project_box, AdmmOptions, AdmmReport, AdmmState, BarrierOptions, BarrierReport,
    NewtonOptions, NewtonReport, Termination,
};
