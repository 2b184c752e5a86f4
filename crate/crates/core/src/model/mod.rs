//! Problem data model: trajectories, the dynamics/cost/constraint
//! interfaces, augmented stage costs and derivative verification.
//!
//! All evaluators take the stage index `t` (zero-based, `0..N`) so that
//! time-varying models fit the same interface. Benchmark models ignore it.

mod augmented;
mod check;
mod traits;
mod trajectory;

pub use augmented::{AugmentedCost, Augmentation};
pub use check::{
    check_augmentation, check_constraints, check_cost, check_dynamics, fd_jacobian,
    DerivativeCheck, DerivativeReport,
};
pub use traits::{
    BoxConstraints, Constraints, Cost, Dynamics, DynamicsHessians, DynamicsJacobians,
    QuadraticCost, StageDerivatives,
};
pub use trajectory::{rollout, total_cost, Problem, Trajectory};
