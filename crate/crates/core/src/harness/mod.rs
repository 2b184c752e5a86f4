//! Experiment harness: run configuration, the horizon-scaling benchmark,
//! closed-loop MPC and plot-data export.

mod bench;
mod config;
mod mpc;
mod plot;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::model::Problem;
use crate::solvers::scale_into_box;

pub use bench::{
    read_records, run_benchmark, solve_once, validate_solution, write_records, BenchmarkRecord,
    SolveOutcome, Validation, BENCHMARK_HEADER,
};
pub use config::{default_rho, ConfigFile, RunConfig, SolverKind, DEFAULT_DURATION, DEFAULT_MPC_DT};
pub use mpc::{run_mpc, MpcLog, MpcStep};
pub use plot::{aggregate, emit_mpc_plotdata, emit_plotdata, RuntimeRow};

/// Zero-mean normal controls with standard deviation `init_std·limit`.
///
/// For the barrier solver the draws are clipped to `±limit` and then mapped
/// into 90% of the control box so the start is strictly feasible.
pub fn initial_controls(config: &RunConfig, problem: &Problem, seed: u64) -> Result<Vec<Vector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, config.init_std).map_err(|e| Error::Config(e.to_string()))?;
    let (n, nu) = (problem.horizon(), problem.control_dim());
    let unit: Vec<Vector> = (0..n)
        .map(|_| Vector::from_fn(nu, |_, _| normal.sample(&mut rng)))
        .collect();
    let bounds = problem.constraints().and_then(|c| c.bounds().cloned());
    let limit = config.system.control_limit();
    Ok(match (config.solver, bounds) {
        (SolverKind::Barrier, Some(bounds)) => {
            let clipped: Vec<Vector> = unit.iter().map(|u| u.map(|v| v.clamp(-1.0, 1.0))).collect();
            scale_into_box(&clipped, &bounds, 0.9)
        }
        _ => unit.into_iter().map(|u| u * limit).collect(),
    })
}
