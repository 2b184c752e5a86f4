//! Python bindings: swing-up solves, closed-loop MPC and the scan span probe.
//!
//! Trajectories come back as nested lists (`states[t][i]`), so the module has
//! no numpy dependency; wrap them with `numpy.asarray` as needed.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use parnewton::harness::{initial_controls, run_mpc, solve_once, RunConfig, SolverKind};
use parnewton::linalg::Vector;
use parnewton::models::{make_swingup_problem, System};
use parnewton::{total_cost, AugmentedCost, Error, Executor};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::InvalidOption(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn rows(vs: &[Vector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.as_slice().to_vec()).collect()
}

fn config(system: &str, solver: &str, executor: &str) -> parnewton::Result<RunConfig> {
    let system: System = system.parse()?;
    let solver: SolverKind = solver.parse()?;
    let mut c = RunConfig::new(system, solver);
    c.set_executor(executor.parse::<Executor>()?);
    Ok(c)
}

/// Solves one swing-up problem from seeded random controls.
///
/// Returns a dict with `states`, `controls`, `cost`, `outer_iters`,
/// `inner_iters`, `converged` and `wall_s`. `dt` defaults to 5 s / horizon.
#[pyfunction]
#[pyo3(signature = (system="pendulum", solver="barrier", horizon=100, dt=None, seed=0, executor="parallel"))]
fn solve<'py>(
    py: Python<'py>,
    system: &str,
    solver: &str,
    horizon: usize,
    dt: Option<f64>,
    seed: u64,
    executor: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mut c = config(system, solver, executor).map_err(to_py_err)?;
    c.dt = dt;
    c.horizons = vec![horizon];
    c.validate().map_err(to_py_err)?;
    let (outcome, cost) = py
        .detach(|| {
            let problem = make_swingup_problem(c.system, horizon, c.bench_dt(horizon), &c.weights)?;
            let controls = initial_controls(&c, &problem, seed)?;
            let outcome = solve_once(&c, &problem, &controls)?;
            let cost = total_cost(problem.cost(), &AugmentedCost::zero(), &outcome.trajectory)?;
            Ok((outcome, cost))
        })
        .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("states", rows(outcome.trajectory.states()))?;
    d.set_item("controls", rows(outcome.trajectory.controls()))?;
    d.set_item("cost", cost)?;
    d.set_item("outer_iters", outcome.outer_iters)?;
    d.set_item("inner_iters", outcome.inner_iters)?;
    d.set_item("converged", outcome.converged)?;
    d.set_item("wall_s", outcome.wall_s)?;
    Ok(d)
}

/// Closed-loop MPC at `dt` (default 0.01 s) with a `horizon`-step plan.
///
/// Returns a dict with `t`, `states`, `controls`, `solve_s`, `converged`
/// (one entry per step) and `final_state`.
#[pyfunction]
#[pyo3(signature = (system="pendulum", solver="barrier", steps=400, horizon=60, dt=None, x0=None, seed=0, executor="sequential"))]
#[allow(clippy::too_many_arguments)]
fn mpc<'py>(
    py: Python<'py>,
    system: &str,
    solver: &str,
    steps: usize,
    horizon: usize,
    dt: Option<f64>,
    x0: Option<Vec<f64>>,
    seed: u64,
    executor: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mut c = config(system, solver, executor).map_err(to_py_err)?;
    c.mpc_steps = steps;
    c.mpc_horizon = horizon;
    c.dt = dt;
    c.initial_state = x0;
    c.seed = seed;
    let log = py.detach(|| run_mpc(&c)).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("t", log.steps.iter().map(|s| s.t).collect::<Vec<_>>())?;
    d.set_item("states", log.steps.iter().map(|s| s.state.as_slice().to_vec()).collect::<Vec<_>>())?;
    d.set_item("controls", log.steps.iter().map(|s| s.control.as_slice().to_vec()).collect::<Vec<_>>())?;
    d.set_item("solve_s", log.steps.iter().map(|s| s.solve_s).collect::<Vec<_>>())?;
    d.set_item("converged", log.steps.iter().map(|s| s.converged).collect::<Vec<_>>())?;
    d.set_item("final_state", log.final_state.as_slice().to_vec())?;
    Ok(d)
}

/// Longest chain of dependent combines in the parallel scan of `n` elements.
#[pyfunction]
fn scan_depth_probe(n: usize) -> usize {
    parnewton::scan_depth_probe(n)
}

#[pymodule]
fn parnewton_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(mpc, m)?)?;
    m.add_function(wrap_pyfunction!(scan_depth_probe, m)?)?;
    Ok(())
}
