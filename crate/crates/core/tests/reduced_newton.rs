//! The scan-based step equals the regularized Newton step of the reduced
//! objective `J(u)`, computed by differencing the control gradient.

use nalgebra::{DMatrix, DVector};
use parnewton::model::{fd_jacobian, total_cost, AugmentedCost, Problem};
use parnewton::models::{make_swingup_problem, SwingupWeights, System};
use parnewton::passes::{costate_boundary, costate_scan, hamiltonian_expansion, linearize, propagation_pass, value_pass, Expansion};
use parnewton::Executor;

fn expansion(problem: &Problem, aug: &AugmentedCost, u: &DVector<f64>, alpha: f64) -> Expansion {
    let controls: Vec<DVector<f64>> = u.iter().map(|v| DVector::from_element(1, *v)).collect();
    let traj = problem.rollout(&controls).unwrap();
    let lin = linearize(problem.dynamics(), problem.cost(), aug, &traj, Executor::Sequential).unwrap();
    let lam = costate_scan(&lin, costate_boundary(problem.cost(), traj.final_state()), Executor::Sequential).unwrap();
    hamiltonian_expansion(&lin, &lam, problem.cost().terminal_hessian(traj.final_state()), alpha).unwrap()
}

fn gradient(problem: &Problem, aug: &AugmentedCost, u: &DVector<f64>) -> DVector<f64> {
    let e = expansion(problem, aug, u, 0.0);
    DVector::from_iterator(u.len(), e.stages.iter().map(|s| s.d[0]))
}

fn check(system: System, n: usize, alpha: f64) {
    let problem = make_swingup_problem(system, n, 0.1, &SwingupWeights::default_for(system)).unwrap();
    let aug = AugmentedCost::barrier(problem.constraints().unwrap().clone(), 0.1).unwrap();
    let u = DVector::from_iterator(n, (0..n).map(|t| 2.0 * ((t as f64) * 1.3).sin()));
    let g = gradient(&problem, &aug, &u);
    let cost = |u: &DVector<f64>| {
        let controls: Vec<DVector<f64>> = u.iter().map(|v| DVector::from_element(1, *v)).collect();
        let traj = problem.rollout(&controls).unwrap();
        DVector::from_element(1, total_cost(problem.cost(), &aug, &traj).unwrap())
    };
    let g_fd = fd_jacobian(cost, &u, 1e-6).transpose();
    assert!((&g - g_fd.column(0)).amax() < 1e-5 * g.amax().max(1.0), "gradient {g} vs {g_fd}");
    let h = fd_jacobian(|u| gradient(&problem, &aug, u), &u, 1e-6);
    let h = (&h + h.transpose()) * 0.5;
    let expected = -(h + DMatrix::identity(n, n) * alpha).lu().solve(&g).unwrap();

    let e = expansion(&problem, &aug, &u, alpha);
    let sol = value_pass(&e, Executor::Sequential).unwrap();
    let (_, du) = propagation_pass(&sol.law, &e, Executor::Sequential).unwrap();
    let du = DVector::from_iterator(n, du.iter().map(|d| d[0]));
    let err = (&du - &expected).amax() / expected.amax().max(1.0);
    assert!(err < 1e-5, "{system} n={n} alpha={alpha}: {du} vs {expected}");
}

#[test]
fn pendulum_step_is_reduced_newton_step() {
    check(System::Pendulum, 6, 1.0);
    check(System::Pendulum, 6, 0.01);
}

#[test]
fn cartpole_step_is_reduced_newton_step() {
    check(System::CartPole, 5, 1.0);
    check(System::CartPole, 5, 0.01);
}
