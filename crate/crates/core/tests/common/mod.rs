//! Random problem generators and small dense oracles shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use parnewton::linalg::{Mat, Vector};
use parnewton::model::{Dynamics, DynamicsHessians, DynamicsJacobians, Problem, QuadraticCost};
use parnewton::passes::{CostateElement, Expansion, RolloutElement, StageExpansion, ValueElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-scale..scale))
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-scale..scale))
}

/// `GᵀG + shift·I`, symmetric positive (semi)definite for `shift ≥ 0`.
pub fn spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Mat {
    let g = uniform(rng, n, n, 1.0);
    g.transpose() * g + Mat::identity(n, n) * shift
}

/// `x' = A x + B u + ε sin(G [x; u])`, with exact first and second
/// derivatives. `ε = 0` gives linear dynamics.
pub struct SineDynamics {
    pub a: Mat,
    pub b: Mat,
    pub g: Mat,
    pub eps: f64,
}

impl SineDynamics {
    pub fn random(rng: &mut ChaCha8Rng, nx: usize, nu: usize, eps: f64) -> Self {
        // contractive A keeps long-horizon sensitivities bounded
        let a = Mat::identity(nx, nx) * 0.9 + uniform(rng, nx, nx, 0.05);
        SineDynamics {
            a,
            b: uniform(rng, nx, nu, 0.5),
            g: uniform(rng, nx, nx + nu, 1.0),
            eps,
        }
    }

    fn arg(&self, x: &Vector, u: &Vector) -> Vector {
        let nx = x.len();
        &self.g.columns(0, nx) * x + &self.g.columns(nx, u.len()) * u
    }
}

impl Dynamics for SineDynamics {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn control_dim(&self) -> usize {
        self.b.ncols()
    }

    fn step(&self, _t: usize, x: &Vector, u: &Vector) -> Vector {
        &self.a * x + &self.b * u + self.arg(x, u).map(f64::sin) * self.eps
    }

    fn jacobians(&self, _t: usize, x: &Vector, u: &Vector) -> DynamicsJacobians {
        let nx = x.len();
        let c = self.arg(x, u).map(f64::cos) * self.eps;
        let scaled = Mat::from_diagonal(&c) * &self.g;
        DynamicsJacobians {
            fx: &self.a + scaled.columns(0, nx),
            fu: &self.b + scaled.columns(nx, u.len()),
        }
    }

    fn hessians(&self, _t: usize, x: &Vector, u: &Vector) -> DynamicsHessians {
        let (nx, nu) = (x.len(), u.len());
        let s = self.arg(x, u).map(f64::sin);
        let mut h = DynamicsHessians::zeros(nx, nu);
        for k in 0..nx {
            let row = self.g.row(k).transpose();
            let full = &row * row.transpose() * (-self.eps * s[k]);
            h.xx[k] = full.view((0, 0), (nx, nx)).into_owned();
            h.uu[k] = full.view((nx, nx), (nu, nu)).into_owned();
            h.xu[k] = full.view((0, nx), (nx, nu)).into_owned();
        }
        h
    }
}

/// Random tracking problem with `SineDynamics`, optional control box.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, nx: usize, nu: usize, eps: f64, limit: Option<f64>) -> Problem {
    let dynamics = SineDynamics::random(rng, nx, nu, eps);
    let q = spd(rng, nx, 0.5) * 0.1;
    let r = spd(rng, nu, 0.5) * 0.1;
    let qf = spd(rng, nx, 1.0);
    let goal = uniform_vec(rng, nx, 1.0);
    let cost = QuadraticCost::new(q, r, qf).with_goal(goal);
    let constraints = limit.map(|l| {
        Arc::new(parnewton::BoxConstraints::symmetric_control(nx, nu, l).unwrap()) as Arc<dyn parnewton::Constraints>
    });
    let x1 = uniform_vec(rng, nx, 1.0);
    Problem::new(Arc::new(dynamics), Arc::new(cost), constraints, n, x1).unwrap()
}

pub fn random_controls(rng: &mut ChaCha8Rng, n: usize, nu: usize, scale: f64) -> Vec<Vector> {
    (0..n).map(|_| uniform_vec(rng, nu, scale)).collect()
}

/// A well-posed random linear-quadratic Newton subproblem: `P ⪰ 0` and
/// `R̃ ≻ 0`, with `M` small enough that the stage Hessian stays PSD.
pub fn random_expansion(rng: &mut ChaCha8Rng, n: usize, nx: usize, nu: usize, alpha: f64) -> Expansion {
    let stages = (0..n)
        .map(|_| {
            let p = spd(rng, nx, 1.0);
            let r = spd(rng, nu, 1.0);
            let m = uniform(rng, nx, nu, 0.3);
            StageExpansion {
                r_reg: &r + Mat::identity(nu, nu) * alpha,
                p,
                r,
                m,
                d: uniform_vec(rng, nu, 1.0),
                fx: Mat::identity(nx, nx) + uniform(rng, nx, nx, 0.3),
                fu: uniform(rng, nx, nu, 1.0),
            }
        })
        .collect();
    Expansion {
        stages,
        terminal: spd(rng, nx, 1.0),
        alpha,
    }
}

/// Dense solution of the equality-constrained QP
/// `min Σ ½[δx;δu]ᵀ[P M; Mᵀ R̃][δx;δu] + dᵀδu + ½δx_{N+1}ᵀP_{N+1}δx_{N+1}`
/// s.t. `δx_1 = 0`, `δx_{t+1} = F_x δx_t + F_u δu_t`, via its KKT system.
pub fn dense_kkt(exp: &Expansion) -> (Vec<Vector>, Vec<Vector>) {
    let n = exp.horizon();
    let nx = exp.state_dim();
    let nu = exp.stages[0].fu.ncols();
    let nz = (n + 1) * nx + n * nu;
    let ne = (n + 1) * nx;
    let xi = |t: usize| t * nx;
    let ui = |t: usize| (n + 1) * nx + t * nu;
    let mut h = DMatrix::zeros(nz, nz);
    let mut g = DVector::zeros(nz);
    let mut e = DMatrix::zeros(ne, nz);
    for (t, s) in exp.stages.iter().enumerate() {
        h.view_mut((xi(t), xi(t)), (nx, nx)).copy_from(&s.p);
        h.view_mut((ui(t), ui(t)), (nu, nu)).copy_from(&s.r_reg);
        h.view_mut((xi(t), ui(t)), (nx, nu)).copy_from(&s.m);
        h.view_mut((ui(t), xi(t)), (nu, nx)).copy_from(&s.m.transpose());
        g.rows_mut(ui(t), nu).copy_from(&s.d);
        // row block t+1: δx_{t+1} − F_x δx_t − F_u δu_t = 0
        let r = (t + 1) * nx;
        e.view_mut((r, xi(t + 1)), (nx, nx)).copy_from(&Mat::identity(nx, nx));
        e.view_mut((r, xi(t)), (nx, nx)).copy_from(&(-&s.fx));
        e.view_mut((r, ui(t)), (nx, nu)).copy_from(&(-&s.fu));
    }
    h.view_mut((xi(n), xi(n)), (nx, nx)).copy_from(&exp.terminal);
    e.view_mut((0, 0), (nx, nx)).copy_from(&Mat::identity(nx, nx));

    let mut kkt = DMatrix::zeros(nz + ne, nz + ne);
    kkt.view_mut((0, 0), (nz, nz)).copy_from(&h);
    kkt.view_mut((0, nz), (nz, ne)).copy_from(&e.transpose());
    kkt.view_mut((nz, 0), (ne, nz)).copy_from(&e);
    let mut rhs = DVector::zeros(nz + ne);
    rhs.rows_mut(0, nz).copy_from(&(-g));
    let sol = kkt.lu().solve(&rhs).expect("KKT system is nonsingular");
    let dx = (0..=n).map(|t| sol.rows(xi(t), nx).into_owned()).collect();
    let du = (0..n).map(|t| sol.rows(ui(t), nu).into_owned()).collect();
    (dx, du)
}

pub fn random_costate_element(rng: &mut ChaCha8Rng, nx: usize) -> CostateElement {
    CostateElement {
        dl: uniform_vec(rng, nx, 1.0),
        dc: uniform_vec(rng, nx, 1.0),
        df: uniform(rng, nx, nx, 1.0),
    }
}

pub fn random_rollout_element(rng: &mut ChaCha8Rng, nx: usize) -> RolloutElement {
    RolloutElement {
        f: uniform(rng, nx, nx, 1.0),
        e: uniform_vec(rng, nx, 1.0),
    }
}

/// Value element with PSD `Y`, `C` so every `I + C Y` is invertible.
pub fn random_value_element(rng: &mut ChaCha8Rng, nx: usize) -> ValueElement {
    ValueElement {
        a: uniform(rng, nx, nx, 1.0),
        y: spd(rng, nx, 0.1),
        c: spd(rng, nx, 0.1),
        eta: uniform_vec(rng, nx, 1.0),
        b: uniform_vec(rng, nx, 1.0),
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Largest entrywise difference over two matrix sequences, relative to the
/// largest entry (floored at 1).
pub fn seq_rel_err<'a, I>(a: I, b: I) -> f64
where
    I: IntoIterator<Item = &'a Mat>,
{
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (x, y) in a.into_iter().zip(b) {
        diff = diff.max((x - y).amax());
        scale = scale.max(x.amax()).max(y.amax());
    }
    diff / scale
}

pub fn vec_seq_rel_err(a: &[Vector], b: &[Vector]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (x, y) in a.iter().zip(b) {
        diff = diff.max((x - y).amax());
        scale = scale.max(x.amax()).max(y.amax());
    }
    diff / scale
}

// ---------------------------------------------------------------------------
// Checks shared with the acceptance runner. Each returns the worst error seen.

use parnewton::passes::{
    costate_boundary, costate_combine, costate_scan, hamiltonian_expansion, linearize, propagation_pass,
    rollout_combine, value_combine, value_pass,
};
use parnewton::{newton_solve, AugmentedCost, Executor, NewtonOptions};

pub const EQUIVALENCE_HORIZONS: [usize; 7] = [2, 3, 7, 16, 33, 64, 100];

#[derive(Debug, Default, Clone, Copy)]
pub struct EquivalenceErrors {
    pub costate: f64,
    pub value: f64,
    pub propagation: f64,
    pub newton_cost: f64,
    /// Problems where the two executors disagreed on convergence.
    pub convergence_mismatches: usize,
}

/// Runs every pass and a full Newton solve under both executors on `count`
/// random problems.
pub fn executor_equivalence(count: usize, seed: u64) -> EquivalenceErrors {
    let mut rng = rng(seed);
    let mut out = EquivalenceErrors::default();
    let par = Executor::parallel_always();
    let seq = Executor::Sequential;
    for k in 0..count {
        let n = EQUIVALENCE_HORIZONS[k % EQUIVALENCE_HORIZONS.len()];
        let nx = rng.random_range(1..=3);
        let nu = rng.random_range(1..=3);
        let barrier = k % 2 == 1;
        let problem = random_problem(&mut rng, n, nx, nu, 0.2, barrier.then_some(1.0));
        let aug = match problem.constraints() {
            Some(c) => AugmentedCost::barrier(c.clone(), 0.1).unwrap(),
            None => AugmentedCost::zero(),
        };
        let controls = random_controls(&mut rng, n, nu, 0.5);
        let traj = problem.rollout(&controls).unwrap();

        // smallest α in 1, 4, 16, … for which the subproblem is well posed
        let mut alpha = 1.0;
        let run = |ex: Executor, alpha: f64| {
            let lin = linearize(problem.dynamics(), problem.cost(), &aug, &traj, ex).unwrap();
            let lam = costate_scan(&lin, costate_boundary(problem.cost(), traj.final_state()), ex).unwrap();
            let exp =
                hamiltonian_expansion(&lin, &lam, problem.cost().terminal_hessian(traj.final_state()), alpha).unwrap();
            let sol = value_pass(&exp, ex)?;
            let (dx, du) = propagation_pass(&sol.law, &exp, ex).unwrap();
            Ok::<_, parnewton::Error>((lam, sol, dx, du))
        };
        while run(seq, alpha).is_err() {
            alpha *= 4.0;
        }
        let (lam_s, sol_s, dx_s, du_s) = run(seq, alpha).unwrap();
        let (lam_p, sol_p, dx_p, du_p) = run(par, alpha).unwrap();
        out.costate = out.costate.max(vec_seq_rel_err(&lam_s, &lam_p));
        let value = seq_rel_err(&sol_s.s_mat, &sol_p.s_mat)
            .max(vec_seq_rel_err(&sol_s.s_vec, &sol_p.s_vec))
            .max(seq_rel_err(&sol_s.law.gains, &sol_p.law.gains))
            .max(vec_seq_rel_err(&sol_s.law.offsets, &sol_p.law.offsets));
        out.value = out.value.max(value);
        out.propagation = out
            .propagation
            .max(vec_seq_rel_err(&dx_s, &dx_p))
            .max(vec_seq_rel_err(&du_s, &du_p));

        let solve = |ex: Executor| {
            let opts = NewtonOptions {
                executor: ex,
                max_iters: 300,
                inner_tol: 1e-12,
                ..Default::default()
            };
            newton_solve(&problem, &aug, &traj, &opts).unwrap().1
        };
        let (rs, rp) = (solve(seq), solve(par));
        if rs.converged() != rp.converged() {
            out.convergence_mismatches += 1;
        }
        out.newton_cost = out.newton_cost.max(rel_err(rs.final_cost, rp.final_cost));
    }
    out
}

/// Scan step against the dense KKT solution for every `N ≤ 5` and
/// `d_x, d_u ∈ {1, 2, 3}`, `trials` draws each.
pub fn kkt_oracle_error(trials: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for nx in 1..=3 {
            for nu in 1..=3 {
                for _ in 0..trials {
                    let alpha = if rng.random_bool(0.5) { 0.0 } else { 0.5 };
                    let exp = random_expansion(&mut rng, n, nx, nu, alpha);
                    let (dx_ref, du_ref) = dense_kkt(&exp);
                    let sol = value_pass(&exp, Executor::Sequential).unwrap();
                    let (dx, du) = propagation_pass(&sol.law, &exp, Executor::Sequential).unwrap();
                    worst = worst.max(vec_seq_rel_err(&dx, &dx_ref)).max(vec_seq_rel_err(&du, &du_ref));
                }
            }
        }
    }
    worst
}

fn value_diff(a: &ValueElement, b: &ValueElement) -> f64 {
    let scale = [&a.a, &a.y, &a.c].iter().map(|m| m.amax()).fold(1.0, f64::max)
        .max(a.eta.amax())
        .max(a.b.amax());
    let diff = (&a.a - &b.a)
        .amax()
        .max((&a.y - &b.y).amax())
        .max((&a.c - &b.c).amax())
        .max((&a.eta - &b.eta).amax())
        .max((&a.b - &b.b).amax());
    diff / scale
}

/// `(a⊗b)⊗c` against `a⊗(b⊗c)` for the co-state, value and propagation
/// operators; returns the worst relative difference of each.
pub fn associativity_errors(trials: usize, seed: u64) -> [f64; 3] {
    let mut rng = rng(seed);
    let mut worst = [0.0f64; 3];
    for _ in 0..trials {
        let nx = rng.random_range(1..=3);
        let (a, b, c) = (
            random_costate_element(&mut rng, nx),
            random_costate_element(&mut rng, nx),
            random_costate_element(&mut rng, nx),
        );
        let l = costate_combine(&costate_combine(&a, &b), &c);
        let r = costate_combine(&a, &costate_combine(&b, &c));
        let scale = l.dl.amax().max(l.dc.amax()).max(l.df.amax()).max(1.0);
        let d = (&l.dl - &r.dl).amax().max((&l.dc - &r.dc).amax()).max((&l.df - &r.df).amax());
        worst[0] = worst[0].max(d / scale);

        let (a, b, c) = (
            random_value_element(&mut rng, nx),
            random_value_element(&mut rng, nx),
            random_value_element(&mut rng, nx),
        );
        let l = value_combine(&value_combine(&a, &b).unwrap(), &c).unwrap();
        let r = value_combine(&a, &value_combine(&b, &c).unwrap()).unwrap();
        worst[1] = worst[1].max(value_diff(&l, &r));

        let (a, b, c) = (
            random_rollout_element(&mut rng, nx),
            random_rollout_element(&mut rng, nx),
            random_rollout_element(&mut rng, nx),
        );
        let l = rollout_combine(&rollout_combine(&a, &b), &c);
        let r = rollout_combine(&a, &rollout_combine(&b, &c));
        let scale = l.f.amax().max(l.e.amax()).max(1.0);
        let d = (&l.f - &r.f).amax().max((&l.e - &r.e).amax());
        worst[2] = worst[2].max(d / scale);
    }
    worst
}

use parnewton::models::{make_swingup_problem, SwingupWeights, System};
use parnewton::{check_augmentation, check_constraints, check_cost, check_dynamics};

/// One line of the derivative audit.
#[derive(Debug, Clone)]
pub struct DerivativeAudit {
    pub label: String,
    pub points: usize,
    pub worst_abs: f64,
    pub failure: Option<String>,
}

fn random_point(rng: &mut ChaCha8Rng, system: System) -> (Vector, Vector) {
    let limit = system.control_limit();
    // controls stay inside 95% of the box so the barrier is defined
    let u = Vector::from_element(1, rng.random_range(-0.95 * limit..0.95 * limit));
    let x = match system {
        System::Pendulum => Vector::from_column_slice(&[
            rng.random_range(-std::f64::consts::PI..2.0 * std::f64::consts::PI),
            rng.random_range(-6.0..6.0),
        ]),
        System::CartPole => Vector::from_column_slice(&[
            rng.random_range(-2.0..2.0),
            rng.random_range(-std::f64::consts::PI..2.0 * std::f64::consts::PI),
            rng.random_range(-4.0..4.0),
            rng.random_range(-6.0..6.0),
        ]),
    };
    (x, u)
}

/// Central-difference audit of the benchmark dynamics, costs, constraints
/// and both augmentations at `points` random points each.
pub fn derivative_audit(points: usize, tolerance: f64, seed: u64) -> Vec<DerivativeAudit> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for system in [System::Pendulum, System::CartPole] {
        let problem = make_swingup_problem(system, 10, 0.05, &SwingupWeights::default_for(system)).unwrap();
        let cons = problem.constraints().unwrap().clone();
        let mut record = |label: &str, check: &mut dyn FnMut(&mut ChaCha8Rng) -> parnewton::Result<parnewton::DerivativeReport>| {
            let mut audit = DerivativeAudit {
                label: format!("{system} {label}"),
                points,
                worst_abs: 0.0,
                failure: None,
            };
            for _ in 0..points {
                match check(&mut rng) {
                    Ok(report) => audit.worst_abs = audit.worst_abs.max(report.max_abs()),
                    Err(e) => {
                        audit.failure.get_or_insert(e.to_string());
                    }
                }
            }
            out.push(audit);
        };
        record("dynamics", &mut |rng| {
            let (x, u) = random_point(rng, system);
            check_dynamics(problem.dynamics(), 0, &x, &u, tolerance)
        });
        record("cost", &mut |rng| {
            let (x, u) = random_point(rng, system);
            check_cost(problem.cost(), 0, &x, &u, tolerance)
        });
        record("constraints", &mut |rng| {
            let (x, u) = random_point(rng, system);
            check_constraints(cons.as_ref(), 0, &x, &u, tolerance)
        });
        record("barrier augmentation", &mut |rng| {
            let (x, u) = random_point(rng, system);
            let mu = rng.random_range(1e-3..1.0);
            let aug = AugmentedCost::barrier(cons.clone(), mu).unwrap();
            check_augmentation(&aug, 0, &x, &u, tolerance)
        });
        record("ADMM augmentation", &mut |rng| {
            let (x, u) = random_point(rng, system);
            let limit = system.control_limit();
            let z = vec![Vector::from_fn(2, |_, _| rng.random_range(-2.0 * limit..0.0))];
            let v = vec![uniform_vec(rng, 2, 5.0)];
            let aug = AugmentedCost::admm(cons.clone(), rng.random_range(0.1..5.0), z, v).unwrap();
            check_augmentation(&aug, 0, &x, &u, tolerance)
        });
    }
    out
}

// --- solver instances with closed-form answers ----------------------------

use parnewton::model::Constraints;
use parnewton::{barrier_solve, BarrierOptions};

/// Linear-quadratic instance and its optimal controls from the affine
/// Riccati recursion.
pub fn lq_instance(seed: u64, n: usize, nx: usize, nu: usize) -> (Problem, Vec<Vector>) {
    let mut rng = rng(seed);
    let dynamics = SineDynamics::random(&mut rng, nx, nu, 0.0);
    let (a, b) = (dynamics.a.clone(), dynamics.b.clone());
    let q = spd(&mut rng, nx, 0.5);
    let r = spd(&mut rng, nu, 0.5);
    let qf = spd(&mut rng, nx, 1.0);
    let goal = uniform_vec(&mut rng, nx, 1.0);
    let cost = QuadraticCost::new(q.clone(), r.clone(), qf.clone()).with_goal(goal.clone());
    let x1 = uniform_vec(&mut rng, nx, 1.0);
    let problem = Problem::new(Arc::new(dynamics), Arc::new(cost), None, n, x1.clone()).unwrap();

    // V_t(x) = ½xᵀS_t x + s_tᵀx, backwards from S = Q_f, s = −Q_f g
    let mut s_mat = qf.clone();
    let mut s_vec = -(&qf * &goal);
    let mut laws = Vec::with_capacity(n);
    for _ in 0..n {
        let qt = &r + b.transpose() * &s_mat * &b;
        let h = b.transpose() * &s_mat * &a;
        let hv = b.transpose() * &s_vec;
        let lu = qt.lu();
        let k = lu.solve(&h).unwrap();
        let kv = lu.solve(&hv).unwrap();
        s_vec = -(&q * &goal) + a.transpose() * &s_vec - h.transpose() * &kv;
        s_mat = &q + a.transpose() * &s_mat * &a - h.transpose() * &k;
        laws.push((k, kv));
    }
    laws.reverse();
    let mut x = x1;
    let mut controls = Vec::with_capacity(n);
    for (k, kv) in &laws {
        let u = -(k * &x) - kv;
        x = &a * &x + &b * &u;
        controls.push(u);
    }
    (problem, controls)
}

// --- 1-dim barrier: min u² s.t. u ≥ 1 --------------------------------------

/// `h(u) = 1 − u ≤ 0`, no state constraints.
pub struct LowerBound;

impl Constraints for LowerBound {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn state_count(&self) -> usize {
        0
    }
    fn control_count(&self) -> usize {
        1
    }
    fn state(&self, _: usize, _: &Vector) -> Vector {
        Vector::zeros(0)
    }
    fn state_jacobian(&self, _: usize, _: &Vector) -> Mat {
        Mat::zeros(0, 1)
    }
    fn state_hessians(&self, _: usize, _: &Vector) -> Vec<Mat> {
        Vec::new()
    }
    fn control(&self, _: usize, u: &Vector) -> Vector {
        Vector::from_element(1, 1.0 - u[0])
    }
    fn control_jacobian(&self, _: usize, _: &Vector) -> Mat {
        Mat::from_element(1, 1, -1.0)
    }
    fn control_hessians(&self, _: usize, _: &Vector) -> Vec<Mat> {
        vec![Mat::zeros(1, 1)]
    }
}

pub fn scalar_problem() -> Problem {
    let dynamics = SineDynamics {
        a: Mat::identity(1, 1),
        b: Mat::zeros(1, 1),
        g: Mat::zeros(1, 2),
        eps: 0.0,
    };
    // ½·2·u² = u²
    let cost = QuadraticCost::new(Mat::zeros(1, 1), Mat::from_element(1, 1, 2.0), Mat::zeros(1, 1));
    Problem::new(Arc::new(dynamics), Arc::new(cost), Some(Arc::new(LowerBound)), 1, Vector::zeros(1)).unwrap()
}

pub fn barrier_closed_form(mu: f64) -> f64 {
    (1.0 + (1.0 + 2.0 * mu).sqrt()) / 2.0
}

/// Solves the scalar barrier problem stopping after each round in turn and
/// returns `(μ, u, |u − u*(μ)|)` per round plus the final control.
pub fn scalar_barrier_rounds() -> (Vec<(f64, f64, f64)>, f64) {
    let problem = scalar_problem();
    let start = problem.rollout(&[Vector::from_element(1, 3.0)]).unwrap();
    // cost-change termination at the default 1e-8 leaves |δu| ~ 1e-5 on this
    // flat problem, so the inner solves run tighter
    let mut base = BarrierOptions::default();
    base.newton.inner_tol = 1e-12;
    let mut rounds = Vec::new();
    let mut mu = base.mu0;
    let mut last = f64::NAN;
    while mu > base.mu_tol {
        // stop right after the round with barrier parameter μ
        let opts = BarrierOptions {
            mu_tol: mu * (1.0 + base.zeta) / 2.0,
            ..base
        };
        let (traj, report) = barrier_solve(&problem, &start, &opts).unwrap();
        assert_eq!(report.rounds.last().unwrap().mu, mu);
        let u = traj.controls()[0][0];
        rounds.push((mu, u, (u - barrier_closed_form(mu)).abs()));
        last = u;
        mu *= base.zeta;
    }
    let (traj, _) = barrier_solve(&problem, &start, &base).unwrap();
    assert_eq!(traj.controls()[0][0], last);
    (rounds, last)
}

