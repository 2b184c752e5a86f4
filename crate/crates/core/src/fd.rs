//! Model adapters that derive every derivative by central differences.
//!
//! Useful for prototyping user models and as independent references in
//! tests; the benchmark models supply analytic derivatives instead.

use crate::linalg::{Mat, Vector};
use crate::model::{fd_jacobian, Cost, Dynamics, DynamicsHessians, DynamicsJacobians, StageDerivatives};

const FIRST_STEP: f64 = 1e-6;
const SECOND_STEP: f64 = 1e-4;

fn join(x: &Vector, u: &Vector) -> Vector {
    let mut z = Vector::zeros(x.len() + u.len());
    z.rows_mut(0, x.len()).copy_from(x);
    z.rows_mut(x.len(), u.len()).copy_from(u);
    z
}

/// Second-order central differences of a vector function; returns one
/// `n × n` Hessian per output component.
pub fn fd_hessians(f: impl Fn(&Vector) -> Vector, z: &Vector, step: f64) -> Vec<Mat> {
    let n = z.len();
    let m = f(z).len();
    let mut out = vec![Mat::zeros(n, n); m];
    let mut zp = z.clone();
    for i in 0..n {
        for j in i..n {
            let mut eval = |si: f64, sj: f64| {
                zp.copy_from(z);
                zp[i] += si * step;
                zp[j] += sj * step;
                f(&zp)
            };
            let d = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                / (4.0 * step * step);
            for k in 0..m {
                out[k][(i, j)] = d[k];
                out[k][(j, i)] = d[k];
            }
        }
    }
    out
}

/// Dynamics given only by its step function.
pub struct FiniteDiffDynamics<F> {
    nx: usize,
    nu: usize,
    f: F,
}

impl<F> FiniteDiffDynamics<F>
where
    F: Fn(usize, &Vector, &Vector) -> Vector + Send + Sync,
{
    pub fn new(nx: usize, nu: usize, f: F) -> Self {
        FiniteDiffDynamics { nx, nu, f }
    }
}

impl<F> Dynamics for FiniteDiffDynamics<F>
where
    F: Fn(usize, &Vector, &Vector) -> Vector + Send + Sync,
{
    fn state_dim(&self) -> usize {
        self.nx
    }

    fn control_dim(&self) -> usize {
        self.nu
    }

    fn step(&self, t: usize, x: &Vector, u: &Vector) -> Vector {
        (self.f)(t, x, u)
    }

    fn jacobians(&self, t: usize, x: &Vector, u: &Vector) -> DynamicsJacobians {
        let nx = self.nx;
        let jac = fd_jacobian(
            |z| (self.f)(t, &z.rows(0, nx).into_owned(), &z.rows(nx, z.len() - nx).into_owned()),
            &join(x, u),
            FIRST_STEP,
        );
        DynamicsJacobians {
            fx: jac.columns(0, nx).into_owned(),
            fu: jac.columns(nx, self.nu).into_owned(),
        }
    }

    fn hessians(&self, t: usize, x: &Vector, u: &Vector) -> DynamicsHessians {
        let nx = self.nx;
        let nu = self.nu;
        let hs = fd_hessians(
            |z| (self.f)(t, &z.rows(0, nx).into_owned(), &z.rows(nx, z.len() - nx).into_owned()),
            &join(x, u),
            SECOND_STEP,
        );
        DynamicsHessians {
            xx: hs.iter().map(|h| h.view((0, 0), (nx, nx)).into_owned()).collect(),
            uu: hs.iter().map(|h| h.view((nx, nx), (nu, nu)).into_owned()).collect(),
            xu: hs.iter().map(|h| h.view((0, nx), (nx, nu)).into_owned()).collect(),
        }
    }
}

/// Cost given only by stage and terminal value functions.
pub struct FiniteDiffCost<L, T> {
    nx: usize,
    nu: usize,
    stage: L,
    terminal: T,
}

impl<L, T> FiniteDiffCost<L, T>
where
    L: Fn(usize, &Vector, &Vector) -> f64 + Send + Sync,
    T: Fn(&Vector) -> f64 + Send + Sync,
{
    pub fn new(nx: usize, nu: usize, stage: L, terminal: T) -> Self {
        FiniteDiffCost {
            nx,
            nu,
            stage,
            terminal,
        }
    }
}

impl<L, T> Cost for FiniteDiffCost<L, T>
where
    L: Fn(usize, &Vector, &Vector) -> f64 + Send + Sync,
    T: Fn(&Vector) -> f64 + Send + Sync,
{
    fn state_dim(&self) -> usize {
        self.nx
    }

    fn control_dim(&self) -> usize {
        self.nu
    }

    fn stage(&self, t: usize, x: &Vector, u: &Vector) -> f64 {
        (self.stage)(t, x, u)
    }

    fn stage_derivatives(&self, t: usize, x: &Vector, u: &Vector) -> StageDerivatives {
        let (nx, nu) = (self.nx, self.nu);
        let f = |z: &Vector| {
            Vector::from_element(
                1,
                (self.stage)(t, &z.rows(0, nx).into_owned(), &z.rows(nx, nu).into_owned()),
            )
        };
        let z = join(x, u);
        let g = fd_jacobian(&f, &z, FIRST_STEP);
        let h = fd_hessians(&f, &z, SECOND_STEP).remove(0);
        StageDerivatives {
            x: g.row(0).columns(0, nx).transpose(),
            u: g.row(0).columns(nx, nu).transpose(),
            xx: h.view((0, 0), (nx, nx)).into_owned(),
            uu: h.view((nx, nx), (nu, nu)).into_owned(),
            xu: h.view((0, nx), (nx, nu)).into_owned(),
        }
    }

    fn terminal(&self, x: &Vector) -> f64 {
        (self.terminal)(x)
    }

    fn terminal_gradient(&self, x: &Vector) -> Vector {
        fd_jacobian(|x| Vector::from_element(1, (self.terminal)(x)), x, FIRST_STEP)
            .row(0)
            .transpose()
    }

    fn terminal_hessian(&self, x: &Vector) -> Mat {
        fd_hessians(|x| Vector::from_element(1, (self.terminal)(x)), x, SECOND_STEP).remove(0)
    }
}
