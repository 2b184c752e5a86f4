//! Central finite-difference verification of analytic derivatives.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

use super::{AugmentedCost, Constraints, Cost, Dynamics, StageDerivatives};

const STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeCheck {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DerivativeReport {
    pub entries: Vec<DerivativeCheck>,
    pub tolerance: f64,
}

impl DerivativeReport {
    fn new(tolerance: f64) -> Self {
        DerivativeReport {
            entries: Vec::new(),
            tolerance,
        }
    }

    fn compare(&mut self, name: impl Into<String>, analytic: &Mat, numeric: &Mat) {
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        let mut passed = analytic.shape() == numeric.shape();
        for (a, n) in analytic.iter().zip(numeric.iter()) {
            let err = (a - n).abs();
            max_abs = max_abs.max(err);
            if a.abs() > 0.0 {
                max_rel = max_rel.max(err / a.abs());
            }
            // mixed absolute/relative acceptance
            if !(err <= self.tolerance * a.abs().max(1.0)) {
                passed = false;
            }
        }
        self.entries.push(DerivativeCheck {
            name: name.into(),
            max_abs,
            max_rel,
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs).fold(0.0, f64::max)
    }

    fn into_result(self) -> Result<Self> {
        match self.entries.iter().find(|e| !e.passed) {
            None => Ok(self),
            Some(e) => Err(Error::DerivativeMismatch {
                name: e.name.clone(),
                abs: e.max_abs,
                rel: e.max_rel,
            }),
        }
    }
}

/// Central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian(f: impl Fn(&Vector) -> Vector, x: &Vector, step: f64) -> Mat {
    let f0 = f(x);
    let mut jac = Mat::zeros(f0.len(), x.len());
    let mut xp = x.clone();
    for j in 0..x.len() {
        let xj = x[j];
        xp[j] = xj + step;
        let fp = f(&xp);
        xp[j] = xj - step;
        let fm = f(&xp);
        xp[j] = xj;
        jac.set_column(j, &((fp - fm) / (2.0 * step)));
    }
    jac
}

fn join(x: &Vector, u: &Vector) -> Vector {
    let mut z = Vector::zeros(x.len() + u.len());
    z.rows_mut(0, x.len()).copy_from(x);
    z.rows_mut(x.len(), u.len()).copy_from(u);
    z
}

fn column(v: &Vector) -> Mat {
    Mat::from_column_slice(v.len(), 1, v.as_slice())
}

fn split(z: &Vector, nx: usize) -> (Vector, Vector) {
    (
        z.rows(0, nx).into_owned(),
        z.rows(nx, z.len() - nx).into_owned(),
    )
}

fn block_hessian(xx: &Mat, uu: &Mat, xu: &Mat) -> Mat {
    let (nx, nu) = (xx.nrows(), uu.nrows());
    let mut h = Mat::zeros(nx + nu, nx + nu);
    h.view_mut((0, 0), (nx, nx)).copy_from(xx);
    h.view_mut((nx, nx), (nu, nu)).copy_from(uu);
    h.view_mut((0, nx), (nx, nu)).copy_from(xu);
    h.view_mut((nx, 0), (nu, nx)).copy_from(&xu.transpose());
    h
}

fn check_stage_function(
    report: &mut DerivativeReport,
    prefix: &str,
    x: &Vector,
    u: &Vector,
    value: impl Fn(&Vector, &Vector) -> Result<f64>,
    derivs: impl Fn(&Vector, &Vector) -> Result<StageDerivatives>,
) -> Result<()> {
    let nx = x.len();
    let d = derivs(x, u)?;
    // surface domain errors at the base point before differencing
    value(x, u)?;
    let z = join(x, u);
    let scalar = |z: &Vector| {
        let (x, u) = split(z, nx);
        Vector::from_element(1, value(&x, &u).unwrap_or(f64::NAN))
    };
    let grad_fd = fd_jacobian(scalar, &z, STEP).transpose();
    report.compare(format!("{prefix} gradient"), &column(&join(&d.x, &d.u)), &grad_fd);
    let grad = |z: &Vector| {
        let (x, u) = split(z, nx);
        match derivs(&x, &u) {
            Ok(d) => join(&d.x, &d.u),
            Err(_) => Vector::from_element(z.len(), f64::NAN),
        }
    };
    let hess_fd = fd_jacobian(grad, &z, STEP);
    report.compare(format!("{prefix} hessian"), &block_hessian(&d.xx, &d.uu, &d.xu), &hess_fd);
    Ok(())
}

/// Checks `∂f/∂x`, `∂f/∂u` and every second-derivative slice of `f_t` at `(x, u)`.
pub fn check_dynamics(
    dynamics: &dyn Dynamics,
    t: usize,
    x: &Vector,
    u: &Vector,
    tolerance: f64,
) -> Result<DerivativeReport> {
    let mut report = DerivativeReport::new(tolerance);
    let nx = x.len();
    let jac = dynamics.jacobians(t, x, u);
    let z = join(x, u);
    let f = |z: &Vector| {
        let (x, u) = split(z, nx);
        dynamics.step(t, &x, &u)
    };
    let fd = fd_jacobian(f, &z, STEP);
    report.compare("dynamics fx", &jac.fx, &fd.columns(0, nx).into_owned());
    report.compare("dynamics fu", &jac.fu, &fd.columns(nx, u.len()).into_owned());

    let hess = dynamics.hessians(t, x, u);
    for k in 0..dynamics.state_dim() {
        let row = |z: &Vector| {
            let (x, u) = split(z, nx);
            let j = dynamics.jacobians(t, &x, &u);
            join(&j.fx.row(k).transpose(), &j.fu.row(k).transpose())
        };
        let fd = fd_jacobian(row, &z, STEP);
        report.compare(
            format!("dynamics hessian[{k}]"),
            &block_hessian(&hess.xx[k], &hess.uu[k], &hess.xu[k]),
            &fd,
        );
    }
    report.into_result()
}

/// Checks stage and terminal cost derivatives at `(x, u)`.
pub fn check_cost(
    cost: &dyn Cost,
    t: usize,
    x: &Vector,
    u: &Vector,
    tolerance: f64,
) -> Result<DerivativeReport> {
    let mut report = DerivativeReport::new(tolerance);
    check_stage_function(
        &mut report,
        "stage cost",
        x,
        u,
        |x, u| Ok(cost.stage(t, x, u)),
        |x, u| Ok(cost.stage_derivatives(t, x, u)),
    )?;
    let term = |x: &Vector| Vector::from_element(1, cost.terminal(x));
    let fd = fd_jacobian(term, x, STEP).transpose();
    report.compare("terminal gradient", &column(&cost.terminal_gradient(x)), &fd);
    let fd = fd_jacobian(|x| cost.terminal_gradient(x), x, STEP);
    report.compare("terminal hessian", &cost.terminal_hessian(x), &fd);
    report.into_result()
}

/// Checks the Jacobians and per-component Hessians of `g_t` and `h_t`.
pub fn check_constraints(
    cons: &dyn Constraints,
    t: usize,
    x: &Vector,
    u: &Vector,
    tolerance: f64,
) -> Result<DerivativeReport> {
    let mut report = DerivativeReport::new(tolerance);
    let fd = fd_jacobian(|x| cons.state(t, x), x, STEP);
    report.compare("state constraint jacobian", &cons.state_jacobian(t, x), &fd);
    let hs = cons.state_hessians(t, x);
    for (m, h) in hs.iter().enumerate() {
        let fd = fd_jacobian(|x| cons.state_jacobian(t, x).row(m).transpose(), x, STEP);
        report.compare(format!("state constraint hessian[{m}]"), h, &fd);
    }
    let fd = fd_jacobian(|u| cons.control(t, u), u, STEP);
    report.compare("control constraint jacobian", &cons.control_jacobian(t, u), &fd);
    let hs = cons.control_hessians(t, u);
    for (m, h) in hs.iter().enumerate() {
        let fd = fd_jacobian(|u| cons.control_jacobian(t, u).row(m).transpose(), u, STEP);
        report.compare(format!("control constraint hessian[{m}]"), h, &fd);
    }
    report.into_result()
}

/// Checks the gradient and Hessian of an augmentation term `c_t`.
pub fn check_augmentation(
    aug: &AugmentedCost,
    t: usize,
    x: &Vector,
    u: &Vector,
    tolerance: f64,
) -> Result<DerivativeReport> {
    let mut report = DerivativeReport::new(tolerance);
    check_stage_function(
        &mut report,
        "augmentation",
        x,
        u,
        |x, u| aug.value(t, x, u),
        |x, u| aug.derivatives(t, x, u),
    )?;
    report.into_result()
}
