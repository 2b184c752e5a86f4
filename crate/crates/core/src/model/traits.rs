use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

/// `∂f/∂x` (`d_x × d_x`) and `∂f/∂u` (`d_x × d_u`).
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsJacobians {
    pub fx: Mat,
    pub fu: Mat,
}

/// Second derivatives of `f`, one matrix per output component.
///
/// `xx[k]` is `∂²f_k/∂x∂x`, `uu[k]` is `∂²f_k/∂u∂u` and `xu[k]` is the
/// `d_x × d_u` mixed block `∂²f_k/∂x∂u`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsHessians {
    pub xx: Vec<Mat>,
    pub uu: Vec<Mat>,
    pub xu: Vec<Mat>,
}

impl DynamicsHessians {
    pub fn zeros(nx: usize, nu: usize) -> Self {
        DynamicsHessians {
            xx: vec![Mat::zeros(nx, nx); nx],
            uu: vec![Mat::zeros(nu, nu); nx],
            xu: vec![Mat::zeros(nx, nu); nx],
        }
    }
}

/// Discrete-time dynamics `x_{t+1} = f_t(x_t, u_t)`.
pub trait Dynamics: Send + Sync {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    fn step(&self, t: usize, x: &Vector, u: &Vector) -> Vector;
    fn jacobians(&self, t: usize, x: &Vector, u: &Vector) -> DynamicsJacobians;
    fn hessians(&self, t: usize, x: &Vector, u: &Vector) -> DynamicsHessians;
}

/// Gradient and Hessian blocks of a scalar stage function `φ(x, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDerivatives {
    pub x: Vector,
    pub u: Vector,
    pub xx: Mat,
    pub uu: Mat,
    /// `∂²φ/∂x∂u`, `d_x × d_u`.
    pub xu: Mat,
}

impl StageDerivatives {
    pub fn zeros(nx: usize, nu: usize) -> Self {
        StageDerivatives {
            x: Vector::zeros(nx),
            u: Vector::zeros(nu),
            xx: Mat::zeros(nx, nx),
            uu: Mat::zeros(nu, nu),
            xu: Mat::zeros(nx, nu),
        }
    }
}

/// Stage costs `l_t(x, u)` and terminal cost `l_{N+1}(x)`.
pub trait Cost: Send + Sync {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    fn stage(&self, t: usize, x: &Vector, u: &Vector) -> f64;
    fn stage_derivatives(&self, t: usize, x: &Vector, u: &Vector) -> StageDerivatives;
    fn terminal(&self, x: &Vector) -> f64;
    fn terminal_gradient(&self, x: &Vector) -> Vector;
    fn terminal_hessian(&self, x: &Vector) -> Mat;
}

/// Inequality constraints `g_t(x) <= 0` and `h_t(u) <= 0`.
///
/// The stacked vector `w = [g; h]` has `state_count() + control_count()`
/// components; a point is feasible when every component is non-positive.
pub trait Constraints: Send + Sync {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    fn state_count(&self) -> usize;
    fn control_count(&self) -> usize;

    fn state(&self, t: usize, x: &Vector) -> Vector;
    /// `m_g × d_x`.
    fn state_jacobian(&self, t: usize, x: &Vector) -> Mat;
    fn state_hessians(&self, t: usize, x: &Vector) -> Vec<Mat>;

    fn control(&self, t: usize, u: &Vector) -> Vector;
    /// `m_h × d_u`.
    fn control_jacobian(&self, t: usize, u: &Vector) -> Mat;
    fn control_hessians(&self, t: usize, u: &Vector) -> Vec<Mat>;

    /// Box representation, if the constraints are simple bounds.
    fn bounds(&self) -> Option<&BoxConstraints> {
        None
    }

    fn stacked(&self, t: usize, x: &Vector, u: &Vector) -> Vector {
        let g = self.state(t, x);
        let h = self.control(t, u);
        let mut w = Vector::zeros(g.len() + h.len());
        w.rows_mut(0, g.len()).copy_from(&g);
        w.rows_mut(g.len(), h.len()).copy_from(&h);
        w
    }

    fn dim(&self) -> usize {
        self.state_count() + self.control_count()
    }
}

/// Convex quadratic tracking cost
/// `½(x−x̄)ᵀQ(x−x̄) + (x−x̄)ᵀS(u−ū) + ½(u−ū)ᵀR(u−ū)` per stage and
/// `½(x−x̄)ᵀQ_f(x−x̄)` at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCost {
    pub q: Mat,
    pub r: Mat,
    pub s: Mat,
    pub qf: Mat,
    pub x_goal: Vector,
    pub u_goal: Vector,
}

impl QuadraticCost {
    /// Regulation to the origin without a cross term.
    pub fn new(q: Mat, r: Mat, qf: Mat) -> Self {
        let (nx, nu) = (q.nrows(), r.nrows());
        QuadraticCost {
            q,
            r,
            s: Mat::zeros(nx, nu),
            qf,
            x_goal: Vector::zeros(nx),
            u_goal: Vector::zeros(nu),
        }
    }

    pub fn with_goal(mut self, x_goal: Vector) -> Self {
        self.x_goal = x_goal;
        self
    }

    pub fn with_cross(mut self, s: Mat) -> Self {
        self.s = s;
        self
    }
}

impl Cost for QuadraticCost {
    fn state_dim(&self) -> usize {
        self.q.nrows()
    }

    fn control_dim(&self) -> usize {
        self.r.nrows()
    }

    fn stage(&self, _t: usize, x: &Vector, u: &Vector) -> f64 {
        let dx = x - &self.x_goal;
        let du = u - &self.u_goal;
        0.5 * dx.dot(&(&self.q * &dx)) + dx.dot(&(&self.s * &du)) + 0.5 * du.dot(&(&self.r * &du))
    }

    fn stage_derivatives(&self, _t: usize, x: &Vector, u: &Vector) -> StageDerivatives {
        let dx = x - &self.x_goal;
        let du = u - &self.u_goal;
        StageDerivatives {
            x: &self.q * &dx + &self.s * &du,
            u: &self.r * &du + self.s.transpose() * &dx,
            xx: self.q.clone(),
            uu: self.r.clone(),
            xu: self.s.clone(),
        }
    }

    fn terminal(&self, x: &Vector) -> f64 {
        let dx = x - &self.x_goal;
        0.5 * dx.dot(&(&self.qf * &dx))
    }

    fn terminal_gradient(&self, x: &Vector) -> Vector {
        &self.qf * (x - &self.x_goal)
    }

    fn terminal_hessian(&self, _x: &Vector) -> Mat {
        self.qf.clone()
    }
}

/// Simple bounds stacked one-sided: `[v − ub; lb − v] <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxConstraints {
    nx: usize,
    nu: usize,
    state: Option<(Vector, Vector)>,
    control: Option<(Vector, Vector)>,
}

impl BoxConstraints {
    pub fn new(
        nx: usize,
        nu: usize,
        state: Option<(Vector, Vector)>,
        control: Option<(Vector, Vector)>,
    ) -> Result<Self> {
        for (what, dim, bounds) in [("state bounds", nx, &state), ("control bounds", nu, &control)] {
            if let Some((lb, ub)) = bounds {
                if lb.len() != dim || ub.len() != dim {
                    return Err(Error::Dimension {
                        what,
                        expected: dim,
                        got: lb.len().min(ub.len()),
                    });
                }
                if lb.iter().zip(ub.iter()).any(|(l, u)| !(l < u) || !l.is_finite() || !u.is_finite()) {
                    return Err(Error::InvalidOption(format!("{what} must be finite with lb < ub")));
                }
            }
        }
        Ok(BoxConstraints {
            nx,
            nu,
            state,
            control,
        })
    }

    /// Symmetric control bound `|u_i| <= limit`.
    pub fn symmetric_control(nx: usize, nu: usize, limit: f64) -> Result<Self> {
        let ub = Vector::from_element(nu, limit);
        BoxConstraints::new(nx, nu, None, Some((-ub.clone(), ub)))
    }

    pub fn state_bounds(&self) -> Option<&(Vector, Vector)> {
        self.state.as_ref()
    }

    pub fn control_bounds(&self) -> Option<&(Vector, Vector)> {
        self.control.as_ref()
    }
}

fn stack_box(v: &Vector, bounds: &Option<(Vector, Vector)>) -> Vector {
    match bounds {
        None => Vector::zeros(0),
        Some((lb, ub)) => {
            let n = v.len();
            let mut out = Vector::zeros(2 * n);
            for i in 0..n {
                out[i] = v[i] - ub[i];
                out[n + i] = lb[i] - v[i];
            }
            out
        }
    }
}

fn box_jacobian(n: usize, bounds: &Option<(Vector, Vector)>) -> Mat {
    match bounds {
        None => Mat::zeros(0, n),
        Some(_) => {
            let mut j = Mat::zeros(2 * n, n);
            for i in 0..n {
                j[(i, i)] = 1.0;
                j[(n + i, i)] = -1.0;
            }
            j
        }
    }
}

impl Constraints for BoxConstraints {
    fn state_dim(&self) -> usize {
        self.nx
    }

    fn control_dim(&self) -> usize {
        self.nu
    }

    fn state_count(&self) -> usize {
        if self.state.is_some() {
            2 * self.nx
        } else {
            0
        }
    }

    fn control_count(&self) -> usize {
        if self.control.is_some() {
            2 * self.nu
        } else {
            0
        }
    }

    fn state(&self, _t: usize, x: &Vector) -> Vector {
        stack_box(x, &self.state)
    }

    fn state_jacobian(&self, _t: usize, _x: &Vector) -> Mat {
        box_jacobian(self.nx, &self.state)
    }

    fn state_hessians(&self, _t: usize, _x: &Vector) -> Vec<Mat> {
        vec![Mat::zeros(self.nx, self.nx); self.state_count()]
    }

    fn control(&self, _t: usize, u: &Vector) -> Vector {
        stack_box(u, &self.control)
    }

    fn control_jacobian(&self, _t: usize, _u: &Vector) -> Mat {
        box_jacobian(self.nu, &self.control)
    }

    fn control_hessians(&self, _t: usize, _u: &Vector) -> Vec<Mat> {
        vec![Mat::zeros(self.nu, self.nu); self.control_count()]
    }

    fn bounds(&self) -> Option<&BoxConstraints> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_stacking_is_upper_then_lower() {
        let b = BoxConstraints::symmetric_control(2, 1, 5.0).unwrap();
        let h = b.control(0, &Vector::from_element(1, 1.0));
        assert_eq!(h.as_slice(), &[-4.0, -6.0]);
        assert_eq!(b.state_count(), 0);
        assert_eq!(b.dim(), 2);
        let w = b.stacked(0, &Vector::zeros(2), &Vector::from_element(1, 6.0));
        assert_eq!(w.as_slice(), &[1.0, -11.0]);
    }

    #[test]
    fn box_rejects_inverted_bounds() {
        let lb = Vector::from_element(1, 1.0);
        let ub = Vector::from_element(1, -1.0);
        assert!(BoxConstraints::new(1, 1, None, Some((lb, ub))).is_err());
    }
}
