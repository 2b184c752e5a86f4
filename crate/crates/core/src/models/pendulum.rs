//! Torque-limited pendulum, Euler-discretized.
//!
//! State `(θ, θ̇)` with `θ = 0` hanging down and `θ = π` upright.

use crate::linalg::{Mat, Vector};
use crate::model::{Dynamics, DynamicsHessians, DynamicsJacobians};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub b: f64,
    pub dt: f64,
    pub torque_limit: f64,
}

impl PendulumParams {
    pub fn with_dt(dt: f64) -> Self {
        PendulumParams {
            dt,
            ..Default::default()
        }
    }
}

impl Default for PendulumParams {
    fn default() -> Self {
        PendulumParams {
            g: 9.81,
            l: 1.0,
            m: 1.0,
            b: 1e-3,
            dt: 0.01,
            torque_limit: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pendulum {
    pub params: PendulumParams,
}

impl Pendulum {
    pub fn new(params: PendulumParams) -> Self {
        Pendulum { params }
    }

    /// `θ̈ = −(g/l) sin θ + (τ − b θ̇)/(m l²)`
    pub fn acceleration(&self, theta: f64, omega: f64, tau: f64) -> f64 {
        let p = &self.params;
        -(p.g / p.l) * theta.sin() + (tau - p.b * omega) / (p.m * p.l * p.l)
    }

    /// `m g l (1 − cos θ) + ½ m l² θ̇²`, zero at the bottom rest point.
    pub fn energy(&self, x: &Vector) -> f64 {
        let p = &self.params;
        p.m * p.g * p.l * (1.0 - x[0].cos()) + 0.5 * p.m * p.l * p.l * x[1] * x[1]
    }
}

impl Dynamics for Pendulum {
    fn state_dim(&self) -> usize {
        2
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn step(&self, _t: usize, x: &Vector, u: &Vector) -> Vector {
        let dt = self.params.dt;
        let acc = self.acceleration(x[0], x[1], u[0]);
        Vector::from_column_slice(&[x[0] + dt * x[1], x[1] + dt * acc])
    }

    fn jacobians(&self, _t: usize, x: &Vector, _u: &Vector) -> DynamicsJacobians {
        let p = &self.params;
        let inertia = p.m * p.l * p.l;
        DynamicsJacobians {
            fx: Mat::from_row_slice(
                2,
                2,
                &[1.0, p.dt, -p.dt * (p.g / p.l) * x[0].cos(), 1.0 - p.dt * p.b / inertia],
            ),
            fu: Mat::from_row_slice(2, 1, &[0.0, p.dt / inertia]),
        }
    }

    fn hessians(&self, _t: usize, x: &Vector, _u: &Vector) -> DynamicsHessians {
        let p = &self.params;
        let mut h = DynamicsHessians::zeros(2, 1);
        h.xx[1][(0, 0)] = p.dt * (p.g / p.l) * x[0].sin();
        h
    }
}
