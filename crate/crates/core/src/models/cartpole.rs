//! Force-limited cart-pole, Euler-discretized.
//!
//! State `(p, θ, ṗ, θ̇)` with `θ = 0` pole hanging down and `θ = π` upright.

use crate::linalg::{Mat, Vector};
use crate::model::{Dynamics, DynamicsHessians, DynamicsJacobians};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartPoleParams {
    pub g: f64,
    pub l: f64,
    pub m_c: f64,
    pub m_p: f64,
    pub dt: f64,
    pub force_limit: f64,
}

impl CartPoleParams {
    pub fn with_dt(dt: f64) -> Self {
        CartPoleParams {
            dt,
            ..Default::default()
        }
    }
}

impl Default for CartPoleParams {
    fn default() -> Self {
        CartPoleParams {
            g: 9.81,
            l: 0.5,
            m_c: 10.0,
            m_p: 1.0,
            dt: 0.01,
            force_limit: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartPole {
    pub params: CartPoleParams,
}

// Value, gradient and Hessian of a scalar in the variables (θ, θ̇, F).
#[derive(Debug, Clone, Copy)]
struct Jet {
    v: f64,
    d: [f64; 3],
    h: [[f64; 3]; 3],
}

impl Jet {
    fn quotient(n: &Jet, den: &Jet) -> Jet {
        let f = n.v / den.v;
        let mut d = [0.0; 3];
        for i in 0..3 {
            d[i] = (n.d[i] - f * den.d[i]) / den.v;
        }
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = (n.h[i][j] - d[i] * den.d[j] - d[j] * den.d[i] - f * den.h[i][j]) / den.v;
            }
        }
        Jet { v: f, d, h }
    }
}

impl CartPole {
    pub fn new(params: CartPoleParams) -> Self {
        CartPole { params }
    }

    /// `(p̈, θ̈)` with derivatives in `(θ, θ̇, F)`.
    fn accelerations(&self, theta: f64, omega: f64, force: f64) -> (Jet, Jet) {
        let CartPoleParams { g, l, m_c, m_p, .. } = self.params;
        let (s, c) = theta.sin_cos();
        let (w, f) = (omega, force);
        let cc_ss = c * c - s * s;

        let den = Jet {
            v: m_c + m_p * s * s,
            d: [2.0 * m_p * s * c, 0.0, 0.0],
            h: [[2.0 * m_p * cc_ss, 0.0, 0.0], [0.0; 3], [0.0; 3]],
        };
        let num_p = Jet {
            v: f + m_p * s * (l * w * w + g * c),
            d: [m_p * l * w * w * c + m_p * g * cc_ss, 2.0 * m_p * l * w * s, 1.0],
            h: [
                [-m_p * l * w * w * s - 4.0 * m_p * g * c * s, 2.0 * m_p * l * w * c, 0.0],
                [2.0 * m_p * l * w * c, 2.0 * m_p * l * s, 0.0],
                [0.0; 3],
            ],
        };
        let num_t = Jet {
            v: -f * c - m_p * l * w * w * c * s - (m_c + m_p) * g * s,
            d: [
                f * s - m_p * l * w * w * cc_ss - (m_c + m_p) * g * c,
                -2.0 * m_p * l * w * c * s,
                -c,
            ],
            h: [
                [f * c + 4.0 * m_p * l * w * w * c * s + (m_c + m_p) * g * s, -2.0 * m_p * l * w * cc_ss, s],
                [-2.0 * m_p * l * w * cc_ss, -2.0 * m_p * l * c * s, 0.0],
                [s, 0.0, 0.0],
            ],
        };
        let mut den_t = den;
        den_t.v *= l;
        den_t.d.iter_mut().for_each(|x| *x *= l);
        den_t.h.iter_mut().flatten().for_each(|x| *x *= l);
        (Jet::quotient(&num_p, &den), Jet::quotient(&num_t, &den_t))
    }

    /// `(p̈, θ̈)` at a state and force.
    pub fn acceleration(&self, x: &Vector, force: f64) -> (f64, f64) {
        let (a, b) = self.accelerations(x[1], x[3], force);
        (a.v, b.v)
    }
}

// state indices of θ and θ̇
const VARS: [usize; 2] = [1, 3];

impl Dynamics for CartPole {
    fn state_dim(&self) -> usize {
        4
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn step(&self, _t: usize, x: &Vector, u: &Vector) -> Vector {
        let dt = self.params.dt;
        let (pdd, tdd) = self.acceleration(x, u[0]);
        Vector::from_column_slice(&[x[0] + dt * x[2], x[1] + dt * x[3], x[2] + dt * pdd, x[3] + dt * tdd])
    }

    fn jacobians(&self, _t: usize, x: &Vector, u: &Vector) -> DynamicsJacobians {
        let dt = self.params.dt;
        let (a, b) = self.accelerations(x[1], x[3], u[0]);
        let mut fx = Mat::identity(4, 4);
        fx[(0, 2)] = dt;
        fx[(1, 3)] = dt;
        let mut fu = Mat::zeros(4, 1);
        for (row, jet) in [(2, &a), (3, &b)] {
            for (k, &col) in VARS.iter().enumerate() {
                fx[(row, col)] += dt * jet.d[k];
            }
            fu[(row, 0)] = dt * jet.d[2];
        }
        DynamicsJacobians { fx, fu }
    }

    fn hessians(&self, _t: usize, x: &Vector, u: &Vector) -> DynamicsHessians {
        let dt = self.params.dt;
        let (a, b) = self.accelerations(x[1], x[3], u[0]);
        let mut h = DynamicsHessians::zeros(4, 1);
        for (row, jet) in [(2, &a), (3, &b)] {
            for (i, &ci) in VARS.iter().enumerate() {
                for (j, &cj) in VARS.iter().enumerate() {
                    h.xx[row][(ci, cj)] = dt * jet.h[i][j];
                }
                h.xu[row][(ci, 0)] = dt * jet.h[i][2];
            }
            h.uu[row][(0, 0)] = dt * jet.h[2][2];
        }
        h
    }
}
