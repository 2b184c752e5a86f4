//! Benchmark systems: torque-limited pendulum and force-limited cart-pole
//! swing-up.

mod cartpole;
mod pendulum;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::model::{BoxConstraints, Dynamics, Problem, QuadraticCost};

pub use cartpole::{CartPole, CartPoleParams};
pub use pendulum::{Pendulum, PendulumParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    Pendulum,
    CartPole,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Pendulum => "pendulum",
            System::CartPole => "cartpole",
        }
    }

    pub fn state_dim(self) -> usize {
        match self {
            System::Pendulum => 2,
            System::CartPole => 4,
        }
    }

    pub fn control_dim(self) -> usize {
        1
    }

    pub fn state_names(self) -> &'static [&'static str] {
        match self {
            System::Pendulum => &["theta", "theta_dot"],
            System::CartPole => &["p", "theta", "p_dot", "theta_dot"],
        }
    }

    pub fn control_names(self) -> &'static [&'static str] {
        match self {
            System::Pendulum => &["tau"],
            System::CartPole => &["force"],
        }
    }

    pub fn control_limit(self) -> f64 {
        match self {
            System::Pendulum => PendulumParams::default().torque_limit,
            System::CartPole => CartPoleParams::default().force_limit,
        }
    }

    /// Upright goal; the cart goal position is `cart_target`.
    pub fn goal(self, cart_target: f64) -> Vector {
        match self {
            System::Pendulum => Vector::from_column_slice(&[PI, 0.0]),
            System::CartPole => Vector::from_column_slice(&[cart_target, PI, 0.0, 0.0]),
        }
    }

    /// Hanging at rest (cart at the origin).
    pub fn rest(self) -> Vector {
        Vector::zeros(self.state_dim())
    }

    /// Default closed-loop start: tilted away from upright with the cart
    /// displaced. A 0.6 s window cannot plan a full swing-up under the
    /// actuator limits, so MPC starts inside the upright basin.
    pub fn mpc_start(self) -> Vector {
        match self {
            System::Pendulum => Vector::from_column_slice(&[PI - 0.4, 0.0]),
            System::CartPole => Vector::from_column_slice(&[-0.5, PI - 0.3, 0.0, 0.0]),
        }
    }

    pub fn dynamics(self, dt: f64) -> Arc<dyn Dynamics> {
        match self {
            System::Pendulum => Arc::new(Pendulum::new(PendulumParams::with_dt(dt))),
            System::CartPole => Arc::new(CartPole::new(CartPoleParams::with_dt(dt))),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pendulum" => Ok(System::Pendulum),
            "cartpole" | "cart-pole" => Ok(System::CartPole),
            other => Err(Error::Config(format!("unknown system '{other}'"))),
        }
    }
}

/// Quadratic tracking weights.
///
/// Stage weights are rates: the stage cost is
/// `dt·[½(x − x_goal)ᵀQ(x − x_goal) + ½ r u²]`, so changing the sampling
/// period approximates the same continuous-time objective. The terminal
/// weight is `terminal_scale·Q` and is not scaled by `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwingupWeights {
    pub q: Vec<f64>,
    pub r: f64,
    pub terminal_scale: f64,
    pub cart_target: f64,
}

impl SwingupWeights {
    pub fn default_for(system: System) -> Self {
        match system {
            System::Pendulum => SwingupWeights {
                q: vec![10.0, 1.0],
                r: 0.1,
                terminal_scale: 10.0,
                cart_target: 0.0,
            },
            System::CartPole => SwingupWeights {
                q: vec![100.0, 100.0, 10.0, 10.0],
                r: 0.1,
                terminal_scale: 10.0,
                cart_target: 0.0,
            },
        }
    }

    pub fn zero(system: System) -> Self {
        SwingupWeights {
            q: vec![0.0; system.state_dim()],
            r: 0.0,
            terminal_scale: 0.0,
            cart_target: 0.0,
        }
    }
}

/// Swing-up from rest to the upright goal over `n` steps of length `dt`,
/// with the control box `|u| ≤ limit`.
pub fn make_swingup_problem(system: System, n: usize, dt: f64, weights: &SwingupWeights) -> Result<Problem> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidOption(format!("dt must be positive, got {dt}")));
    }
    let nx = system.state_dim();
    if weights.q.len() != nx {
        return Err(Error::Dimension {
            what: "state weights",
            expected: nx,
            got: weights.q.len(),
        });
    }
    if weights.q.iter().chain([&weights.r, &weights.terminal_scale]).any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidOption("cost weights must be non-negative".into()));
    }
    let q = Mat::from_diagonal(&Vector::from_column_slice(&weights.q));
    let cost = QuadraticCost::new(
        &q * dt,
        Mat::from_element(1, 1, weights.r * dt),
        &q * weights.terminal_scale,
    )
    .with_goal(system.goal(weights.cart_target));
    let bounds = BoxConstraints::symmetric_control(nx, 1, system.control_limit())?;
    Problem::new(
        system.dynamics(dt),
        Arc::new(cost),
        Some(Arc::new(bounds)),
        n,
        system.rest(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{total_cost, AugmentedCost};

    #[test]
    fn problem_shapes() {
        let p = make_swingup_problem(System::Pendulum, 20, 0.05, &SwingupWeights::default_for(System::Pendulum)).unwrap();
        assert_eq!((p.horizon(), p.state_dim(), p.control_dim()), (20, 2, 1));
        let c = make_swingup_problem(System::CartPole, 1000, 0.005, &SwingupWeights::default_for(System::CartPole)).unwrap();
        assert_eq!((c.horizon(), c.state_dim(), c.control_dim()), (1000, 4, 1));
    }

    #[test]
    fn zero_weights_give_zero_cost() {
        let p = make_swingup_problem(System::CartPole, 15, 0.02, &SwingupWeights::zero(System::CartPole)).unwrap();
        let controls: Vec<Vector> = (0..15).map(|t| Vector::from_element(1, (t as f64).sin() * 30.0)).collect();
        let traj = p.rollout(&controls).unwrap();
        assert_eq!(total_cost(p.cost(), &AugmentedCost::zero(), &traj).unwrap(), 0.0);
    }

    #[test]
    fn parse_system() {
        assert_eq!("cart-pole".parse::<System>().unwrap(), System::CartPole);
        assert_eq!("Pendulum".parse::<System>().unwrap(), System::Pendulum);
        assert!("acrobot".parse::<System>().is_err());
    }
}
