use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Vector;

use super::{AugmentedCost, Constraints, Cost, Dynamics};

/// States `x_1..x_{N+1}` paired with controls `u_1..u_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<Vector>,
    controls: Vec<Vector>,
}

impl Trajectory {
    pub fn new(states: Vec<Vector>, controls: Vec<Vector>) -> Result<Self> {
        if states.len() != controls.len() + 1 {
            return Err(Error::Dimension {
                what: "trajectory length",
                expected: controls.len() + 1,
                got: states.len(),
            });
        }
        check_uniform("state", &states)?;
        check_uniform("control", &controls)?;
        Ok(Trajectory { states, controls })
    }

    /// Number of control stages `N`.
    pub fn horizon(&self) -> usize {
        self.controls.len()
    }

    pub fn states(&self) -> &[Vector] {
        &self.states
    }

    pub fn controls(&self) -> &[Vector] {
        &self.controls
    }

    pub fn initial_state(&self) -> &Vector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &Vector {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn into_parts(self) -> (Vec<Vector>, Vec<Vector>) {
        (self.states, self.controls)
    }
}

fn check_uniform(what: &'static str, seq: &[Vector]) -> Result<()> {
    let Some(first) = seq.first() else {
        return Ok(());
    };
    for (index, v) in seq.iter().enumerate() {
        if v.len() != first.len() {
            return Err(Error::Dimension {
                what,
                expected: first.len(),
                got: v.len(),
            });
        }
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite { what, index });
        }
    }
    Ok(())
}

/// Rolls `controls` through the dynamics starting from `x1`.
pub fn rollout(dynamics: &dyn Dynamics, x1: &Vector, controls: &[Vector]) -> Result<Trajectory> {
    if x1.len() != dynamics.state_dim() {
        return Err(Error::Dimension {
            what: "initial state",
            expected: dynamics.state_dim(),
            got: x1.len(),
        });
    }
    if let Some(u) = controls.iter().find(|u| u.len() != dynamics.control_dim()) {
        return Err(Error::Dimension {
            what: "control",
            expected: dynamics.control_dim(),
            got: u.len(),
        });
    }
    let mut states = Vec::with_capacity(controls.len() + 1);
    states.push(x1.clone());
    for (t, u) in controls.iter().enumerate() {
        let next = dynamics.step(t, &states[t], u);
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { index: t + 1 });
        }
        states.push(next);
    }
    Ok(Trajectory {
        states,
        controls: controls.to_vec(),
    })
}

/// `l_{N+1}(x_{N+1}) + sum_t [l_t(x_t, u_t) + c_t(x_t, u_t)]`.
pub fn total_cost(cost: &dyn Cost, aug: &AugmentedCost, traj: &Trajectory) -> Result<f64> {
    let mut total = cost.terminal(traj.final_state());
    for (t, (x, u)) in traj.states.iter().zip(&traj.controls).enumerate() {
        total += cost.stage(t, x, u) + aug.value(t, x, u)?;
    }
    Ok(total)
}

/// A dynamics/cost/constraint bundle over a fixed horizon.
#[derive(Clone)]
pub struct Problem {
    dynamics: Arc<dyn Dynamics>,
    cost: Arc<dyn Cost>,
    constraints: Option<Arc<dyn Constraints>>,
    horizon: usize,
    initial_state: Vector,
}

impl Problem {
    pub fn new(
        dynamics: Arc<dyn Dynamics>,
        cost: Arc<dyn Cost>,
        constraints: Option<Arc<dyn Constraints>>,
        horizon: usize,
        initial_state: Vector,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidOption("horizon must be positive".into()));
        }
        let (nx, nu) = (dynamics.state_dim(), dynamics.control_dim());
        let dims = [
            ("cost state dimension", nx, cost.state_dim()),
            ("cost control dimension", nu, cost.control_dim()),
            ("initial state", nx, initial_state.len()),
        ];
        for (what, expected, got) in dims {
            if expected != got {
                return Err(Error::Dimension {
                    what,
                    expected,
                    got,
                });
            }
        }
        if let Some(c) = &constraints {
            if c.state_dim() != nx {
                return Err(Error::Dimension {
                    what: "constraint state dimension",
                    expected: nx,
                    got: c.state_dim(),
                });
            }
            if c.control_dim() != nu {
                return Err(Error::Dimension {
                    what: "constraint control dimension",
                    expected: nu,
                    got: c.control_dim(),
                });
            }
        }
        Ok(Problem {
            dynamics,
            cost,
            constraints,
            horizon,
            initial_state,
        })
    }

    pub fn dynamics(&self) -> &dyn Dynamics {
        self.dynamics.as_ref()
    }

    pub fn cost(&self) -> &dyn Cost {
        self.cost.as_ref()
    }

    pub fn constraints(&self) -> Option<&Arc<dyn Constraints>> {
        self.constraints.as_ref()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn initial_state(&self) -> &Vector {
        &self.initial_state
    }

    pub fn state_dim(&self) -> usize {
        self.dynamics.state_dim()
    }

    pub fn control_dim(&self) -> usize {
        self.dynamics.control_dim()
    }

    /// Same models over a different horizon or starting state (used when
    /// shifting an MPC window).
    pub fn with_initial_state(&self, initial_state: Vector) -> Result<Self> {
        Problem::new(
            self.dynamics.clone(),
            self.cost.clone(),
            self.constraints.clone(),
            self.horizon,
            initial_state,
        )
    }

    /// Rolls `controls` from this problem's initial state.
    pub fn rollout(&self, controls: &[Vector]) -> Result<Trajectory> {
        if controls.len() != self.horizon {
            return Err(Error::Dimension {
                what: "control sequence length",
                expected: self.horizon,
                got: controls.len(),
            });
        }
        rollout(self.dynamics(), &self.initial_state, controls)
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("horizon", &self.horizon)
            .field("state_dim", &self.state_dim())
            .field("control_dim", &self.control_dim())
            .field("constrained", &self.constraints.is_some())
            .finish()
    }
}
