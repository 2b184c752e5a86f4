use crate::error::Result;
use crate::linalg::{Mat, Vector};
use crate::model::{AugmentedCost, Cost, Dynamics, Trajectory};
use crate::scan::{scan, Executor, ScanDirection};

use super::{linearize, StageLinearization};

/// Affine map `λ ↦ dl + dc + dfᵀ λ` accumulated between two stages.
#[derive(Debug, Clone, PartialEq)]
pub struct CostateElement {
    pub dl: Vector,
    pub dc: Vector,
    pub df: Mat,
}

impl CostateElement {
    /// Neutral on the right: leaves `dl`, `dc` untouched.
    pub fn identity(nx: usize) -> Self {
        CostateElement {
            dl: Vector::zeros(nx),
            dc: Vector::zeros(nx),
            df: Mat::identity(nx, nx),
        }
    }

    pub fn value(&self) -> Vector {
        &self.dl + &self.dc
    }
}

/// Composition of the stage-`j..t` map (left) with the stage-`t..i` map (right).
pub fn costate_combine(left: &CostateElement, right: &CostateElement) -> CostateElement {
    let dft = left.df.transpose();
    CostateElement {
        dl: &left.dl + &dft * &right.dl,
        dc: &left.dc + &dft * &right.dc,
        df: &right.df * &left.df,
    }
}

/// `λ*_{N+1} = ∂l_{N+1}/∂x`.
pub fn costate_boundary(cost: &dyn Cost, x_final: &Vector) -> Vector {
    cost.terminal_gradient(x_final)
}

/// Scan elements `a_1..a_N`. The last one absorbs the boundary co-state
/// and carries a zero Jacobian so the suffix product ends there.
pub fn costate_elements(lin: &[StageLinearization], terminal_costate: &Vector) -> Vec<CostateElement> {
    let n = lin.len();
    lin.iter()
        .enumerate()
        .map(|(t, s)| {
            if t + 1 == n {
                let nx = s.jac.fx.nrows();
                CostateElement {
                    dl: &s.cost.x + s.jac.fx.transpose() * terminal_costate,
                    dc: s.aug.x.clone(),
                    df: Mat::zeros(nx, nx),
                }
            } else {
                CostateElement {
                    dl: s.cost.x.clone(),
                    dc: s.aug.x.clone(),
                    df: s.jac.fx.clone(),
                }
            }
        })
        .collect()
}

/// Co-states `λ*_1..λ*_{N+1}` from precomputed stage linearizations.
pub fn costate_scan(
    lin: &[StageLinearization],
    terminal_costate: Vector,
    executor: Executor,
) -> Result<Vec<Vector>> {
    let elements = costate_elements(lin, &terminal_costate);
    let suffix = scan(elements, costate_combine, ScanDirection::Reverse, executor)?;
    let mut out: Vec<Vector> = suffix.iter().map(CostateElement::value).collect();
    out.push(terminal_costate);
    Ok(out)
}

/// Parallel co-state pass over a nominal trajectory.
pub fn costate_pass(
    dynamics: &dyn Dynamics,
    cost: &dyn Cost,
    aug: &AugmentedCost,
    traj: &Trajectory,
    executor: Executor,
) -> Result<Vec<Vector>> {
    let lin = linearize(dynamics, cost, aug, traj, executor)?;
    costate_scan(&lin, costate_boundary(cost, traj.final_state()), executor)
}
