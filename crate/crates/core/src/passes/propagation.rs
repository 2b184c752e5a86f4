use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::scan::{scan, Executor, ScanDirection};

use super::{map_stages, Expansion, FeedbackLaw};

/// Affine map `δx_j ↦ F δx_j + e`.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutElement {
    pub f: Mat,
    pub e: Vector,
}

impl RolloutElement {
    pub fn identity(nx: usize) -> Self {
        RolloutElement {
            f: Mat::identity(nx, nx),
            e: Vector::zeros(nx),
        }
    }
}

/// Applies `first` then `second`.
pub fn rollout_combine(first: &RolloutElement, second: &RolloutElement) -> RolloutElement {
    RolloutElement {
        f: &second.f * &first.f,
        e: &second.f * &first.e + &second.e,
    }
}

/// Forward scan of the closed-loop linearized dynamics
/// `δx_{t+1} = (F_x + F_u Γ_t) δx_t + F_u γ_t` from `δx_1 = 0`.
///
/// Returns `(δx_1..δx_{N+1}, δu_1..δu_N)`.
pub fn propagation_pass(
    law: &FeedbackLaw,
    expansion: &Expansion,
    executor: Executor,
) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let n = expansion.horizon();
    if law.horizon() != n {
        return Err(Error::Dimension {
            what: "feedback law length",
            expected: n,
            got: law.horizon(),
        });
    }
    let nx = expansion.state_dim();
    let elements = map_stages(n, executor, |t| {
        let s = &expansion.stages[t];
        let e = &s.fu * &law.offsets[t];
        if t == 0 {
            // δx_1 = 0, so the first element is constant
            Ok(RolloutElement {
                f: Mat::zeros(nx, nx),
                e,
            })
        } else {
            Ok(RolloutElement {
                f: &s.fx + &s.fu * &law.gains[t],
                e,
            })
        }
    })?;
    let prefix = scan(elements, rollout_combine, ScanDirection::Forward, executor)?;
    let mut dx = Vec::with_capacity(n + 1);
    dx.push(Vector::zeros(nx));
    dx.extend(prefix.into_iter().map(|el| el.e));
    let du = map_stages(n, executor, |t| Ok(&law.gains[t] * &dx[t] + &law.offsets[t]))?;
    Ok((dx, du))
}
