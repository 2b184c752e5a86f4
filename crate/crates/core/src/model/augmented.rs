use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

use super::{Constraints, StageDerivatives};

/// Which augmenting term `c_t` is added to the stage cost.
#[derive(Debug, Clone, PartialEq)]
pub enum Augmentation {
    Zero,
    /// `−μ [Σ log(−g^m(x)) + Σ log(−h^m(u))]`.
    Barrier { mu: f64 },
    /// `(ρ/2) ‖w(x,u) − z_t + v_t/ρ‖²`, one `z_t`, `v_t` per stage.
    Admm {
        rho: f64,
        z: Vec<Vector>,
        v: Vec<Vector>,
    },
}

/// The stage augmentation `c_t(x, u)` bound to a constraint model.
#[derive(Clone)]
pub struct AugmentedCost {
    kind: Augmentation,
    constraints: Option<Arc<dyn Constraints>>,
}

impl std::fmt::Debug for AugmentedCost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AugmentedCost").field("kind", &self.kind).finish()
    }
}

impl AugmentedCost {
    pub fn zero() -> Self {
        AugmentedCost {
            kind: Augmentation::Zero,
            constraints: None,
        }
    }

    pub fn barrier(constraints: Arc<dyn Constraints>, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidOption(format!("barrier parameter must be positive, got {mu}")));
        }
        Ok(AugmentedCost {
            kind: Augmentation::Barrier { mu },
            constraints: Some(constraints),
        })
    }

    pub fn admm(
        constraints: Arc<dyn Constraints>,
        rho: f64,
        z: Vec<Vector>,
        v: Vec<Vector>,
    ) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidOption(format!("penalty must be positive, got {rho}")));
        }
        if z.len() != v.len() {
            return Err(Error::Dimension {
                what: "ADMM multiplier sequence",
                expected: z.len(),
                got: v.len(),
            });
        }
        let dim = constraints.dim();
        for s in z.iter().chain(&v) {
            if s.len() != dim {
                return Err(Error::Dimension {
                    what: "ADMM consensus vector",
                    expected: dim,
                    got: s.len(),
                });
            }
        }
        Ok(AugmentedCost {
            kind: Augmentation::Admm { rho, z, v },
            constraints: Some(constraints),
        })
    }

    pub fn kind(&self) -> &Augmentation {
        &self.kind
    }

    pub fn is_barrier(&self) -> bool {
        matches!(self.kind, Augmentation::Barrier { .. })
    }

    pub fn value(&self, t: usize, x: &Vector, u: &Vector) -> Result<f64> {
        let Some(cons) = self.constraints.as_deref() else {
            return Ok(0.0);
        };
        match &self.kind {
            Augmentation::Zero => Ok(0.0),
            Augmentation::Barrier { mu } => {
                let w = cons.stacked(t, x, u);
                let mut sum = 0.0;
                for (m, &wm) in w.iter().enumerate() {
                    if !(wm < 0.0) {
                        return Err(Error::Infeasible {
                            stage: t,
                            component: m,
                            value: wm,
                        });
                    }
                    sum += (-wm).ln();
                }
                Ok(-mu * sum)
            }
            Augmentation::Admm { rho, z, v } => {
                let r = admm_residual(cons, t, x, u, *rho, z, v)?;
                Ok(0.5 * rho * r.norm_squared())
            }
        }
    }

    pub fn derivatives(&self, t: usize, x: &Vector, u: &Vector) -> Result<StageDerivatives> {
        let mut out = StageDerivatives::zeros(x.len(), u.len());
        let Some(cons) = self.constraints.as_deref() else {
            return Ok(out);
        };
        match &self.kind {
            Augmentation::Zero => {}
            Augmentation::Barrier { mu } => {
                let g = cons.state(t, x);
                let h = cons.control(t, u);
                if let Some(m) = g.iter().position(|v| !(*v < 0.0)) {
                    return Err(Error::Infeasible {
                        stage: t,
                        component: m,
                        value: g[m],
                    });
                }
                if let Some(m) = h.iter().position(|v| !(*v < 0.0)) {
                    return Err(Error::Infeasible {
                        stage: t,
                        component: g.len() + m,
                        value: h[m],
                    });
                }
                let (gx, gxx) = barrier_block(
                    *mu,
                    &g,
                    &cons.state_jacobian(t, x),
                    &cons.state_hessians(t, x),
                );
                let (hu, huu) = barrier_block(
                    *mu,
                    &h,
                    &cons.control_jacobian(t, u),
                    &cons.control_hessians(t, u),
                );
                out.x = gx;
                out.xx = gxx;
                out.u = hu;
                out.uu = huu;
            }
            Augmentation::Admm { rho, z, v } => {
                let r = admm_residual(cons, t, x, u, *rho, z, v)?;
                let mg = cons.state_count();
                let rg = r.rows(0, mg).into_owned();
                let rh = r.rows(mg, r.len() - mg).into_owned();
                let (gx, gxx) = penalty_block(
                    *rho,
                    &rg,
                    &cons.state_jacobian(t, x),
                    &cons.state_hessians(t, x),
                );
                let (hu, huu) = penalty_block(
                    *rho,
                    &rh,
                    &cons.control_jacobian(t, u),
                    &cons.control_hessians(t, u),
                );
                out.x = gx;
                out.xx = gxx;
                out.u = hu;
                out.uu = huu;
            }
        }
        Ok(out)
    }
}

fn admm_residual(
    cons: &dyn Constraints,
    t: usize,
    x: &Vector,
    u: &Vector,
    rho: f64,
    z: &[Vector],
    v: &[Vector],
) -> Result<Vector> {
    let (Some(zt), Some(vt)) = (z.get(t), v.get(t)) else {
        return Err(Error::Dimension {
            what: "ADMM consensus sequence length",
            expected: t + 1,
            got: z.len(),
        });
    };
    Ok(cons.stacked(t, x, u) - zt + vt / rho)
}

// −μ Σ log(−c_m) over one constraint block.
fn barrier_block(mu: f64, c: &Vector, jac: &Mat, hess: &[Mat]) -> (Vector, Mat) {
    let n = jac.ncols();
    let mut grad = Vector::zeros(n);
    let mut h = Mat::zeros(n, n);
    for m in 0..c.len() {
        let row = jac.row(m).transpose();
        let inv = 1.0 / c[m];
        grad -= &row * (mu * inv);
        h += &row * row.transpose() * (mu * inv * inv);
        if let Some(hm) = hess.get(m) {
            h -= hm * (mu * inv);
        }
    }
    (grad, h)
}

// (ρ/2)‖r‖² over one block, r = c − z + v/ρ.
fn penalty_block(rho: f64, r: &Vector, jac: &Mat, hess: &[Mat]) -> (Vector, Mat) {
    let grad = jac.transpose() * r * rho;
    let mut h = jac.transpose() * jac * rho;
    for (m, hm) in hess.iter().enumerate() {
        h += hm * (rho * r[m]);
    }
    (grad, h)
}
