use crate::error::{Error, Result};
use crate::linalg::{contract, symmetrize, Mat, Vector};

use super::StageLinearization;

/// Second-order expansion of the Hamiltonian `H_t = l_t + c_t + λ_{t+1}ᵀ f_t`
/// around the nominal trajectory at one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageExpansion {
    /// `∂²H/∂x∂x`
    pub p: Mat,
    /// `∂²H/∂u∂u`
    pub r: Mat,
    /// `R + αI`
    pub r_reg: Mat,
    /// `∂²H/∂x∂u`, `d_x × d_u`
    pub m: Mat,
    /// `∂H/∂u`
    pub d: Vector,
    pub fx: Mat,
    pub fu: Mat,
}

/// The linear-quadratic Newton subproblem over the whole horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub stages: Vec<StageExpansion>,
    /// `P_{N+1} = ∂²l_{N+1}/∂x∂x`
    pub terminal: Mat,
    pub alpha: f64,
}

impl Expansion {
    pub fn horizon(&self) -> usize {
        self.stages.len()
    }

    pub fn state_dim(&self) -> usize {
        self.terminal.nrows()
    }

    /// Same expansion with a different Levenberg–Marquardt term.
    pub fn set_alpha(&mut self, alpha: f64) {
        for s in &mut self.stages {
            s.r_reg = &s.r + Mat::identity(s.r.nrows(), s.r.ncols()) * alpha;
        }
        self.alpha = alpha;
    }

    /// `max_t ‖d_t‖∞`, the reduced gradient of the augmented objective.
    pub fn gradient_norm(&self) -> f64 {
        self.stages
            .iter()
            .flat_map(|s| s.d.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Builds `P_t, R_t, M_t, d_t` (with the co-state contractions of the
/// dynamics Hessians) and `R̃_t = R_t + αI`.
///
/// `costates` holds `λ*_1..λ*_{N+1}`; stage `t` uses `λ*_{t+1}`.
pub fn hamiltonian_expansion(
    lin: &[StageLinearization],
    costates: &[Vector],
    terminal_hessian: Mat,
    alpha: f64,
) -> Result<Expansion> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidOption(format!("regularization must be >= 0, got {alpha}")));
    }
    if costates.len() != lin.len() + 1 {
        return Err(Error::Dimension {
            what: "co-state sequence",
            expected: lin.len() + 1,
            got: costates.len(),
        });
    }
    let stages = lin
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let lambda = &costates[t + 1];
            let nx = s.jac.fx.nrows();
            let nu = s.jac.fu.ncols();
            let p = &s.cost.xx + &s.aug.xx + contract(&s.hess.xx, lambda, nx, nx);
            let r = &s.cost.uu + &s.aug.uu + contract(&s.hess.uu, lambda, nu, nu);
            let m = &s.cost.xu + &s.aug.xu + contract(&s.hess.xu, lambda, nx, nu);
            let d = &s.cost.u + &s.aug.u + s.jac.fu.transpose() * lambda;
            let r = symmetrize(&r);
            StageExpansion {
                p: symmetrize(&p),
                r_reg: &r + Mat::identity(nu, nu) * alpha,
                r,
                m,
                d,
                fx: s.jac.fx.clone(),
                fu: s.jac.fu.clone(),
            }
        })
        .collect();
    Ok(Expansion {
        stages,
        terminal: symmetrize(&terminal_hessian),
        alpha,
    })
}
