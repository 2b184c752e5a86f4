//! Value-function pass.
//!
//! A conditional value function `V_{j,i}(δx_j, δx_i)` is stored in dual form
//!
//! ```text
//! max_p  ½ δx_jᵀ Y δx_j − δx_jᵀ η − ½ pᵀ C p − pᵀ (δx_i − A δx_j − b)
//! ```
//!
//! and two adjacent elements combine by minimizing over the shared state.
//! The suffix product `ν_t ⊗ … ⊗ ν_{N+1}` gives the cost-to-go
//! `V_t(δx) = ½ δxᵀ S_t δx + δxᵀ s_t` with `S_t = Y`, `s_t = −η`.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, lu_solve, symmetrize, Mat, Vector};
use crate::scan::{try_scan, Executor, ScanDirection};

use super::{map_stages, Expansion, StageExpansion};

#[derive(Debug, Clone, PartialEq)]
pub struct ValueElement {
    pub a: Mat,
    pub y: Mat,
    pub c: Mat,
    pub eta: Vector,
    pub b: Vector,
}

impl ValueElement {
    /// Neutral element: `A = I`, everything else zero.
    pub fn identity(nx: usize) -> Self {
        ValueElement {
            a: Mat::identity(nx, nx),
            y: Mat::zeros(nx, nx),
            c: Mat::zeros(nx, nx),
            eta: Vector::zeros(nx),
            b: Vector::zeros(nx),
        }
    }

    /// Boundary element `ν_{N+1}`: zero except `Y = P_{N+1}`.
    pub fn terminal(p_final: &Mat) -> Self {
        let nx = p_final.nrows();
        ValueElement {
            a: Mat::zeros(nx, nx),
            y: symmetrize(p_final),
            c: Mat::zeros(nx, nx),
            eta: Vector::zeros(nx),
            b: Vector::zeros(nx),
        }
    }
}

/// Single-stage element `ν_t = V_{t,t+1}`.
///
/// Eliminating `δu_t` from the stage cost gives
///
/// ```text
/// A = F_x − F_u R̃⁻¹ Mᵀ      Y = P − M R̃⁻¹ Mᵀ      C = F_u R̃⁻¹ F_uᵀ
/// η = M R̃⁻¹ d               b = −F_u R̃⁻¹ d
/// ```
///
/// These are the `q_t`/`r_t` forms with `P_t⁻¹` cancelled, so singular or
/// indefinite `P_t` needs no special handling.
pub fn value_element_init(exp: &StageExpansion, stage: usize) -> Result<ValueElement> {
    let chol = cholesky(&exp.r_reg).ok_or(Error::Definiteness {
        what: "R + alpha I",
        stage,
    })?;
    let nu = exp.r_reg.nrows();
    // R̃⁻¹ [Mᵀ | d | F_uᵀ]
    let nx = exp.fx.nrows();
    let mut rhs = Mat::zeros(nu, 2 * nx + 1);
    rhs.columns_mut(0, nx).copy_from(&exp.m.transpose());
    rhs.set_column(nx, &exp.d);
    rhs.columns_mut(nx + 1, nx).copy_from(&exp.fu.transpose());
    let sol = chol.solve(&rhs);
    let rinv_mt = sol.columns(0, nx);
    let rinv_d = sol.column(nx);
    let rinv_fut = sol.columns(nx + 1, nx);
    Ok(ValueElement {
        a: &exp.fx - &exp.fu * rinv_mt,
        y: symmetrize(&(&exp.p - &exp.m * rinv_mt)),
        c: symmetrize(&(&exp.fu * rinv_fut)),
        eta: &exp.m * rinv_d,
        b: -(&exp.fu * rinv_d),
    })
}

/// `V_{j,i} = min_{δx_t} V_{j,t} + V_{t,i}` in parameter form.
pub fn value_combine(left: &ValueElement, right: &ValueElement) -> Result<ValueElement> {
    let nx = left.a.nrows();
    let eye = Mat::identity(nx, nx);
    // (I + C_l Y_r)⁻¹ [A_l | b_l + C_l η_r | C_l A_rᵀ]
    let m1 = &eye + &left.c * &right.y;
    let mut rhs1 = Mat::zeros(nx, 2 * nx + 1);
    rhs1.columns_mut(0, nx).copy_from(&left.a);
    rhs1.set_column(nx, &(&left.b + &left.c * &right.eta));
    rhs1.columns_mut(nx + 1, nx).copy_from(&(&left.c * right.a.transpose()));
    let s1 = lu_solve(&m1, &rhs1).ok_or(Error::Conditioning)?;
    // (I + Y_r C_l)⁻¹ [Y_r A_l | η_r − Y_r b_l]
    let m2 = &eye + &right.y * &left.c;
    let mut rhs2 = Mat::zeros(nx, nx + 1);
    rhs2.columns_mut(0, nx).copy_from(&(&right.y * &left.a));
    rhs2.set_column(nx, &(&right.eta - &right.y * &left.b));
    let s2 = lu_solve(&m2, &rhs2).ok_or(Error::Conditioning)?;

    let a = &right.a * s1.columns(0, nx);
    let b = &right.a * s1.column(nx) + &right.b;
    let c = &right.a * s1.columns(nx + 1, nx) + &right.c;
    let alt = left.a.transpose();
    let y = &alt * s2.columns(0, nx) + &left.y;
    let eta = &alt * s2.column(nx) + &left.eta;
    Ok(ValueElement {
        a,
        y: symmetrize(&y),
        c: symmetrize(&c),
        eta,
        b,
    })
}

/// Affine control law `δu_t = Γ_t δx_t + γ_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackLaw {
    pub gains: Vec<Mat>,
    pub offsets: Vec<Vector>,
}

impl FeedbackLaw {
    pub fn horizon(&self) -> usize {
        self.gains.len()
    }
}

/// Output of [`value_pass`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSolution {
    /// `S_1..S_{N+1}`
    pub s_mat: Vec<Mat>,
    /// `s_1..s_{N+1}`
    pub s_vec: Vec<Vector>,
    pub law: FeedbackLaw,
}

/// Gains from the cost-to-go at `t+1`:
/// `Q = R̃ + F_uᵀ S F_u`, `Γ = −Q⁻¹(Mᵀ + F_uᵀ S F_x)`, `γ = −Q⁻¹(d + F_uᵀ s)`.
pub fn feedback_law(
    exp: &StageExpansion,
    s_next: &Mat,
    s_vec_next: &Vector,
    stage: usize,
) -> Result<(Mat, Vector)> {
    let fut_s = exp.fu.transpose() * s_next;
    let q = &exp.r_reg + &fut_s * &exp.fu;
    let chol = cholesky(&q).ok_or(Error::Definiteness { what: "Q", stage })?;
    let gain = -chol.solve(&(exp.m.transpose() + &fut_s * &exp.fx));
    let offset = -chol.solve(&(&exp.d + exp.fu.transpose() * s_vec_next));
    Ok((gain, offset))
}

/// Parallel value-function pass: reverse scan over `ν_1..ν_{N+1}`, then the
/// per-stage feedback law.
pub fn value_pass(expansion: &Expansion, executor: Executor) -> Result<ValueSolution> {
    let n = expansion.horizon();
    let mut elements = map_stages(n, executor, |t| value_element_init(&expansion.stages[t], t))?;
    elements.push(ValueElement::terminal(&expansion.terminal));
    let suffix = try_scan(elements, value_combine, ScanDirection::Reverse, executor)?;
    let s_mat: Vec<Mat> = suffix.iter().map(|e| e.y.clone()).collect();
    let s_vec: Vec<Vector> = suffix.iter().map(|e| -&e.eta).collect();
    let laws = map_stages(n, executor, |t| {
        feedback_law(&expansion.stages[t], &s_mat[t + 1], &s_vec[t + 1], t)
    })?;
    let (gains, offsets) = laws.into_iter().unzip();
    Ok(ValueSolution {
        s_mat,
        s_vec,
        law: FeedbackLaw { gains, offsets },
    })
}
