use num_complex::Complex64 as C64;

use super::WeylOp;
use crate::error::{check_dims, PbError, Result};
use crate::polygauss::{MultiIndex, PolyGaussFun};

/// `exp(uᵀx + wᵀ∂ + c0)`: the exponential of an affine combination of
/// positions and derivatives.
///
/// The exponent's two parts have the scalar commutator `[uᵀx, wᵀ∂] = −u·w`,
/// so the operator factors as `exp(uᵀx) · exp(wᵀ∂) · exp(c0 + u·w/2)`, and
/// `exp(wᵀ∂)` is the translation `f ↦ f(· + w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpLinOp {
    pub u: Vec<C64>,
    pub w: Vec<C64>,
    pub c0: C64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ExpLinOp {
    pub fn new(u: Vec<C64>, w: Vec<C64>, c0: C64) -> Result<Self> {
        check_dims(u.len(), w.len())?;
        Ok(ExpLinOp { u, w, c0 })
    }

    pub fn identity(nvars: usize) -> Self {
        ExpLinOp { u: vec![C64::default(); nvars], w: vec![C64::default(); nvars], c0: C64::default() }
    }

    /// Reads `u`, `w`, `c0` off an operator of degree at most one.
    pub fn from_exponent(exponent: &WeylOp) -> Result<Self> {
        if !exponent.is_first_order() {
            return Err(PbError::NotFirstOrder(format!("exponent has degree {}", exponent.degree())));
        }
        let n = exponent.nvars();
        let zero = MultiIndex::zeros(n);
        let u = (0..n).map(|j| exponent.coeff(&MultiIndex::unit(n, j), &zero)).collect();
        let w = (0..n).map(|j| exponent.coeff(&zero, &MultiIndex::unit(n, j))).collect();
        Ok(ExpLinOp { u, w, c0: exponent.coeff(&zero, &zero) })
    }

    pub fn nvars(&self) -> usize {
        self.u.len()
    }

    /// The exponent `uᵀx + wᵀ∂ + c0` as a differential operator.
    pub fn exponent(&self) -> WeylOp {
        WeylOp::affine(&self.u, &self.w, self.c0).expect("u and w have equal length")
    }

    pub fn apply(&self, f: &PolyGaussFun) -> Result<PolyGaussFun> {
        check_dims(self.nvars(), f.nvars())?;
        let scalar = self.c0 + 0.5 * dot(&self.u, &self.w);
        f.translate(&self.w)?.mul_exp_linear(&self.u, scalar)
    }

    pub fn inverse(&self) -> ExpLinOp {
        ExpLinOp { u: self.u.iter().map(|z| -z).collect(), w: self.w.iter().map(|z| -z).collect(), c0: -self.c0 }
    }

    /// `exp(L₁) exp(L₂) = exp(L₁ + L₂ + ½[L₁, L₂])` with `[L₁, L₂] = w₁·u₂ − u₁·w₂`.
    pub fn compose(&self, other: &ExpLinOp) -> Result<ExpLinOp> {
        check_dims(self.nvars(), other.nvars())?;
        let u = self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect();
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect();
        let c0 = self.c0 + other.c0 + 0.5 * (dot(&self.w, &other.u) - dot(&self.u, &other.w));
        Ok(ExpLinOp { u, w, c0 })
    }

    /// Integer power; the exponent simply scales by `k`.
    pub fn pow(&self, k: i32) -> ExpLinOp {
        let s = k as f64;
        ExpLinOp { u: self.u.iter().map(|z| z * s).collect(), w: self.w.iter().map(|z| z * s).collect(), c0: self.c0 * s }
    }

    /// Same operator times the positive scalar `e^{shift}`.
    pub fn with_scalar_shift(&self, shift: C64) -> ExpLinOp {
        ExpLinOp { c0: self.c0 + shift, ..self.clone() }
    }

    /// `T A T⁻¹`, obtained from `x ↦ x + w`, `∂ ↦ ∂ − u`.
    pub fn conjugate_weyl(&self, a: &WeylOp) -> Result<WeylOp> {
        check_dims(self.nvars(), a.nvars())?;
        let neg_u: Vec<C64> = self.u.iter().map(|z| -z).collect();
        a.substitute_shift(&self.w, &neg_u)
    }

    /// Formal self-adjointness of the exponent: `u` real, `w` imaginary, `c0` real.
    pub fn is_formally_self_adjoint(&self, tol: f64) -> bool {
        self.u.iter().all(|z| z.im.abs() <= tol) && self.w.iter().all(|z| z.re.abs() <= tol) && self.c0.im.abs() <= tol
    }
}
