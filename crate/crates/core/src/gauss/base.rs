use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{PbError, Result};
use crate::polygauss::{min_real_part_eigenvalue, POS_DEF_MIN};

const INITIAL_STEPS: usize = 16;
const MIN_STEP: f64 = 1.0 / (1u64 << 30) as f64;

/// `∫_{ℝⁿ} exp(−xᵀMx − vᵀx) dx = π^{n/2} det(M)^{−1/2} exp(¼ vᵀM⁻¹v)`.
pub fn gaussian_base_integral(m: &DMatrix<C64>, v: &DVector<C64>) -> Result<C64> {
    Ok(log_gaussian_base_integral(m, v)?.exp())
}

/// Logarithm of [`gaussian_base_integral`], on the branch fixed by continuity.
pub(crate) fn log_gaussian_base_integral(m: &DMatrix<C64>, v: &DVector<C64>) -> Result<C64> {
    let m = symmetrized(m, v)?;
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| PbError::Domain("singular quadratic form".into()))?;
    let n = m.nrows() as f64;
    let quad = v.dot(&(&inv * v));
    let log_sqrt_det = inv_sqrt_det(&m)?.ln();
    Ok(C64::new(0.5 * n * PI.ln(), 0.0) + log_sqrt_det + 0.25 * quad)
}

pub(crate) fn symmetrized(m: &DMatrix<C64>, v: &DVector<C64>) -> Result<DMatrix<C64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(PbError::Domain(format!("quadratic form must be square, got {}x{}", n, m.ncols())));
    }
    if v.len() != n {
        return Err(PbError::Dimension { expected: n, found: v.len() });
    }
    let m = (m + m.transpose()) * C64::new(0.5, 0.0);
    let min_eig = min_real_part_eigenvalue(&m);
    if min_eig.is_nan() || min_eig <= POS_DEF_MIN {
        return Err(PbError::Domain(format!(
            "real part of the quadratic form is not positive definite (smallest eigenvalue {min_eig:e})"
        )));
    }
    Ok(m)
}

/// `det(M)^{−1/2}`, continued from the positive root at `Re M` along
/// `M(t) = Re M + t·i·Im M`. Steps are halved whenever the determinant's
/// phase moves by more than π/2 in one step.
pub fn inv_sqrt_det(m: &DMatrix<C64>) -> Result<C64> {
    let re = m.map(|z| C64::new(z.re, 0.0));
    let im = m.map(|z| C64::new(0.0, z.im));
    let det_at = |t: f64| (&re + &im * C64::new(t, 0.0)).determinant();

    let mut t = 0.0;
    let mut det = det_at(0.0);
    if det.re.is_nan() || det.re <= 0.0 {
        return Err(PbError::Domain("real part of the quadratic form has non-positive determinant".into()));
    }
    let mut root = C64::new(det.re.sqrt(), 0.0);
    let mut h = 1.0 / INITIAL_STEPS as f64;
    while t < 1.0 {
        let step = h.min(1.0 - t);
        let next = det_at(t + step);
        if next == C64::new(0.0, 0.0) {
            return Err(PbError::Domain("quadratic form degenerates along the branch path".into()));
        }
        if (next / det).arg().abs() > FRAC_PI_2 {
            h *= 0.5;
            if h < MIN_STEP {
                return Err(PbError::Domain("branch tracking failed to resolve det(M) phase".into()));
            }
            continue;
        }
        let cand = next.sqrt();
        root = if (cand - root).norm() <= (cand + root).norm() { cand } else { -cand };
        det = next;
        t += step;
    }
    Ok(root.inv())
}
