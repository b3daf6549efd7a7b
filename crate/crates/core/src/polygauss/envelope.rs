use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{CPoly, MultiIndex};
use crate::error::{PbError, Result};

/// Envelopes closer than this (relative to `1 + magnitude`) are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Smallest admissible eigenvalue of the symmetrised real part of `M`.
pub const POS_DEF_MIN: f64 = 1e-12;

/// The Gaussian factor `exp(−xᵀMx − vᵀx − s)` for real `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussEnvelope {
    m: DMatrix<C64>,
    v: DVector<C64>,
    s: C64,
}

impl GaussEnvelope {
    /// Symmetrises `m` and rejects envelopes that are not integrable over ℝⁿ.
    pub fn new(m: DMatrix<C64>, v: DVector<C64>, s: C64) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(PbError::Domain(format!("quadratic form must be square, got {}x{}", n, m.ncols())));
        }
        if v.len() != n {
            return Err(PbError::Dimension { expected: n, found: v.len() });
        }
        let m = (&m + m.transpose()) * C64::new(0.5, 0.0);
        let min_eig = min_real_part_eigenvalue(&m);
        if min_eig.is_nan() || min_eig <= POS_DEF_MIN {
            return Err(PbError::Domain(format!(
                "real part of the quadratic form is not positive definite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(GaussEnvelope { m, v, s })
    }

    /// `exp(−w/2 · |x|²)`, the unit-width oscillator envelope when `w = 1`.
    pub fn isotropic(nvars: usize, width: f64) -> Self {
        GaussEnvelope {
            m: DMatrix::from_diagonal_element(nvars, nvars, C64::new(0.5 * width, 0.0)),
            v: DVector::zeros(nvars),
            s: C64::new(0.0, 0.0),
        }
    }

    pub fn nvars(&self) -> usize {
        self.v.len()
    }

    pub fn m(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn v(&self) -> &DVector<C64> {
        &self.v
    }

    pub fn s(&self) -> C64 {
        self.s
    }

    /// The exponent `−xᵀMx − vᵀx − s` at a (possibly complex) point.
    pub fn exponent_at(&self, x: &[C64]) -> C64 {
        let n = self.nvars();
        let mut e = -self.s;
        for i in 0..n {
            e -= self.v[i] * x[i];
            for j in 0..n {
                e -= x[i] * self.m[(i, j)] * x[j];
            }
        }
        e
    }

    /// `∂_j` of the exponent, `−(2Mx + v)_j`, as a degree-one polynomial.
    pub fn exponent_gradient(&self, j: usize) -> CPoly {
        let n = self.nvars();
        let mut terms = Vec::with_capacity(n + 1);
        for k in 0..n {
            terms.push((MultiIndex::unit(n, k), -2.0 * self.m[(j, k)]));
        }
        terms.push((MultiIndex::zeros(n), -self.v[j]));
        CPoly::from_terms(n, terms)
    }

    /// Envelope of `x ↦ g(x + δ)`; `M` is unchanged.
    pub fn translated(&self, delta: &[C64]) -> Self {
        let d = DVector::from_column_slice(delta);
        let md = &self.m * &d;
        let v = &self.v + md.scale(2.0);
        let s = self.s + d.dot(&md) + self.v.dot(&d);
        GaussEnvelope { m: self.m.clone(), v, s }
    }

    /// Envelope multiplied by `exp(uᵀx + c)`.
    pub fn times_exp_linear(&self, u: &[C64], c: C64) -> Self {
        let u = DVector::from_column_slice(u);
        GaussEnvelope { m: self.m.clone(), v: &self.v - u, s: self.s - c }
    }

    /// Envelope of the pointwise product of two Gaussians.
    pub fn product(&self, other: &GaussEnvelope) -> Self {
        GaussEnvelope { m: &self.m + &other.m, v: &self.v + &other.v, s: self.s + other.s }
    }

    pub fn conj(&self) -> Self {
        GaussEnvelope { m: self.m.conjugate(), v: self.v.conjugate(), s: self.s.conj() }
    }

    /// Same quadratic and linear parts within `MERGE_TOL`; `s` is ignored since
    /// it can be folded into the polynomial factor.
    pub fn same_shape(&self, other: &GaussEnvelope) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        let close = |a: C64, b: C64| (a - b).norm() <= MERGE_TOL * (1.0 + a.norm().max(b.norm()));
        self.m.iter().zip(other.m.iter()).all(|(a, b)| close(*a, *b))
            && self.v.iter().zip(other.v.iter()).all(|(a, b)| close(*a, *b))
    }

    /// Largest entrywise deviation over `(M, v, s)`.
    pub fn max_deviation(&self, other: &GaussEnvelope) -> f64 {
        let dm = self.m.iter().zip(other.m.iter()).map(|(a, b)| (a - b).norm());
        let dv = self.v.iter().zip(other.v.iter()).map(|(a, b)| (a - b).norm());
        dm.chain(dv).chain(std::iter::once((self.s - other.s).norm())).fold(0.0, f64::max)
    }
}

/// Smallest eigenvalue of `(Re M + Re Mᵀ)/2`.
pub fn min_real_part_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let re = m.map(|z| z.re);
    let sym = (&re + re.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indefinite_real_part() {
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(GaussEnvelope::new(m, DVector::zeros(2), C64::default()), Err(PbError::Domain(_))));
    }

    #[test]
    fn translation_completes_the_square() {
        // exp(−x²/2) shifted by i → exp(−x²/2 − ix + 1/2)
        let e = GaussEnvelope::isotropic(1, 1.0).translated(&[C64::new(0.0, 1.0)]);
        assert!((e.v()[0] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((e.s() - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }
}
