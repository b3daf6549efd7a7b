//! Independent spectrum oracle: the operator's matrix in a truncated
//! two-mode Hermite basis, diagonalized numerically.

use std::collections::HashMap;

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{PbError, Result};
use crate::weyl::WeylOp;

/// `x` and `∂` on the first `dim` Hermite functions, using
/// `x = (c + c†)/√2` and `∂ = (c − c†)/√2`.
fn mode_matrices(dim: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let mut x = DMatrix::zeros(dim, dim);
    let mut d = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64 / 2.0).sqrt();
        // ⟨n−1| c |n⟩ = √n, ⟨n| c† |n−1⟩ = √n
        x[(n - 1, n)] = C64::new(s, 0.0);
        x[(n, n - 1)] = C64::new(s, 0.0);
        d[(n - 1, n)] = C64::new(s, 0.0);
        d[(n, n - 1)] = C64::new(-s, 0.0);
    }
    (x, d)
}

/// Eigenvalues of the `size² × size²` truncation of `op` (two variables),
/// sorted by real part.
///
/// Monomials are formed in a basis padded by the operator degree before
/// truncating, so each retained matrix element is exact.
pub fn truncated_spectrum(op: &WeylOp, size: usize) -> Result<Vec<C64>> {
    if op.nvars() != 2 {
        return Err(PbError::Dimension { expected: 2, found: op.nvars() });
    }
    let padded = size + op.degree();
    let (x, d) = mode_matrices(padded);
    let mut cache: HashMap<(u32, u32), DMatrix<C64>> = HashMap::new();
    let mut block = |xp: u32, dp: u32| -> DMatrix<C64> {
        cache
            .entry((xp, dp))
            .or_insert_with(|| {
                let mut m = DMatrix::identity(padded, padded);
                for _ in 0..xp {
                    m = &m * &x;
                }
                for _ in 0..dp {
                    m = &m * &d;
                }
                m.view((0, 0), (size, size)).into_owned()
            })
            .clone()
    };
    let dim = size * size;
    let mut mat = Mat::<C64>::zeros(dim, dim);
    for term in op.terms() {
        let m1 = block(term.xpow.get(0), term.dpow.get(0));
        let m2 = block(term.xpow.get(1), term.dpow.get(1));
        for i1 in 0..size {
            for j1 in 0..size {
                let a = term.coeff * m1[(i1, j1)];
                if a == C64::default() {
                    continue;
                }
                for i2 in 0..size {
                    for j2 in 0..size {
                        let b = m2[(i2, j2)];
                        if b != C64::default() {
                            mat[(i1 * size + i2, j1 * size + j2)] += a * b;
                        }
                    }
                }
            }
        }
    }
    let mut values = mat
        .eigenvalues()
        .map_err(|e| PbError::NumericalConsistency(format!("eigenvalue solver failed: {e:?}")))?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::weyl_from_xp;

    #[test]
    fn oscillator_levels() {
        let h = weyl_from_xp("0.5*(p1^2 + x1^2) + 0.5*(p2^2 + x2^2)", 2).unwrap();
        let ev = truncated_spectrum(&h, 8).unwrap();
        let want = [1.0, 2.0, 2.0, 3.0, 3.0, 3.0];
        for (e, w) in ev.iter().zip(want) {
            assert!((e - C64::new(w, 0.0)).norm() < 1e-10, "{e} vs {w}");
        }
    }
}
