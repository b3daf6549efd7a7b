use num_complex::Complex64 as C64;

use super::{CPoly, GaussEnvelope};
use crate::error::{check_dims, PbError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyGaussTerm {
    pub poly: CPoly,
    pub env: GaussEnvelope,
}

/// Finite sum `Σ P_k(x) exp(E_k(x))` of polynomial-times-Gaussian terms.
///
/// Kept in canonical form: envelopes are pairwise distinct (see
/// [`GaussEnvelope::same_shape`]) and no term has a zero polynomial. The zero
/// function is the empty list.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGaussFun {
    nvars: usize,
    terms: Vec<PolyGaussTerm>,
}

impl PolyGaussFun {
    pub fn zero(nvars: usize) -> Self {
        PolyGaussFun { nvars, terms: Vec::new() }
    }

    pub fn gaussian(env: GaussEnvelope) -> Self {
        let n = env.nvars();
        Self::from_term(CPoly::one(n), env).expect("dimensions agree by construction")
    }

    pub fn from_term(poly: CPoly, env: GaussEnvelope) -> Result<Self> {
        check_dims(env.nvars(), poly.nvars())?;
        let nvars = env.nvars();
        Ok(Self::canonical(nvars, vec![PolyGaussTerm { poly, env }]))
    }

    pub fn from_terms(nvars: usize, terms: Vec<PolyGaussTerm>) -> Result<Self> {
        for t in &terms {
            check_dims(nvars, t.poly.nvars())?;
            check_dims(nvars, t.env.nvars())?;
        }
        Ok(Self::canonical(nvars, terms))
    }

    fn canonical(nvars: usize, incoming: Vec<PolyGaussTerm>) -> Self {
        let mut terms: Vec<PolyGaussTerm> = Vec::with_capacity(incoming.len());
        for t in incoming {
            if t.poly.is_zero() {
                continue;
            }
            match terms.iter_mut().find(|e| e.env.same_shape(&t.env)) {
                Some(existing) => {
                    let rescale = (existing.env.s() - t.env.s()).exp();
                    existing.poly.add_scaled(&t.poly, rescale);
                }
                None => terms.push(t),
            }
        }
        terms.retain(|t| !t.poly.is_zero());
        PolyGaussFun { nvars, terms }
    }

    fn map_terms(&self, f: impl Fn(&PolyGaussTerm) -> PolyGaussTerm) -> Self {
        Self::canonical(self.nvars, self.terms.iter().map(f).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[PolyGaussTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest polynomial coefficient magnitude over all terms.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.iter().map(|t| t.poly.max_abs()).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.poly.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyGaussFun) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        let all = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(Self::canonical(self.nvars, all))
    }

    pub fn sub(&self, other: &PolyGaussFun) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_terms(|t| PolyGaussTerm { poly: t.poly.scale(c), env: t.env.clone() })
    }

    /// Linear combination `Σ c_k f_k`.
    pub fn linear_combination<'a>(
        nvars: usize,
        parts: impl IntoIterator<Item = (C64, &'a PolyGaussFun)>,
    ) -> Result<Self> {
        let mut all = Vec::new();
        for (c, f) in parts {
            check_dims(nvars, f.nvars)?;
            all.extend(f.terms.iter().map(|t| PolyGaussTerm { poly: t.poly.scale(c), env: t.env.clone() }));
        }
        Ok(Self::canonical(nvars, all))
    }

    pub fn mul_poly(&self, p: &CPoly) -> Result<Self> {
        check_dims(self.nvars, p.nvars())?;
        Ok(self.map_terms(|t| PolyGaussTerm { poly: t.poly.mul(p), env: t.env.clone() }))
    }

    /// Multiplication by the coordinate `x_j`.
    pub fn mul_var(&self, j: usize) -> Result<Self> {
        self.check_index(j)?;
        Ok(self.map_terms(|t| PolyGaussTerm { poly: t.poly.mul_var(j), env: t.env.clone() }))
    }

    /// `∂_j (P e^E) = (∂_j P + P ∂_j E) e^E`.
    pub fn differentiate(&self, j: usize) -> Result<Self> {
        self.check_index(j)?;
        Ok(self.map_terms(|t| {
            let mut poly = t.poly.derivative(j);
            poly.add_scaled(&t.poly.mul(&t.env.exponent_gradient(j)), C64::new(1.0, 0.0));
            PolyGaussTerm { poly, env: t.env.clone() }
        }))
    }

    /// The function `x ↦ f(x + δ)` for a complex shift `δ`.
    pub fn translate(&self, delta: &[C64]) -> Result<Self> {
        check_dims(self.nvars, delta.len())?;
        Ok(self.map_terms(|t| PolyGaussTerm { poly: t.poly.shifted(delta), env: t.env.translated(delta) }))
    }

    /// Multiplication by `exp(uᵀx + c)`.
    pub fn mul_exp_linear(&self, u: &[C64], c: C64) -> Result<Self> {
        check_dims(self.nvars, u.len())?;
        Ok(self.map_terms(|t| PolyGaussTerm { poly: t.poly.clone(), env: t.env.times_exp_linear(u, c) }))
    }

    /// Complex conjugate as a function of real arguments.
    pub fn conj(&self) -> Self {
        self.map_terms(|t| PolyGaussTerm { poly: t.poly.conj(), env: t.env.conj() })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PolyGaussFun) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        let mut all = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                all.push(PolyGaussTerm { poly: a.poly.mul(&b.poly), env: a.env.product(&b.env) });
            }
        }
        Ok(Self::canonical(self.nvars, all))
    }

    pub fn eval(&self, x: &[C64]) -> Result<C64> {
        check_dims(self.nvars, x.len())?;
        Ok(self.terms.iter().map(|t| t.poly.eval(x) * t.env.exponent_at(x).exp()).sum())
    }

    /// Coefficient-wise distance to `other`, matching terms by envelope.
    ///
    /// Terms without a partner count with their full coefficient magnitude.
    pub fn max_coefficient_deviation(&self, other: &PolyGaussFun) -> f64 {
        match self.sub(other) {
            Ok(diff) => diff.max_coefficient(),
            Err(_) => f64::INFINITY,
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.nvars {
            return Err(PbError::IndexOutOfRange { index: j, nvars: self.nvars });
        }
        Ok(())
    }
}
