use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::MultiIndex;

/// Relative threshold below which coefficients are dropped.
pub const PRUNE_REL: f64 = 1e-15;

/// Sparse multivariate polynomial with complex coefficients.
///
/// Terms are kept in a `BTreeMap` so iteration (and therefore every
/// floating-point summation built on it) happens in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

impl CPoly {
    pub fn zero(nvars: usize) -> Self {
        CPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        Self::monomial(MultiIndex::zeros(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C64::new(1.0, 0.0))
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, j), C64::new(1.0, 0.0))
    }

    pub fn monomial(exps: MultiIndex, c: C64) -> Self {
        let nvars = exps.nvars();
        let mut terms = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            terms.insert(exps, c);
        }
        CPoly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, C64)>) -> Self {
        let mut p = CPoly::zero(nvars);
        for (k, c) in terms {
            debug_assert_eq!(k.nvars(), nvars);
            *p.terms.entry(k).or_default() += c;
        }
        p.prune();
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &MultiIndex) -> C64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Largest degree in variable `j`.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|k| k.get(j)).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops exact zeros and coefficients below `PRUNE_REL` times the largest one.
    pub fn prune(&mut self) {
        let cut = PRUNE_REL * self.max_abs();
        self.terms.retain(|_, c| c.norm() > cut && *c != C64::new(0.0, 0.0));
    }

    pub fn scale(&self, s: C64) -> CPoly {
        if s == C64::new(0.0, 0.0) {
            return CPoly::zero(self.nvars);
        }
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() }
    }

    /// `self += s * other`, followed by pruning.
    pub fn add_scaled(&mut self, other: &CPoly, s: C64) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (k, c) in &other.terms {
            *self.terms.entry(k.clone()).or_default() += c * s;
        }
        self.prune();
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        out.add_scaled(other, C64::new(1.0, 0.0));
        out
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                *terms.entry(ka.add(kb)).or_default() += ca * cb;
            }
        }
        let mut p = CPoly { nvars: self.nvars, terms };
        p.prune();
        p
    }

    /// Multiplication by `x_j`.
    pub fn mul_var(&self, j: usize) -> CPoly {
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.incremented(j), *c)).collect() }
    }

    /// Partial derivative with respect to `x_j`.
    pub fn derivative(&self, j: usize) -> CPoly {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let e = k.get(j);
            if e > 0 {
                terms.insert(k.with(j, e - 1), c * e as f64);
            }
        }
        CPoly { nvars: self.nvars, terms }
    }

    /// The polynomial `x ↦ P(x + δ)`, expanded binomially one variable at a time.
    pub fn shifted(&self, delta: &[C64]) -> CPoly {
        debug_assert_eq!(delta.len(), self.nvars);
        let mut cur = self.clone();
        for (j, &d) in delta.iter().enumerate() {
            if d == C64::new(0.0, 0.0) {
                continue;
            }
            let mut terms: BTreeMap<MultiIndex, C64> = BTreeMap::new();
            for (k, c) in &cur.terms {
                let e = k.get(j);
                // (x + d)^e = Σ_i C(e, i) d^(e-i) x^i
                let mut binom = 1.0;
                let mut dpow = C64::new(1.0, 0.0);
                for i in (0..=e).rev() {
                    *terms.entry(k.with(j, i)).or_default() += c * binom * dpow;
                    binom = binom * i as f64 / (e - i + 1) as f64;
                    dpow *= d;
                }
            }
            cur = CPoly { nvars: self.nvars, terms };
            cur.prune();
        }
        cur
    }

    pub fn conj(&self) -> CPoly {
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect() }
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(k, c)| k.as_slice().iter().zip(x).fold(*c, |acc, (&e, xi)| acc * xi.powu(e)))
            .sum()
    }

    /// Largest coefficient-wise deviation `max |a_γ − b_γ|`.
    pub fn max_deviation(&self, other: &CPoly) -> f64 {
        let mut dev: f64 = 0.0;
        for (k, c) in &self.terms {
            dev = dev.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                dev = dev.max(c.norm());
            }
        }
        dev
    }
}
