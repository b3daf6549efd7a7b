use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{check_dims, PbError, Result};
use crate::polygauss::{CPoly, MultiIndex, PolyGaussFun, PRUNE_REL};

/// Compositions producing a term of higher total degree are rejected.
pub const DEGREE_LIMIT: usize = 16;

/// Normal-ordered differential operator `Σ c · x^α ∂^β` (positions left of
/// derivatives).
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOp {
    nvars: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), C64>,
}

/// One normal-ordered term `coeff · x^xpow ∂^dpow`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylTerm {
    pub coeff: C64,
    pub xpow: MultiIndex,
    pub dpow: MultiIndex,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Normal-ordered expansion of `∂^β x^γ` as `(x exponents, ∂ exponents, coefficient)`.
fn reorder(beta: &MultiIndex, gamma: &MultiIndex) -> Vec<(MultiIndex, MultiIndex, f64)> {
    let n = beta.nvars();
    let mut acc = vec![(MultiIndex::zeros(n), MultiIndex::zeros(n), 1.0)];
    for j in 0..n {
        let (b, g) = (beta.get(j), gamma.get(j));
        if b == 0 && g == 0 {
            continue;
        }
        // ∂^b x^g = Σ_k C(b,k) g!/(g−k)! x^{g−k} ∂^{b−k}
        let mut factors = Vec::new();
        let mut binom = 1.0;
        let mut falling = 1.0;
        for k in 0..=b.min(g) {
            factors.push((g - k, b - k, binom * falling));
            binom = binom * (b - k) as f64 / (k + 1) as f64;
            falling *= (g - k) as f64;
        }
        acc = acc
            .into_iter()
            .flat_map(|(xs, ds, c)| {
                factors.iter().map(move |&(xe, de, f)| (xs.with(j, xe), ds.with(j, de), c * f))
            })
            .collect();
    }
    acc
}

impl WeylOp {
    pub fn zero(nvars: usize) -> Self {
        WeylOp { nvars, terms: BTreeMap::new() }
    }

    pub fn scalar(nvars: usize, c: C64) -> Self {
        let mut op = Self::zero(nvars);
        op.insert(MultiIndex::zeros(nvars), MultiIndex::zeros(nvars), c);
        op
    }

    pub fn identity(nvars: usize) -> Self {
        Self::scalar(nvars, one())
    }

    /// Multiplication by `x_j`.
    pub fn x(nvars: usize, j: usize) -> Self {
        let mut op = Self::zero(nvars);
        op.insert(MultiIndex::unit(nvars, j), MultiIndex::zeros(nvars), one());
        op
    }

    /// `∂/∂x_j`.
    pub fn d(nvars: usize, j: usize) -> Self {
        let mut op = Self::zero(nvars);
        op.insert(MultiIndex::zeros(nvars), MultiIndex::unit(nvars, j), one());
        op
    }

    /// Momentum `p_j = −i ∂_j`.
    pub fn p(nvars: usize, j: usize) -> Self {
        Self::d(nvars, j).scale(C64::new(0.0, -1.0))
    }

    /// `uᵀx + wᵀ∂ + c`.
    pub fn affine(u: &[C64], w: &[C64], c: C64) -> Result<Self> {
        check_dims(u.len(), w.len())?;
        let n = u.len();
        let mut op = Self::scalar(n, c);
        for j in 0..n {
            op.insert(MultiIndex::unit(n, j), MultiIndex::zeros(n), u[j]);
            op.insert(MultiIndex::zeros(n), MultiIndex::unit(n, j), w[j]);
        }
        op.prune();
        Ok(op)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = WeylTerm>) -> Result<Self> {
        let mut op = Self::zero(nvars);
        for t in terms {
            check_dims(nvars, t.xpow.nvars())?;
            check_dims(nvars, t.dpow.nvars())?;
            op.insert(t.xpow, t.dpow, t.coeff);
        }
        op.prune();
        Ok(op)
    }

    fn insert(&mut self, xpow: MultiIndex, dpow: MultiIndex, c: C64) {
        *self.terms.entry((xpow, dpow)).or_default() += c;
    }

    fn prune(&mut self) {
        let cut = PRUNE_REL * self.max_abs();
        self.terms.retain(|_, c| c.norm() > cut && *c != C64::new(0.0, 0.0));
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

    pub fn terms(&self) -> impl Iterator<Item = WeylTerm> + '_ {
        self.terms
            .iter()
            .map(|((xpow, dpow), c)| WeylTerm { coeff: *c, xpow: xpow.clone(), dpow: dpow.clone() })
    }

    pub fn coeff(&self, xpow: &MultiIndex, dpow: &MultiIndex) -> C64 {
        self.terms.get(&(xpow.clone(), dpow.clone())).copied().unwrap_or_default()
    }

    /// Coefficient of the identity.
    pub fn coeff_constant(&self) -> C64 {
        let zero = MultiIndex::zeros(self.nvars);
        self.coeff(&zero, &zero)
    }

    /// Largest total degree `|α| + |β|` over the terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| a.degree() + b.degree()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise distance `max |a − b|`.
    pub fn max_deviation(&self, other: &WeylOp) -> f64 {
        match self.sub(other) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn scale(&self, s: C64) -> WeylOp {
        let mut op = WeylOp { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() };
        op.prune();
        op
    }

    pub fn add(&self, other: &WeylOp) -> Result<WeylOp> {
        check_dims(self.nvars, other.nvars)?;
        let mut op = self.clone();
        for (k, c) in &other.terms {
            *op.terms.entry(k.clone()).or_default() += c;
        }
        op.prune();
        Ok(op)
    }

    pub fn sub(&self, other: &WeylOp) -> Result<WeylOp> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `Σ c_k A_k`.
    pub fn linear_combination<'a>(nvars: usize, parts: impl IntoIterator<Item = (C64, &'a WeylOp)>) -> Result<WeylOp> {
        let mut op = WeylOp::zero(nvars);
        for (c, a) in parts {
            check_dims(nvars, a.nvars)?;
            for (k, v) in &a.terms {
                *op.terms.entry(k.clone()).or_default() += c * v;
            }
        }
        op.prune();
        Ok(op)
    }

    pub fn add_scalar(&self, c: C64) -> WeylOp {
        self.add(&WeylOp::scalar(self.nvars, c)).expect("same dimension")
    }

    /// Normal-ordered product `A ∘ B` using `∂x = x∂ + 1`.
    pub fn compose(&self, other: &WeylOp) -> Result<WeylOp> {
        check_dims(self.nvars, other.nvars)?;
        let mut op = WeylOp::zero(self.nvars);
        for ((a, b), ca) in &self.terms {
            for ((g, d), cb) in &other.terms {
                for (xs, ds, f) in reorder(b, g) {
                    let xpow = a.add(&xs);
                    let dpow = ds.add(d);
                    let degree = xpow.degree() + dpow.degree();
                    if degree > DEGREE_LIMIT {
                        return Err(PbError::DegreeGuard { degree, limit: DEGREE_LIMIT });
                    }
                    op.insert(xpow, dpow, ca * cb * f);
                }
            }
        }
        op.prune();
        Ok(op)
    }

    pub fn pow(&self, k: u32) -> Result<WeylOp> {
        let mut out = WeylOp::identity(self.nvars);
        for _ in 0..k {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Formal L²(ℝⁿ) adjoint: `c x^α ∂^β ↦ conj(c) (−1)^{|β|} ∂^β x^α`.
    pub fn adjoint(&self) -> WeylOp {
        let mut op = WeylOp::zero(self.nvars);
        for ((a, b), c) in &self.terms {
            let sign = if b.degree() % 2 == 0 { 1.0 } else { -1.0 };
            for (xs, ds, f) in reorder(b, a) {
                op.insert(xs, ds, c.conj() * sign * f);
            }
        }
        op.prune();
        op
    }

    /// `true` when no term carries more than one derivative or position factor.
    pub fn is_first_order(&self) -> bool {
        self.degree() <= 1
    }

    /// Applies the operator to `f`, differentiating once per distinct `∂^β`.
    pub fn apply(&self, f: &PolyGaussFun) -> Result<PolyGaussFun> {
        check_dims(self.nvars, f.nvars())?;
        let mut grouped: BTreeMap<&MultiIndex, Vec<(MultiIndex, C64)>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            grouped.entry(b).or_default().push((a.clone(), *c));
        }
        let mut derivs: BTreeMap<MultiIndex, PolyGaussFun> = BTreeMap::new();
        derivs.insert(MultiIndex::zeros(self.nvars), f.clone());
        let mut parts = Vec::with_capacity(grouped.len());
        for (beta, xs) in grouped {
            let d = derivative_of(&mut derivs, beta)?;
            let poly = CPoly::from_terms(self.nvars, xs);
            parts.push(d.mul_poly(&poly)?);
        }
        PolyGaussFun::linear_combination(self.nvars, parts.iter().map(|p| (one(), p)))
    }

    /// Substitutes `x_j ↦ x_j + shift_x[j]` and `∂_j ↦ ∂_j + shift_d[j]`.
    ///
    /// Scalar shifts commute with everything, so a normal-ordered term maps to
    /// a normal-ordered product of two binomial expansions.
    pub fn substitute_shift(&self, shift_x: &[C64], shift_d: &[C64]) -> Result<WeylOp> {
        check_dims(self.nvars, shift_x.len())?;
        check_dims(self.nvars, shift_d.len())?;
        let mut op = WeylOp::zero(self.nvars);
        for ((a, b), c) in &self.terms {
            let xs = CPoly::monomial(a.clone(), one()).shifted(shift_x);
            let ds = CPoly::monomial(b.clone(), one()).shifted(shift_d);
            for (xe, xc) in xs.iter() {
                for (de, dc) in ds.iter() {
                    op.insert(xe.clone(), de.clone(), c * xc * dc);
                }
            }
        }
        op.prune();
        Ok(op)
    }
}

fn derivative_of(memo: &mut BTreeMap<MultiIndex, PolyGaussFun>, beta: &MultiIndex) -> Result<PolyGaussFun> {
    if let Some(f) = memo.get(beta) {
        return Ok(f.clone());
    }
    let j = (0..beta.nvars()).find(|&j| beta.get(j) > 0).expect("non-zero multi-index");
    let lower = beta.decremented(j).expect("positive entry");
    let d = derivative_of(memo, &lower)?.differentiate(j)?;
    memo.insert(beta.clone(), d.clone());
    Ok(d)
}
