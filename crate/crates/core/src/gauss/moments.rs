use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::base::{log_gaussian_base_integral, symmetrized};
use crate::error::{PbError, Result};
use crate::polygauss::MultiIndex;

/// Default cap on the total order of a Gaussian moment.
pub const MOMENT_CAP: usize = 64;

/// Centered Gaussian moments `E[y^γ]` for a complex covariance, via the
/// Isserlis pairing expansion: the first factor is paired with every other
/// factor in turn. Results are memoised per `γ`.
#[derive(Clone, Debug)]
pub struct WickMoments {
    cov: DMatrix<C64>,
    cap: usize,
    memo: HashMap<MultiIndex, C64>,
}

impl WickMoments {
    pub fn new(cov: DMatrix<C64>) -> Self {
        Self::with_cap(cov, MOMENT_CAP)
    }

    pub fn with_cap(cov: DMatrix<C64>, cap: usize) -> Self {
        WickMoments { cov, cap, memo: HashMap::new() }
    }

    pub fn moment(&mut self, gamma: &MultiIndex) -> Result<C64> {
        if gamma.nvars() != self.cov.nrows() {
            return Err(PbError::Dimension { expected: self.cov.nrows(), found: gamma.nvars() });
        }
        let order = gamma.degree();
        if order > self.cap {
            return Err(PbError::MomentCap { order, cap: self.cap });
        }
        Ok(self.moment_rec(gamma))
    }

    fn moment_rec(&mut self, gamma: &MultiIndex) -> C64 {
        let order = gamma.degree();
        if order == 0 {
            return C64::new(1.0, 0.0);
        }
        if order % 2 == 1 {
            return C64::new(0.0, 0.0);
        }
        if let Some(v) = self.memo.get(gamma) {
            return *v;
        }
        let n = gamma.nvars();
        let i = (0..n).find(|&j| gamma.get(j) > 0).expect("non-zero order");
        let rest = gamma.decremented(i).expect("positive entry");
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            let mult = rest.get(k);
            if mult == 0 {
                continue;
            }
            let sub = rest.decremented(k).expect("positive entry");
            acc += self.cov[(i, k)] * mult as f64 * self.moment_rec(&sub);
        }
        self.memo.insert(gamma.clone(), acc);
        acc
    }
}

/// Centered moment `E[y^γ]` of a complex Gaussian with covariance `cov`.
pub fn wick_moment(cov: &DMatrix<C64>, gamma: &MultiIndex) -> Result<C64> {
    WickMoments::new(cov.clone()).moment(gamma)
}

/// Closed-form data for `∫ P(x) exp(−xᵀMx − vᵀx) dx`: the zeroth moment,
/// mean `μ = −½M⁻¹v` and covariance `Σ = ½M⁻¹`.
#[derive(Clone, Debug)]
pub struct MomentContext {
    pub m: DMatrix<C64>,
    pub v: DVector<C64>,
    pub log_base: C64,
    pub mean: DVector<C64>,
    pub cov: DMatrix<C64>,
}

impl MomentContext {
    pub fn new(m: &DMatrix<C64>, v: &DVector<C64>) -> Result<Self> {
        let m = symmetrized(m, v)?;
        let inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| PbError::Domain("singular quadratic form".into()))?;
        let cov = &inv * C64::new(0.5, 0.0);
        let mean = -(&inv * v) * C64::new(0.5, 0.0);
        let log_base = log_gaussian_base_integral(&m, v)?;
        Ok(MomentContext { m, v: v.clone(), log_base, mean, cov })
    }

    pub fn base(&self) -> C64 {
        self.log_base.exp()
    }

    pub fn raw_moments(&self, max_degree: usize) -> Result<RawMoments> {
        RawMoments::new(&self.mean, &self.cov, max_degree)
    }
}

/// Dense table of non-central moments `E[x^γ]`, `|γ| ≤ max_degree`, for
/// `x ~ N(μ, Σ)` with complex parameters. Filled with the Gaussian
/// integration-by-parts recursion
/// `E[x^{β+e_i}] = μ_i E[x^β] + Σ_k Σ_ik β_k E[x^{β−e_k}]`.
#[derive(Clone, Debug)]
pub struct RawMoments {
    nvars: usize,
    radix: usize,
    max_degree: usize,
    data: Vec<C64>,
}

const MAX_TABLE: usize = 1 << 24;

impl RawMoments {
    pub fn new(mean: &DVector<C64>, cov: &DMatrix<C64>, max_degree: usize) -> Result<Self> {
        if max_degree > MOMENT_CAP {
            return Err(PbError::MomentCap { order: max_degree, cap: MOMENT_CAP });
        }
        let nvars = mean.len();
        let radix = max_degree + 1;
        let size = (0..nvars).try_fold(1usize, |acc, _| acc.checked_mul(radix)).filter(|&s| s <= MAX_TABLE);
        let Some(size) = size else {
            return Err(PbError::MomentCap { order: max_degree, cap: MOMENT_CAP });
        };
        let mut table = RawMoments { nvars, radix, max_degree, data: vec![C64::new(0.0, 0.0); size] };
        table.data[0] = C64::new(1.0, 0.0);
        for gamma in MultiIndex::all_up_to(nvars, max_degree).into_iter().skip(1) {
            let i = (0..nvars).find(|&j| gamma.get(j) > 0).expect("non-zero index");
            let beta = gamma.decremented(i).expect("positive entry");
            let mut acc = mean[i] * table.data[table.offset(&beta)];
            for k in 0..nvars {
                let b = beta.get(k);
                if b > 0 {
                    let sub = beta.decremented(k).expect("positive entry");
                    acc += cov[(i, k)] * b as f64 * table.data[table.offset(&sub)];
                }
            }
            let at = table.offset(&gamma);
            table.data[at] = acc;
        }
        Ok(table)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn offset(&self, gamma: &MultiIndex) -> usize {
        gamma.as_slice().iter().rev().fold(0, |acc, &e| acc * self.radix + e as usize)
    }

    /// Moment of `x^{α+β}` without materialising the summed index.
    pub fn get_sum(&self, a: &MultiIndex, b: &MultiIndex) -> C64 {
        debug_assert!(a.degree() + b.degree() <= self.max_degree);
        let off = a
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .rev()
            .fold(0, |acc, (&x, &y)| acc * self.radix + (x + y) as usize);
        self.data[off]
    }

    pub fn get(&self, gamma: &MultiIndex) -> C64 {
        debug_assert_eq!(gamma.nvars(), self.nvars);
        debug_assert!(gamma.degree() <= self.max_degree);
        self.data[self.offset(gamma)]
    }
}
