//! Closed-form integrals of polynomial-times-Gaussian functions.
//!
//! `∫ P(x) exp(−xᵀMx − vᵀx − s) dx` is the zeroth moment times the
//! expectation of `P` under the complex Gaussian with mean `−½M⁻¹v` and
//! covariance `½M⁻¹`; the expectation is a contraction with Wick moments.

mod base;
mod moments;
pub mod quadrature;

pub use base::{gaussian_base_integral, inv_sqrt_det};
pub use moments::{wick_moment, MomentContext, RawMoments, WickMoments, MOMENT_CAP};

use num_complex::Complex64 as C64;

use crate::error::{check_dims, PbError, Result};
use crate::polygauss::{CPoly, GaussEnvelope, PolyGaussFun};

/// Relative tolerance on the imaginary part of a squared norm.
pub const NORM_IMAG_TOL: f64 = 1e-10;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: C64,
    comp: C64,
    abs: f64,
}

impl Accumulator {
    fn add(&mut self, x: C64) {
        self.sum = C64::new(two_sum(self.sum.re, x.re, &mut self.comp.re), two_sum(self.sum.im, x.im, &mut self.comp.im));
        self.abs += x.norm();
    }

    fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64, comp: &mut f64) -> f64 {
    let s = a + b;
    if a.abs() >= b.abs() {
        *comp += (a - s) + b;
    } else {
        *comp += (b - s) + a;
    }
    s
}

/// `∫ conj(P)·Q · exp(E)` for a single envelope, where `conj_p` is already
/// conjugated. Returns the value and the sum of absolute contributions.
fn contract(conj_p: &CPoly, q: &CPoly, env: &GaussEnvelope) -> Result<(C64, f64)> {
    let (sum, abs, log_prefactor) = contract_scaled(conj_p, q, env)?;
    let prefactor = log_prefactor.exp();
    Ok((sum * prefactor, abs * prefactor.norm()))
}

/// Polynomial contraction `Σ`, its absolute counterpart, and the logarithm
/// of the Gaussian prefactor, kept apart so callers can avoid under- and
/// overflow.
fn contract_scaled(conj_p: &CPoly, q: &CPoly, env: &GaussEnvelope) -> Result<(C64, f64, C64)> {
    let ctx = MomentContext::new(env.m(), env.v())?;
    let degree = conj_p.degree() + q.degree();
    let table = ctx.raw_moments(degree)?;
    let mut acc = Accumulator::default();
    for (a, ca) in conj_p.iter() {
        for (b, cb) in q.iter() {
            acc.add(ca * cb * table.get_sum(a, b));
        }
    }
    Ok((acc.value(), acc.abs, ctx.log_base - env.s()))
}

/// `∫_{ℝⁿ} f(x) dx` in closed form.
pub fn integrate_polygauss(f: &PolyGaussFun) -> Result<C64> {
    let one = CPoly::one(f.nvars());
    let mut acc = Accumulator::default();
    for t in f.terms() {
        acc.add(contract(&one, &t.poly, &t.env)?.0);
    }
    Ok(acc.value())
}

/// Same integral computed by recentering each polynomial at the Gaussian mean
/// and contracting with centered Isserlis moments.
pub fn integrate_polygauss_recentered(f: &PolyGaussFun) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for t in f.terms() {
        let ctx = MomentContext::new(t.env.m(), t.env.v())?;
        let mean: Vec<C64> = ctx.mean.iter().copied().collect();
        let centered = t.poly.shifted(&mean);
        let mut wick = WickMoments::new(ctx.cov.clone());
        let mut sum = C64::new(0.0, 0.0);
        for (gamma, c) in centered.iter() {
            sum += c * wick.moment(gamma)?;
        }
        total += sum * (ctx.log_base - t.env.s()).exp();
    }
    Ok(total)
}

/// `⟨f, g⟩ = ∫ conj(f)·g`, conjugate-linear in `f`.
pub fn inner_product(f: &PolyGaussFun, g: &PolyGaussFun) -> Result<C64> {
    Ok(inner_product_with_scale(f, g)?.0)
}

/// Inner product together with `Σ |contributions|`, the magnitude against
/// which its rounding error is measured.
pub fn inner_product_with_scale(f: &PolyGaussFun, g: &PolyGaussFun) -> Result<(C64, f64)> {
    check_dims(f.nvars(), g.nvars())?;
    let mut acc = Accumulator::default();
    let mut scale = 0.0;
    for a in f.terms() {
        let pa = a.poly.conj();
        let ea = a.env.conj();
        for b in g.terms() {
            let (v, s) = contract(&pa, &b.poly, &ea.product(&b.env))?;
            acc.add(v);
            scale += s;
        }
    }
    Ok((acc.value(), scale))
}

/// `ln⟨f, g⟩`, evaluated in log space when both functions have a single
/// term so that values far outside the floating-point range stay usable.
pub fn log_inner_product(f: &PolyGaussFun, g: &PolyGaussFun) -> Result<C64> {
    check_dims(f.nvars(), g.nvars())?;
    if let ([a], [b]) = (f.terms(), g.terms()) {
        let (sum, _, log_prefactor) = contract_scaled(&a.poly.conj(), &b.poly, &a.env.conj().product(&b.env))?;
        return Ok(sum.ln() + log_prefactor);
    }
    Ok(inner_product(f, g)?.ln())
}

/// `‖f‖ = √⟨f, f⟩`.
///
/// The self inner product must be real and non-negative up to
/// `NORM_IMAG_TOL` relative error plus a rounding floor proportional to the
/// absolute size of the summed contributions.
pub fn norm(f: &PolyGaussFun) -> Result<f64> {
    let (z, scale) = inner_product_with_scale(f, f)?;
    let floor = 256.0 * f64::EPSILON * scale;
    if z.re < -floor || z.im.abs() > NORM_IMAG_TOL * z.re.abs() + floor {
        return Err(PbError::NumericalConsistency(format!("self inner product {z} is not a non-negative real")));
    }
    Ok(z.re.max(0.0).sqrt())
}

#[cfg(test)]
mod tests;
