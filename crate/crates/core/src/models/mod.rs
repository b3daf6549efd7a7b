//! The three two-mode models: ladder operators, Hamiltonians, intertwiners,
//! vacua and the biorthogonal families generated from them.

mod example1;
mod example2;
mod example3;
pub(crate) mod family;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub use example1::{build_example1, Ex1Params};
pub use example2::{build_example2, Ex2Params};
pub use example3::{bopp_hamiltonian, build_example3, Ex3Params};
pub use family::{generate_family, generate_family_with, triangle, LadderFamily};

use crate::error::{PbError, Result};
use crate::gauss::log_inner_product;
use crate::polygauss::{GaussEnvelope, MultiIndex, PolyGaussFun};
use crate::weyl::{ExpLinOp, WeylOp};

/// Number of spatial variables in every model.
pub const NVARS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Ex1,
    Ex2,
    Ex3,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Ex1, ModelKind::Ex2, ModelKind::Ex3];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ex1 => "ex1",
            ModelKind::Ex2 => "ex2",
            ModelKind::Ex3 => "ex3",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        ModelKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    Ex1(Ex1Params),
    Ex2(Ex2Params),
    Ex3(Ex3Params),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Ex1(_) => ModelKind::Ex1,
            ModelParams::Ex2(_) => ModelKind::Ex2,
            ModelParams::Ex3(_) => ModelKind::Ex3,
        }
    }

    /// Physical parameters as `(name, value)` pairs, guards excluded.
    pub fn values(&self) -> Vec<(&'static str, f64)> {
        match self {
            ModelParams::Ex1(p) => vec![("epsilon", p.epsilon), ("xi", p.xi), ("a", p.a), ("b", p.b)],
            ModelParams::Ex2(p) => vec![("A", p.a), ("B", p.b)],
            ModelParams::Ex3(p) => vec![("A", p.a), ("B", p.b), ("theta", p.theta), ("theta_tilde", p.theta_tilde)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Ex1(p) => p.validate(),
            ModelParams::Ex2(p) => p.validate(),
            ModelParams::Ex3(p) => p.validate(),
        }
    }

    pub fn build(&self) -> Result<ModelBundle> {
        match self {
            ModelParams::Ex1(p) => build_example1(p),
            ModelParams::Ex2(p) => build_example2(p),
            ModelParams::Ex3(p) => build_example3(p),
        }
    }

    /// The reference parameter point of each model.
    pub fn canonical(kind: ModelKind) -> ModelParams {
        match kind {
            ModelKind::Ex1 => ModelParams::Ex1(Ex1Params::new(0.5, 1.0, 1.0, 1.0)),
            ModelKind::Ex2 => ModelParams::Ex2(Ex2Params::new(0.3, 0.2)),
            ModelKind::Ex3 => ModelParams::Ex3(Ex3Params::new(0.3, 0.2, 0.05, 0.03)),
        }
    }

    pub fn eigenvalue(&self, n1: usize, n2: usize) -> f64 {
        match self {
            ModelParams::Ex1(p) => p.eigenvalue(n1, n2),
            ModelParams::Ex2(p) => p.eigenvalue(n1, n2),
            ModelParams::Ex3(p) => p.eigenvalue(n1, n2),
        }
    }
}

/// Which side of the similarity the model Hamiltonian sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `T H T⁻¹ = h_ref`.
    ModelToPartner,
    /// `T h_ref T⁻¹ = H`.
    PartnerToModel,
}

/// `T · source · T⁻¹ = target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub source: WeylOp,
    pub target: WeylOp,
}

/// A closed-form constant as printed next to the value derived here.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantComparison {
    pub name: String,
    pub printed: C64,
    pub derived: C64,
    /// `false` for values reported for transparency only.
    pub asserted: bool,
}

#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub params: ModelParams,
    /// Lowering operators `a₁, a₂`.
    pub a: [WeylOp; 2],
    /// Raising operators `b₁, b₂`.
    pub b: [WeylOp; 2],
    pub h: WeylOp,
    /// Self-adjoint, isospectral partner of `h`.
    pub h_ref: WeylOp,
    /// `N_j = b_j a_j`.
    pub n_ops: [WeylOp; 2],
    pub t: ExpLinOp,
    /// Metric operator, with its scalar calibrated so that `Ψ₀₀ = Θ φ₀₀`.
    pub theta: ExpLinOp,
    pub orientation: Orientation,
    pub relations: Vec<Relation>,
    pub vacuum_phi: PolyGaussFun,
    pub vacuum_psi: PolyGaussFun,
    /// Vacua in the closed form printed alongside the model, unnormalized.
    pub printed_vacua: Option<(PolyGaussFun, PolyGaussFun)>,
    pub constants: Vec<ConstantComparison>,
    pub notes: Vec<String>,
}

impl ModelBundle {
    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn eigenvalue(&self, n1: usize, n2: usize) -> f64 {
        self.params.eigenvalue(n1, n2)
    }

    pub fn a_dagger(&self) -> [WeylOp; 2] {
        [self.a[0].adjoint(), self.a[1].adjoint()]
    }

    pub fn b_dagger(&self) -> [WeylOp; 2] {
        [self.b[0].adjoint(), self.b[1].adjoint()]
    }

    /// `true` when `T` is the identity, so that the model is self-adjoint.
    pub fn metric_is_trivial(&self) -> bool {
        self.t.u.iter().chain(&self.t.w).all(|z| *z == C64::default())
    }
}

/// Assembles the common tail of every model: vacua, gauge and metric
/// calibration.
pub(crate) struct BundleParts {
    pub params: ModelParams,
    pub a: [WeylOp; 2],
    pub b: [WeylOp; 2],
    pub h: WeylOp,
    pub h_ref: WeylOp,
    pub t: ExpLinOp,
    pub theta: ExpLinOp,
    pub orientation: Orientation,
    pub relations: Vec<Relation>,
    pub printed_vacua: Option<(PolyGaussFun, PolyGaussFun)>,
    pub constants: Vec<ConstantComparison>,
    pub notes: Vec<String>,
}

impl BundleParts {
    pub fn finish(self) -> Result<ModelBundle> {
        let phi_raw = solve_vacuum(&self.a)?;
        let b_dag = [self.b[0].adjoint(), self.b[1].adjoint()];
        let psi_raw = solve_vacuum(&b_dag)?;
        let (vacuum_phi, vacuum_psi) = normalize_vacua(&phi_raw, &psi_raw)?;
        let theta = calibrate_metric(&self.theta, &vacuum_phi)?;
        let n_ops = [self.b[0].compose(&self.a[0])?, self.b[1].compose(&self.a[1])?];
        Ok(ModelBundle {
            params: self.params,
            a: self.a,
            b: self.b,
            h: self.h,
            h_ref: self.h_ref,
            n_ops,
            t: self.t,
            theta,
            orientation: self.orientation,
            relations: self.relations,
            vacuum_phi,
            vacuum_psi,
            printed_vacua: self.printed_vacua,
            constants: self.constants,
            notes: self.notes,
        })
    }
}

/// Tolerance on the symmetry of the solved quadratic form.
const VACUUM_SYMMETRY_TOL: f64 = 1e-12;

/// Common Gaussian zero `exp(−xᵀMx − vᵀx)` of first-order operators
/// `ops[j] = Σ_k α_jk x_k + β_jk ∂_k + γ_j`.
///
/// Since `∂_k` acts on the ansatz as multiplication by `−(2Mx + v)_k`, the
/// annihilation conditions read `α = 2βM` and `γ = βv`.
pub fn solve_vacuum(ops: &[WeylOp]) -> Result<PolyGaussFun> {
    let n = ops.len();
    let zero = MultiIndex::zeros(n);
    let mut alpha = DMatrix::<C64>::zeros(n, n);
    let mut beta = DMatrix::<C64>::zeros(n, n);
    let mut gamma = DVector::<C64>::zeros(n);
    for (j, op) in ops.iter().enumerate() {
        crate::error::check_dims(n, op.nvars())?;
        if !op.is_first_order() {
            return Err(PbError::NotFirstOrder(format!("annihilation operator {} has degree {}", j + 1, op.degree())));
        }
        for k in 0..n {
            alpha[(j, k)] = op.coeff(&MultiIndex::unit(n, k), &zero);
            beta[(j, k)] = op.coeff(&zero, &MultiIndex::unit(n, k));
        }
        gamma[j] = op.coeff(&zero, &zero);
    }
    let beta_inv = beta
        .try_inverse()
        .ok_or_else(|| PbError::AssumptionViolation("derivative part of the annihilators is singular".into()))?;
    let m = (&beta_inv * &alpha) * C64::new(0.5, 0.0);
    let asym = (&m - m.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if asym > VACUUM_SYMMETRY_TOL * scale {
        return Err(PbError::AssumptionViolation(format!("annihilators admit no common Gaussian zero (asymmetry {asym:.3e})")));
    }
    let v = &beta_inv * gamma;
    let env = GaussEnvelope::new(m, v, C64::default()).map_err(|e| match e {
        PbError::Domain(msg) => PbError::AssumptionViolation(format!("vacuum is not square integrable: {msg}")),
        other => other,
    })?;
    Ok(PolyGaussFun::gaussian(env))
}

/// Scales `φ` to unit norm with `φ(0)` real positive, then `Ψ` so that
/// `⟨φ, Ψ⟩ = 1`.
///
/// Scale factors are applied to the Gaussian exponent, so vacua whose raw
/// pairing lies outside the floating-point range are still normalized.
pub fn normalize_vacua(phi: &PolyGaussFun, psi: &PolyGaussFun) -> Result<(PolyGaussFun, PolyGaussFun)> {
    let zeros = vec![C64::default(); phi.nvars()];
    let at_origin = phi.eval(&zeros)?;
    if at_origin == C64::default() {
        return Err(PbError::NumericalConsistency("vacuum vanishes at the origin".into()));
    }
    let log_norm_sq = log_inner_product(phi, phi)?;
    let phi = phi.mul_exp_linear(&zeros, C64::new(-0.5 * log_norm_sq.re, -at_origin.arg()))?;
    let log_pairing = log_inner_product(&phi, psi)?;
    if !log_pairing.re.is_finite() {
        return Err(PbError::NumericalConsistency("vacua are orthogonal".into()));
    }
    let psi = psi.mul_exp_linear(&zeros, -log_pairing)?;
    Ok((phi, psi))
}

/// Shifts the scalar of `theta` so that `⟨φ₀₀, Θ φ₀₀⟩ = 1`.
fn calibrate_metric(theta: &ExpLinOp, phi: &PolyGaussFun) -> Result<ExpLinOp> {
    let log_k = log_inner_product(phi, &theta.apply(phi)?)?;
    if !log_k.re.is_finite() || log_k.im.cos() <= 0.0 {
        return Err(PbError::NumericalConsistency(format!("metric is not positive on the vacuum: ln⟨φ, Θφ⟩ = {log_k}")));
    }
    Ok(theta.with_scalar_shift(-log_k))
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Σ c_k A_k` over operators in the two model variables.
pub(crate) fn combo(parts: &[(C64, &WeylOp)]) -> WeylOp {
    WeylOp::linear_combination(NVARS, parts.iter().copied()).expect("all model operators have two variables")
}

pub(crate) fn x(j: usize) -> WeylOp {
    WeylOp::x(NVARS, j)
}

pub(crate) fn p(j: usize) -> WeylOp {
    WeylOp::p(NVARS, j)
}

/// `exp(−½xᵀ x − vᵀx)`.
pub(crate) fn unit_width_gaussian(v: [C64; 2]) -> PolyGaussFun {
    let env = GaussEnvelope::new(DMatrix::identity(NVARS, NVARS) * real(0.5), DVector::from_row_slice(&v), C64::default())
        .expect("unit width is positive definite");
    PolyGaussFun::gaussian(env)
}

#[cfg(test)]
mod tests;
