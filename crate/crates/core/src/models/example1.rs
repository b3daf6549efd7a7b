use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{c, combo, p, real, x, BundleParts, ConstantComparison, ModelBundle, ModelParams, Orientation, Relation, NVARS};
use crate::error::{PbError, Result};
use crate::polygauss::{GaussEnvelope, PolyGaussFun};
use crate::weyl::{weyl_from_xp, ExpLinOp, WeylOp};

/// Coupled oscillators with an imaginary linear term,
/// `H = (p₁² + x₁²) + (p₂² + x₂² + 2i x₂) + 2ε x₁x₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex1Params {
    pub epsilon: f64,
    /// Sign choice `±1` for the mode rotation.
    pub xi: f64,
    /// Free scale of the first mode; the physics does not depend on it.
    pub a: f64,
    /// Free scale of the second mode.
    pub b: f64,
    /// Parameters with `1 − |ε| ≤ epsilon_margin` are rejected.
    pub epsilon_margin: f64,
}

impl Ex1Params {
    pub const DEFAULT_EPSILON_MARGIN: f64 = 1e-3;

    pub fn new(epsilon: f64, xi: f64, a: f64, b: f64) -> Self {
        Ex1Params { epsilon, xi, a, b, epsilon_margin: Self::DEFAULT_EPSILON_MARGIN }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || 1.0 - self.epsilon.abs() <= self.epsilon_margin * (1.0 + 1e-9) {
            return Err(PbError::SingularParameter(format!(
                "epsilon = {} must satisfy |epsilon| < {} (the 1/(1-epsilon^2) terms diverge at |epsilon| = 1)",
                self.epsilon,
                1.0 - self.epsilon_margin
            )));
        }
        if self.xi != 1.0 && self.xi != -1.0 {
            return Err(PbError::Guard(format!("xi = {} must be +1 or -1", self.xi)));
        }
        for (name, v) in [("a", self.a), ("b", self.b)] {
            if !v.is_finite() || v == 0.0 {
                return Err(PbError::Guard(format!("{name} = {v} must be a nonzero real number")));
            }
        }
        Ok(())
    }

    /// With `ε ≠ 0` every eigenvalue is simple.
    pub fn nondegenerate(&self) -> bool {
        self.epsilon != 0.0
    }

    pub fn eigenvalue(&self, n1: usize, n2: usize) -> f64 {
        let (r1, r2) = self.roots();
        r1 * (2 * n1 + 1) as f64 + r2 * (2 * n2 + 1) as f64 + 1.0 / (1.0 - self.epsilon * self.epsilon)
    }

    /// `(√(1+εξ), √(1−εξ))`.
    fn roots(&self) -> (f64, f64) {
        let exi = self.epsilon * self.xi;
        ((1.0 + exi).sqrt(), (1.0 - exi).sqrt())
    }
}

pub fn build_example1(params: &Ex1Params) -> Result<ModelBundle> {
    params.validate()?;
    let Ex1Params { epsilon: eps, xi, a, b, .. } = *params;
    let (r1, r2) = params.roots();
    let one_m = 1.0 - eps * eps;
    let i = c(0.0, 1.0);

    // Canonical pairs mixing the two modes.
    let cap_p = [
        combo(&[(real(1.0 / (2.0 * a)), &p(0)), (real(xi / (2.0 * a)), &p(1))]),
        combo(&[(real(1.0 / (2.0 * b)), &p(0)), (real(-xi / (2.0 * b)), &p(1))]),
    ];
    let cap_x = [
        combo(&[(real(a), &x(0)), (real(a * xi), &x(1))]),
        combo(&[(real(b), &x(0)), (real(-b * xi), &x(1))]),
    ];
    let q = [
        cap_x[0].add_scalar(c(0.0, a * xi / (1.0 + eps * xi))),
        cap_x[1].add_scalar(c(0.0, -b * xi / (1.0 - eps * xi))),
    ];
    let scales = [(a, r1), (b, r2)];
    let ladder = |sign: f64, pos: &[WeylOp; 2]| -> [WeylOp; 2] {
        std::array::from_fn(|j| {
            let (s, r) = scales[j];
            let pre = s / r.sqrt();
            combo(&[(i * sign * pre, &cap_p[j]), (real(pre * r / (2.0 * s * s)), &pos[j])])
        })
    };
    let lower = ladder(1.0, &q);
    let raise = ladder(-1.0, &q);
    let partner = ladder(1.0, &cap_x);

    let coupling = combo(&[(real(2.0 * eps), &x(0).compose(&x(1))?)]);
    let h = weyl_from_xp("p1^2 + x1^2 + p2^2 + x2^2 + 2i*x2", NVARS)?.add(&coupling)?;
    let h_ref = weyl_from_xp("p1^2 + x1^2 + p2^2 + x2^2", NVARS)?.add(&coupling)?.add_scalar(real(1.0 / one_m));

    let exponent = combo(&[(real(1.0 / one_m), &p(1)), (real(-eps / one_m), &p(0))]);
    let t = ExpLinOp::from_exponent(&exponent)?;
    let theta = t.pow(2);

    let mut relations = Vec::new();
    for j in 0..2 {
        relations.push(Relation { name: format!("T a{} T^-1 = A{}", j + 1, j + 1), source: lower[j].clone(), target: partner[j].clone() });
        relations.push(Relation {
            name: format!("T b{} T^-1 = A{}^dagger", j + 1, j + 1),
            source: raise[j].clone(),
            target: partner[j].adjoint(),
        });
    }

    let alpha_p = 0.5 * (r1 + r2);
    let alpha_m = 0.5 * (r1 - r2);
    let k_minus = c(0.0, -xi * alpha_m / one_m.sqrt());
    let k_plus = c(0.0, alpha_p / one_m.sqrt());
    let m = DMatrix::from_row_slice(2, 2, &[real(alpha_p / 2.0), real(xi * alpha_m / 2.0), real(xi * alpha_m / 2.0), real(alpha_p / 2.0)]);
    let gaussian = |v: [C64; 2]| -> Result<PolyGaussFun> {
        Ok(PolyGaussFun::gaussian(GaussEnvelope::new(m.clone(), DVector::from_row_slice(&v), C64::default())?))
    };
    let printed_vacua = (gaussian([k_minus, k_plus])?, gaussian([-k_minus, -k_plus])?);

    let constants = vec![
        ConstantComparison { name: "shift delta1".into(), printed: c(0.0, (a * eps - xi) / one_m), derived: t.w[0], asserted: false },
        ConstantComparison { name: "shift delta2".into(), printed: c(0.0, (b * eps + xi) / one_m), derived: t.w[1], asserted: false },
    ];
    let mut notes = vec![format!(
        "T translates by ({}, {}); the printed shift constants depend on a and b, T does not",
        t.w[0], t.w[1]
    )];
    if params.nondegenerate() {
        notes.push("epsilon != 0: every eigenvalue is simple".into());
    }

    BundleParts {
        params: ModelParams::Ex1(params.clone()),
        a: lower,
        b: raise,
        h,
        h_ref,
        t,
        theta,
        orientation: Orientation::ModelToPartner,
        relations,
        printed_vacua: Some(printed_vacua),
        constants,
        notes,
    }
    .finish()
}
