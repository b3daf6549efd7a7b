use super::{
    c, combo, p, real, unit_width_gaussian, x, BundleParts, ConstantComparison, ModelBundle, ModelParams, Orientation, Relation,
    NVARS,
};
use crate::error::{PbError, Result};
use crate::weyl::{weyl_from_xp, ExpLinOp, WeylOp};

/// Two oscillators with imaginary linear terms,
/// `H = ½(p₁² + x₁²) + ½(p₂² + x₂²) + i[A(x₁ + x₂) + B(p₁ + p₂)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex2Params {
    pub a: f64,
    pub b: f64,
}

impl Ex2Params {
    pub fn new(a: f64, b: f64) -> Self {
        Ex2Params { a, b }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("A", self.a), ("B", self.b)] {
            if !v.is_finite() {
                return Err(PbError::Guard(format!("{name} = {v} must be finite")));
            }
        }
        Ok(())
    }

    pub fn eigenvalue(&self, n1: usize, n2: usize) -> f64 {
        (n1 + n2) as f64 + self.a * self.a + self.b * self.b + 1.0
    }
}

/// Standard oscillator ladder `c_j = (x_j + i p_j)/√2` and its adjoint.
pub(crate) fn oscillator_ladder(j: usize) -> (WeylOp, WeylOp) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let lower = combo(&[(real(s), &x(j)), (c(0.0, s), &p(j))]);
    let upper = combo(&[(real(s), &x(j)), (c(0.0, -s), &p(j))]);
    (lower, upper)
}

pub fn build_example2(params: &Ex2Params) -> Result<ModelBundle> {
    params.validate()?;
    let Ex2Params { a: big_a, b: big_b } = *params;
    let i = c(0.0, 1.0);
    let s = real(std::f64::consts::FRAC_1_SQRT_2);

    // Shifted canonical pairs X_j = x_j + iA, P_j = p_j + iB.
    let cap_x: [WeylOp; 2] = std::array::from_fn(|j| x(j).add_scalar(c(0.0, big_a)));
    let cap_p: [WeylOp; 2] = std::array::from_fn(|j| p(j).add_scalar(c(0.0, big_b)));
    let lower: [WeylOp; 2] = std::array::from_fn(|j| combo(&[(s, &cap_x[j]), (i * s, &cap_p[j])]));
    let raise: [WeylOp; 2] = std::array::from_fn(|j| combo(&[(s, &cap_x[j]), (-i * s, &cap_p[j])]));

    let linear = combo(&[(c(0.0, big_a), &x(0)), (c(0.0, big_a), &x(1)), (c(0.0, big_b), &p(0)), (c(0.0, big_b), &p(1))]);
    let oscillator = weyl_from_xp("0.5*(p1^2 + x1^2) + 0.5*(p2^2 + x2^2)", NVARS)?;
    let h = oscillator.add(&linear)?;
    let h_ref = oscillator.add_scalar(real(big_a * big_a + big_b * big_b));

    let exponent = combo(&[(real(-big_a), &p(0)), (real(-big_a), &p(1)), (real(big_b), &x(0)), (real(big_b), &x(1))]);
    let t = ExpLinOp::from_exponent(&exponent)?;
    let theta = t.pow(-2);

    let mut relations = Vec::new();
    for j in 0..2 {
        let (cj, cj_dag) = oscillator_ladder(j);
        relations.push(Relation { name: format!("T c{} T^-1 = a{}", j + 1, j + 1), source: cj, target: lower[j].clone() });
        relations.push(Relation { name: format!("T c{}^dagger T^-1 = b{}", j + 1, j + 1), source: cj_dag, target: raise[j].clone() });
    }

    let big_c = c(-big_b, big_a);
    let big_d = c(big_b, big_a);
    let printed_vacua = (unit_width_gaussian([big_c, big_c]), unit_width_gaussian([big_d.conj(), big_d.conj()]));
    let constants = vec![
        ConstantComparison { name: "C".into(), printed: big_c, derived: 2f64.sqrt() * lower[0].coeff_constant(), asserted: true },
        ConstantComparison { name: "D".into(), printed: big_d, derived: 2f64.sqrt() * raise[0].coeff_constant(), asserted: true },
    ];

    BundleParts {
        params: ModelParams::Ex2(params.clone()),
        a: lower,
        b: raise,
        h,
        h_ref,
        t,
        theta,
        orientation: Orientation::PartnerToModel,
        relations,
        printed_vacua: Some(printed_vacua),
        constants,
        notes: Vec::new(),
    }
    .finish()
}
