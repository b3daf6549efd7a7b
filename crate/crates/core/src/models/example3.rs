use num_complex::Complex64 as C64;

use super::{
    c, combo, p, real, unit_width_gaussian, x, BundleParts, ConstantComparison, ModelBundle, ModelParams, Orientation, Relation,
    NVARS,
};
use crate::error::{PbError, Result};
use crate::weyl::{weyl_from_xp, ExpLinOp, WeylOp};

/// The two-oscillator model of [`super::Ex2Params`] on a noncommutative
/// plane with `[x̂₁, x̂₂] = iθ` and `[p̂₁, p̂₂] = iθ̃`, kept to first order in
/// `θ`, `θ̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex3Params {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub theta_tilde: f64,
    /// Largest accepted `|θ|`, `|θ̃|`.
    pub theta_max: f64,
}

impl Ex3Params {
    pub const DEFAULT_THETA_MAX: f64 = 0.2;

    pub fn new(a: f64, b: f64, theta: f64, theta_tilde: f64) -> Self {
        Ex3Params { a, b, theta, theta_tilde, theta_max: Self::DEFAULT_THETA_MAX }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("A", self.a), ("B", self.b)] {
            if !v.is_finite() {
                return Err(PbError::Guard(format!("{name} = {v} must be finite")));
            }
        }
        for (name, v) in [("theta", self.theta), ("theta_tilde", self.theta_tilde)] {
            if !v.is_finite() || v.abs() > self.theta_max {
                return Err(PbError::Guard(format!(
                    "{name} = {v} must satisfy |{name}| <= {} (first-order regime)",
                    self.theta_max
                )));
            }
        }
        Ok(())
    }

    pub fn eigenvalue(&self, n1: usize, n2: usize) -> f64 {
        let (n1, n2) = (n1 as f64, n2 as f64);
        (n1 + n2 + 1.0) + 0.5 * (self.theta + self.theta_tilde) * (n1 - n2) + self.a * self.a + self.b * self.b
    }

    /// Shifts `(A₁, A₂, B₁, B₂)` of the canonical pairs `X_j = x_j + iA_j`,
    /// `P_j = p_j + iB_j`.
    fn shifts(&self) -> [f64; 4] {
        let (a, b, t, tt) = (self.a, self.b, self.theta, self.theta_tilde);
        [a + 0.5 * t * b, a - 0.5 * t * b, b - 0.5 * tt * a, b + 0.5 * tt * a]
    }

    /// `(k₁, k₂, k̃₁, k̃₂)` in closed form.
    pub fn printed_constants(&self) -> [C64; 4] {
        let (a, b, t, tt) = (self.a, self.b, self.theta, self.theta_tilde);
        let (ip, im) = (c(1.0, 1.0), c(-1.0, 1.0));
        [
            a * (1.0 - tt / 2.0) * im + b * (t / 2.0 - 1.0) * ip,
            a * (1.0 + tt / 2.0) * (-im) + b * (t / 2.0 + 1.0) * ip,
            a * (1.0 - tt / 2.0) * ip + b * (t / 2.0 - 1.0) * im,
            -a * (1.0 + tt / 2.0) * ip + b * (t / 2.0 + 1.0) * im,
        ]
    }
}

/// `(a₁, a₂, b₁, b₂)` built from the shifted canonical pairs; with zero
/// shifts these are the mode-mixing oscillator operators `(c_g, c_d, c_g†, c_d†)`.
fn ladder(shifts: [f64; 4]) -> [WeylOp; 4] {
    let [a1, a2, b1, b2] = shifts;
    let cap_x = [x(0).add_scalar(c(0.0, a1)), x(1).add_scalar(c(0.0, a2))];
    let cap_p = [p(0).add_scalar(c(0.0, b1)), p(1).add_scalar(c(0.0, b2))];
    let h = real(0.5);
    let i = c(0.0, 0.5);
    [
        combo(&[(h, &cap_x[0]), (i, &cap_p[0]), (i, &cap_x[1]), (-h, &cap_p[1])]),
        combo(&[(-i, &cap_x[0]), (h, &cap_p[0]), (-h, &cap_x[1]), (-i, &cap_p[1])]),
        combo(&[(h, &cap_x[0]), (-i, &cap_p[0]), (-i, &cap_x[1]), (-h, &cap_p[1])]),
        combo(&[(i, &cap_x[0]), (h, &cap_p[0]), (-h, &cap_x[1]), (i, &cap_p[1])]),
    ]
}

/// `(N₁ + N₂ + 1) + ½(θ + θ̃)(N₁ − N₂) + (A² + B²)` for number operators `N₁`, `N₂`.
fn split_number_form(n1: &WeylOp, n2: &WeylOp, params: &Ex3Params) -> WeylOp {
    let s = 0.5 * (params.theta + params.theta_tilde);
    combo(&[(real(1.0 + s), n1), (real(1.0 - s), n2)]).add_scalar(real(1.0 + params.a * params.a + params.b * params.b))
}

/// The first-order expansion of the Hamiltonian in canonical variables
/// obtained from the Bopp shift `x̂₁ = x₁ − ½θp₂`, `x̂₂ = x₂ + ½θp₁`,
/// `p̂₁ = p₁ + ½θ̃x₂`, `p̂₂ = p₂ − ½θ̃x₁`.
///
/// It agrees with [`ModelBundle::h`] up to terms quadratic in `θ`, `θ̃`.
pub fn bopp_hamiltonian(params: &Ex3Params) -> Result<WeylOp> {
    let (a, b, t, tt) = (params.a, params.b, params.theta, params.theta_tilde);
    let base = weyl_from_xp("0.5*(p1^2 + x1^2) + 0.5*(p2^2 + x2^2)", NVARS)?;
    let angular = p(0).compose(&x(1))?.sub(&p(1).compose(&x(0))?)?;
    let rest = combo(&[
        (c(0.0, a), &x(0)),
        (c(0.0, a), &x(1)),
        (c(0.0, b), &p(0)),
        (c(0.0, b), &p(1)),
        (real(0.5 * (t + tt)), &angular),
        (c(0.0, 0.5 * a * t), &p(0)),
        (c(0.0, -0.5 * a * t), &p(1)),
        (c(0.0, -0.5 * b * tt), &x(0)),
        (c(0.0, 0.5 * b * tt), &x(1)),
    ]);
    base.add(&rest)
}

pub fn build_example3(params: &Ex3Params) -> Result<ModelBundle> {
    params.validate()?;
    let [a1, a2, b1, b2] = ladder(params.shifts());
    let [cg, cd, cg_dag, cd_dag] = ladder([0.0; 4]);

    let n_ops = [b1.compose(&a1)?, b2.compose(&a2)?];
    let h = split_number_form(&n_ops[0], &n_ops[1], params);
    let h_ref = split_number_form(&cg_dag.compose(&cg)?, &cd_dag.compose(&cd)?, params);

    let k = [2.0 * a1.coeff_constant(), 2.0 * a2.coeff_constant()];
    let k_tilde = [2.0 * b1.coeff_constant(), 2.0 * b2.coeff_constant()];
    let exponent = combo(&[(-0.5 * k[0], &cg_dag), (-0.5 * k[1], &cd_dag), (-0.5 * k[0].conj(), &cg), (-0.5 * k[1].conj(), &cd)]);
    let t = ExpLinOp::from_exponent(&exponent)?;
    let theta = t.pow(-2);

    let relations = vec![
        Relation { name: "T c_g T^-1 = a1".into(), source: cg.clone(), target: a1.clone() },
        Relation { name: "T c_d T^-1 = a2".into(), source: cd.clone(), target: a2.clone() },
        Relation { name: "T c_g^dagger T^-1 = b1".into(), source: cg_dag, target: b1.clone() },
        Relation { name: "T c_d^dagger T^-1 = b2".into(), source: cd_dag, target: b2.clone() },
    ];

    let printed = params.printed_constants();
    let alpha = [(printed[0] + c(0.0, 1.0) * printed[1]) / 2.0, (printed[0] - c(0.0, 1.0) * printed[1]) / c(0.0, 2.0)];
    let printed_vacua = (unit_width_gaussian(alpha), unit_width_gaussian([-alpha[0], -alpha[1]]));
    let derived = [k[0], k[1], k_tilde[0], k_tilde[1]];
    let names = ["k1", "k2", "k1_tilde", "k2_tilde"];
    let constants = (0..4)
        .map(|j| ConstantComparison { name: names[j].into(), printed: printed[j], derived: derived[j], asserted: true })
        .collect();

    BundleParts {
        params: ModelParams::Ex3(params.clone()),
        a: [a1, a2],
        b: [b1, b2],
        h,
        h_ref,
        t,
        theta,
        orientation: Orientation::PartnerToModel,
        relations,
        printed_vacua: Some(printed_vacua),
        constants,
        notes: vec!["Hamiltonian taken in number-operator form; the canonical-variable expansion agrees to first order in theta".into()],
    }
    .finish()
}
