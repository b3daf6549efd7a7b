use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::*;
use crate::error::PbError;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn env(m: [[f64; 2]; 2], v: [C64; 2]) -> GaussEnvelope {
    let m = DMatrix::from_fn(2, 2, |i, j| c(m[i][j], 0.0));
    GaussEnvelope::new(m, DVector::from_column_slice(&v), C64::default()).unwrap()
}

fn unit_gauss() -> PolyGaussFun {
    // e^{−x₁² − x₂²}
    PolyGaussFun::gaussian(env([[1.0, 0.0], [0.0, 1.0]], [C64::default(); 2]))
}

fn half_gauss() -> PolyGaussFun {
    // e^{−x₁²/2 − x₂²/2}
    PolyGaussFun::gaussian(GaussEnvelope::isotropic(2, 1.0))
}

fn sample_points() -> Vec<[C64; 2]> {
    vec![
        [c(0.1, 0.0), c(-0.4, 0.0)],
        [c(0.7, 0.0), c(0.3, 0.0)],
        [c(-1.2, 0.0), c(0.9, 0.0)],
        [c(0.0, 0.0), c(1.5, 0.0)],
        [c(-0.6, 0.0), c(-0.8, 0.0)],
    ]
}

#[test]
fn add_identity_and_cancellation() {
    let f = unit_gauss().mul_poly(&CPoly::var(2, 0)).unwrap();
    assert_eq!(f.add(&PolyGaussFun::zero(2)).unwrap(), f);
    assert!(f.add(&f.scale(c(-1.0, 0.0))).unwrap().is_zero());
}

#[test]
fn equal_envelopes_merge() {
    let g = unit_gauss();
    let s = g.add(&g).unwrap();
    assert_eq!(s.terms().len(), 1);
    assert_eq!(s.terms()[0].poly, CPoly::constant(2, c(2.0, 0.0)));
}

#[test]
fn add_rejects_dimension_mismatch() {
    let one_d = PolyGaussFun::gaussian(GaussEnvelope::isotropic(1, 1.0));
    assert_eq!(unit_gauss().add(&one_d), Err(PbError::Dimension { expected: 2, found: 1 }));
}

#[test]
fn mul_poly_examples() {
    let g = unit_gauss();
    assert_eq!(g.mul_poly(&CPoly::one(2)).unwrap(), g);
    let x1 = CPoly::var(2, 0);
    let once = g.mul_poly(&x1).unwrap();
    assert_eq!(once.terms()[0].poly, x1);
    let twice = once.mul_poly(&x1).unwrap();
    assert_eq!(twice.terms()[0].poly, CPoly::monomial(MultiIndex::from_slice(&[2, 0]), c(1.0, 0.0)));
}

#[test]
fn derivative_examples() {
    let g = half_gauss();
    let d = g.differentiate(0).unwrap();
    assert_eq!(d.terms()[0].poly, CPoly::var(2, 0).scale(c(-1.0, 0.0)));

    let xg = g.mul_var(0).unwrap().differentiate(0).unwrap();
    let want = CPoly::from_terms(
        2,
        [(MultiIndex::zeros(2), c(1.0, 0.0)), (MultiIndex::from_slice(&[2, 0]), c(-1.0, 0.0))],
    );
    assert_eq!(xg.terms()[0].poly, want);
    assert_eq!(g.differentiate(2), Err(PbError::IndexOutOfRange { index: 2, nvars: 2 }));
}

/// Central-difference oracle for `∂₂²` on a coupled complex Gaussian of the
/// shape the first model's vacuum takes (ε = 0.5, ξ = 1).
#[test]
fn second_derivative_matches_finite_differences() {
    let (sp, sm) = (1.5f64.sqrt(), 0.5f64.sqrt());
    let (ap, am) = (0.5 * (sp + sm), 0.5 * (sp - sm));
    let root = (1.0 - 0.25f64).sqrt();
    let k_minus = c(0.0, -am / root);
    let k_plus = c(0.0, ap / root);
    let m = DMatrix::from_row_slice(2, 2, &[c(0.5 * ap, 0.0), c(0.5 * am, 0.0), c(0.5 * am, 0.0), c(0.5 * ap, 0.0)]);
    let e = GaussEnvelope::new(m, DVector::from_column_slice(&[k_minus, k_plus]), C64::default()).unwrap();
    let f = PolyGaussFun::gaussian(e);
    let d2 = f.differentiate(1).unwrap().differentiate(1).unwrap();
    let h = 1e-3;
    for p in sample_points() {
        let at = |dy: f64| f.eval(&[p[0], p[1] + dy]).unwrap();
        let fd = (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
        let exact = d2.eval(&p).unwrap();
        assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "{fd} vs {exact}");
    }
}

#[test]
fn translate_examples() {
    let g1 = PolyGaussFun::gaussian(GaussEnvelope::isotropic(1, 1.0));
    assert_eq!(g1.translate(&[C64::default()]).unwrap(), g1);

    let shifted = g1.translate(&[c(0.7, 0.0)]).unwrap();
    let t = &shifted.terms()[0].env;
    assert!((t.v()[0] - c(0.7, 0.0)).norm() < 1e-15);
    assert!((t.s() - c(0.245, 0.0)).norm() < 1e-15);

    let imag = g1.translate(&[c(0.0, 1.0)]).unwrap();
    for x in [-1.0, 0.0, 0.4, 2.0] {
        let want = (-0.5 * x * x - c(0.0, 1.0) * x + 0.5).exp();
        assert!((imag.eval(&[c(x, 0.0)]).unwrap() - want).norm() < 1e-14);
    }
}

#[test]
fn exp_linear_examples() {
    let g1 = PolyGaussFun::gaussian(GaussEnvelope::new(
        DMatrix::from_element(1, 1, c(1.0, 0.0)),
        DVector::zeros(1),
        C64::default(),
    ).unwrap());
    assert_eq!(g1.mul_exp_linear(&[C64::default()], C64::default()).unwrap(), g1);
    let h = g1.mul_exp_linear(&[c(1.0, 0.0)], C64::default()).unwrap();
    assert_eq!(h.terms()[0].env.v()[0], c(-1.0, 0.0));
    assert_eq!(h.terms()[0].env.m(), g1.terms()[0].env.m());
    for x in [-0.5f64, 0.3, 1.1] {
        let want = (-x * x + x).exp();
        assert!((h.eval(&[c(x, 0.0)]).unwrap().re - want).abs() < 1e-14);
    }
}

#[test]
fn conjugate_examples() {
    let g = half_gauss().mul_poly(&CPoly::var(2, 1).scale(c(3.0, 0.0))).unwrap();
    assert_eq!(g.conj(), g);

    let f = PolyGaussFun::gaussian(
        GaussEnvelope::new(DMatrix::from_element(1, 1, c(1.0, 0.0)), DVector::from_element(1, c(0.0, 1.0)), C64::default())
            .unwrap(),
    );
    let fc = f.conj();
    assert_eq!(fc.terms()[0].env.v()[0], c(0.0, -1.0));
    assert_eq!(fc.conj(), f);
}

#[test]
fn eval_examples() {
    assert_eq!(unit_gauss().eval(&[C64::default(); 2]).unwrap(), c(1.0, 0.0));
    assert_eq!(PolyGaussFun::zero(2).eval(&[c(0.3, 0.0), c(-2.0, 0.0)]).unwrap(), C64::default());
}

#[test]
fn derivative_commutes_with_translation() {
    let f = half_gauss().mul_poly(&CPoly::var(2, 0).mul(&CPoly::var(2, 1))).unwrap();
    let delta = [c(0.3, -0.2), c(0.0, 0.5)];
    let a = f.translate(&delta).unwrap().differentiate(0).unwrap();
    let b = f.differentiate(0).unwrap().translate(&delta).unwrap();
    assert!(a.max_coefficient_deviation(&b) < 1e-14);
}
