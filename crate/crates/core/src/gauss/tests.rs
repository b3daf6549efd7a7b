use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;

use super::*;
use crate::polygauss::{CPoly, GaussEnvelope, MultiIndex, PolyGaussFun};
use crate::probes;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn unit_gauss() -> PolyGaussFun {
    PolyGaussFun::gaussian(GaussEnvelope::isotropic(2, 2.0))
}

#[test]
fn base_integral_examples() {
    let id = DMatrix::identity(2, 2);
    let v = gaussian_base_integral(&id, &DVector::zeros(2)).unwrap();
    assert!((v - c(PI, 0.0)).norm() < 1e-14);

    let one = DMatrix::from_element(1, 1, c(1.0, 0.0));
    let v = gaussian_base_integral(&one, &DVector::from_element(1, c(0.0, 1.0))).unwrap();
    assert!((v - c(PI.sqrt() * (-0.25f64).exp(), 0.0)).norm() < 1e-14);
}

#[test]
fn base_integral_rejects_indefinite_forms() {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.1, 3.0)]);
    assert!(matches!(gaussian_base_integral(&m, &DVector::zeros(2)), Err(PbError::Domain(_))));
}

#[test]
fn wick_examples() {
    let cov = DMatrix::from_row_slice(2, 2, &[c(0.7, 0.2), c(0.1, -0.3), c(0.1, -0.3), c(1.1, 0.0)]);
    let m = |a, b| wick_moment(&cov, &MultiIndex::from_slice(&[a, b])).unwrap();
    assert_eq!(m(2, 0), cov[(0, 0)]);
    assert_eq!(m(1, 1), cov[(0, 1)]);
    assert!((m(4, 0) - 3.0 * cov[(0, 0)] * cov[(0, 0)]).norm() < 1e-15);
    assert_eq!(m(3, 2), C64::default());
    let err = wick_moment(&cov, &MultiIndex::from_slice(&[40, 26]));
    assert_eq!(err, Err(PbError::MomentCap { order: 66, cap: 64 }));
}

#[test]
fn integrate_examples() {
    let g = unit_gauss();
    assert!((integrate_polygauss(&g).unwrap() - c(PI, 0.0)).norm() < 1e-14);
    let x1 = g.mul_poly(&CPoly::var(2, 0)).unwrap();
    assert!(integrate_polygauss(&x1).unwrap().norm() < 1e-15);
    let x1sq = x1.mul_poly(&CPoly::var(2, 0)).unwrap();
    assert!((integrate_polygauss(&x1sq).unwrap() - c(PI / 2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn two_integration_routes_agree() {
    let mut rng = probes::rng(7);
    for _ in 0..10 {
        let f = probes::random_polygauss(&mut rng, 2, 5);
        let a = integrate_polygauss(&f).unwrap();
        let b = integrate_polygauss_recentered(&f).unwrap();
        assert!((a - b).norm() <= 1e-11 * a.norm().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn norm_examples() {
    let phi = probes::displaced_ground_state(&[0.0, 0.0]);
    assert!((norm(&phi).unwrap() - 1.0).abs() < 1e-14);
    let mut rng = probes::rng(3);
    let f = probes::random_polygauss(&mut rng, 2, 3);
    let n = norm(&f).unwrap();
    assert!((norm(&f.scale(c(2.0, 0.0))).unwrap() - 2.0 * n).abs() < 1e-12 * n);
    assert_eq!(norm(&PolyGaussFun::zero(2)).unwrap(), 0.0);
}

#[test]
fn conjugate_symmetry_and_sesquilinearity() {
    let mut rng = probes::rng(11);
    for _ in 0..10 {
        let f = probes::random_polygauss(&mut rng, 2, 3);
        let g = probes::random_polygauss(&mut rng, 2, 3);
        let h = probes::random_polygauss(&mut rng, 2, 3);
        let fg = inner_product(&f, &g).unwrap();
        let gf = inner_product(&g, &f).unwrap();
        assert!((fg - gf.conj()).norm() <= 1e-10 * fg.norm().max(1.0));

        let (a, b) = (c(rng.random_range(-1.0..1.0), 0.4), c(-0.3, rng.random_range(-1.0..1.0)));
        let comb = PolyGaussFun::linear_combination(2, [(a, &g), (b, &h)]).unwrap();
        let lhs = inner_product(&f, &comb).unwrap();
        let rhs = a * fg + b * inner_product(&f, &h).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));

        let comb = PolyGaussFun::linear_combination(2, [(a, &g), (b, &h)]).unwrap();
        let lhs = inner_product(&comb, &f).unwrap();
        let rhs = a.conj() * gf + b.conj() * inner_product(&h, &f).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }
}

fn eig2_inv_sqrt_det(m: &DMatrix<C64>) -> C64 {
    // Eigenvalues of a complex symmetric matrix with Re M ≻ 0 have positive
    // real part, so the principal square root of each is the continuous one.
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    (l1.sqrt() * l2.sqrt()).inv()
}

#[test]
fn branch_tracking_matches_eigenvalue_product() {
    let mut rng = probes::rng(5);
    for _ in 0..100 {
        let a: f64 = rng.random_range(0.2..2.0);
        let d: f64 = rng.random_range(0.2..2.0);
        let b = rng.random_range(-0.9..0.9) * (a * d).sqrt();
        let im = [rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0)];
        let m = DMatrix::from_row_slice(2, 2, &[c(a, im[0]), c(b, im[1]), c(b, im[1]), c(d, im[2])]);
        let tracked = inv_sqrt_det(&m).unwrap();
        let want = eig2_inv_sqrt_det(&m);
        assert!((tracked - want).norm() <= 1e-10 * want.norm(), "{tracked} vs {want} for {m}");

        let mut bumped = m.clone();
        bumped[(1, 1)] += c(0.0, 1e-7);
        let near = inv_sqrt_det(&bumped).unwrap();
        assert!((near - tracked).norm() <= 1e-5 * tracked.norm(), "branch flip near {m}");
    }
}

#[test]
fn closed_form_matches_quadrature() {
    let mut rng = probes::rng(19);
    for _ in 0..3 {
        let f = probes::random_polygauss(&mut rng, 2, 4);
        let g = probes::random_polygauss(&mut rng, 2, 4);
        let exact = inner_product(&f, &g).unwrap();
        let quad = quadrature::integrate_2d(
            |x, y| {
                let p = [c(x, 0.0), c(y, 0.0)];
                f.eval(&p).unwrap().conj() * g.eval(&p).unwrap()
            },
            8.0,
            1e-11,
        );
        assert!((exact - quad).norm() <= 1e-6 * exact.norm(), "{exact} vs {quad}");
    }
}
