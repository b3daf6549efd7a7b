use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::error::PbError;
use crate::gauss::inner_product;
use crate::polygauss::{MultiIndex, PolyGaussFun};
use crate::probes;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn mi(e: &[u32]) -> MultiIndex {
    MultiIndex::from_slice(e)
}

fn random_op(rng: &mut impl Rng, nvars: usize, max_degree: usize) -> WeylOp {
    let mut terms = Vec::new();
    for xpow in MultiIndex::all_up_to(nvars, max_degree) {
        for dpow in MultiIndex::all_up_to(nvars, max_degree - xpow.degree()) {
            if rng.random_bool(0.3) {
                let coeff = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                terms.push(WeylTerm { coeff, xpow: xpow.clone(), dpow });
            }
        }
    }
    WeylOp::from_terms(nvars, terms).unwrap()
}

fn random_explin(rng: &mut impl Rng, nvars: usize) -> ExpLinOp {
    let mut z = || c(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
    ExpLinOp::new((0..nvars).map(|_| z()).collect(), (0..nvars).map(|_| z()).collect(), z()).unwrap()
}

fn close(a: &PolyGaussFun, b: &PolyGaussFun, tol: f64) -> bool {
    a.max_coefficient_deviation(b) <= tol * a.max_coefficient().max(b.max_coefficient()).max(1.0)
}

#[test]
fn momentum_encoding() {
    let p = weyl_from_xp("p1", 1).unwrap();
    assert_eq!(p, WeylOp::d(1, 0).scale(c(0.0, -1.0)));

    let xp = weyl_from_xp("x1*p1", 1).unwrap();
    assert_eq!(xp.coeff(&mi(&[1]), &mi(&[1])), c(0.0, -1.0));
    assert_eq!(xp.len(), 1);

    let px = weyl_from_xp("p1*x1", 1).unwrap();
    assert_eq!(px.coeff(&mi(&[1]), &mi(&[1])), c(0.0, -1.0));
    assert_eq!(px.coeff(&mi(&[0]), &mi(&[0])), c(0.0, -1.0));
    assert_eq!(px.len(), 2);
}

#[test]
fn parser_handles_scalars_and_powers() {
    let h = weyl_from_xp("(p1^2 + x1^2) + 2i*x2 + 0.5*x1*x2 - 1e-1", 2).unwrap();
    assert_eq!(h.coeff(&mi(&[0, 0]), &mi(&[2, 0])), c(-1.0, 0.0));
    assert_eq!(h.coeff(&mi(&[0, 1]), &mi(&[0, 0])), c(0.0, 2.0));
    assert_eq!(h.coeff(&mi(&[1, 1]), &mi(&[0, 0])), c(0.5, 0.0));
    assert_eq!(h.coeff(&mi(&[0, 0]), &mi(&[0, 0])), c(-0.1, 0.0));
}

#[test]
fn parser_reports_malformed_input() {
    assert!(matches!(parse_xp("x1 + "), Err(PbError::Parse { .. })));
    assert!(matches!(parse_xp("(x1"), Err(PbError::Parse { .. })));
    assert!(matches!(parse_xp("x0"), Err(PbError::Parse { .. })));
    assert!(matches!(parse_xp("x1 $ p1"), Err(PbError::Parse { .. })));
    assert_eq!(weyl_from_xp("x3", 2), Err(PbError::IndexOutOfRange { index: 2, nvars: 2 }));
}

#[test]
fn composition_examples() {
    let d = WeylOp::d(1, 0);
    let x = WeylOp::x(1, 0);
    let dx = d.compose(&x).unwrap();
    assert_eq!(dx, x.compose(&d).unwrap().add_scalar(c(1.0, 0.0)));

    let mut rng = probes::rng(1);
    let a = random_op(&mut rng, 2, 3);
    assert_eq!(WeylOp::identity(2).compose(&a).unwrap(), a);
}

#[test]
fn degree_guard_trips() {
    let x = WeylOp::x(1, 0);
    let big = x.pow(9).unwrap();
    assert_eq!(big.compose(&big), Err(PbError::DegreeGuard { degree: 18, limit: DEGREE_LIMIT }));
}

#[test]
fn commutator_and_adjoint_examples() {
    let d = WeylOp::d(1, 0);
    let x = WeylOp::x(1, 0);
    assert_eq!(d.commutator(&x).unwrap(), WeylOp::identity(1));
    assert_eq!(x.adjoint(), x);
    let p = WeylOp::p(1, 0);
    assert_eq!(p.adjoint(), p);
    let s = WeylOp::scalar(1, c(0.3, -2.0));
    assert_eq!(s.adjoint(), WeylOp::scalar(1, c(0.3, 2.0)));
}

#[test]
fn identity_application() {
    let mut rng = probes::rng(2);
    let f = probes::random_polygauss(&mut rng, 2, 3);
    assert_eq!(WeylOp::identity(2).apply(&f).unwrap(), f);
}

#[test]
fn explin_special_cases() {
    let mut rng = probes::rng(4);
    let f = probes::random_polygauss(&mut rng, 2, 2);
    let w = vec![c(0.4, 0.0), c(-0.7, 0.0)];
    let t = ExpLinOp::new(vec![C64::default(); 2], w.clone(), C64::default()).unwrap();
    assert_eq!(t.apply(&f).unwrap(), f.translate(&w).unwrap());

    let u = vec![c(0.2, 0.1), c(0.0, -0.3)];
    let m = ExpLinOp::new(u.clone(), vec![C64::default(); 2], c(0.5, 0.0)).unwrap();
    assert_eq!(m.apply(&f).unwrap(), f.mul_exp_linear(&u, c(0.5, 0.0)).unwrap());

    let id = ExpLinOp::identity(2);
    assert_eq!(id.inverse(), id);
}

/// Truncated series `Σ_{k≤K} Lᵏ f / k!` against the factorised exponential.
#[test]
fn explin_matches_power_series() {
    let t = ExpLinOp::new(vec![c(0.3, 0.1), c(-0.2, 0.0)], vec![c(0.1, -0.25), c(0.2, 0.15)], c(0.05, 0.0)).unwrap();
    let f = probes::displaced_ground_state(&[0.2, -0.1]);
    let exponent = t.exponent();
    let mut term = f.clone();
    let mut sum = f.clone();
    for k in 1..=40 {
        term = exponent.apply(&term).unwrap().scale(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term).unwrap();
    }
    let exact = t.apply(&f).unwrap();
    for p in [[0.0, 0.0], [0.5, -0.3], [-1.0, 0.8], [1.2, 1.1], [-0.4, -1.5]] {
        let x = [c(p[0], 0.0), c(p[1], 0.0)];
        let (a, b) = (sum.eval(&x).unwrap(), exact.eval(&x).unwrap());
        assert!((a - b).norm() <= 1e-6, "{a} vs {b} at {p:?}");
    }
}

#[test]
fn explin_round_trip() {
    let mut rng = probes::rng(6);
    for _ in 0..10 {
        let t = random_explin(&mut rng, 2);
        let f = probes::random_polygauss(&mut rng, 2, 3);
        let back = t.inverse().apply(&t.apply(&f).unwrap()).unwrap();
        assert!(close(&back, &f, 1e-10));
    }
}

#[test]
fn conjugation_of_position_is_a_shift() {
    let t = ExpLinOp::new(vec![c(0.3, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.7), c(-0.2, 0.0)], C64::default()).unwrap();
    let x1 = WeylOp::x(2, 0);
    assert_eq!(t.conjugate_weyl(&x1).unwrap(), x1.add_scalar(t.w[0]));
    let d1 = WeylOp::d(2, 0);
    assert_eq!(t.conjugate_weyl(&d1).unwrap(), d1.add_scalar(-t.u[0]));
}

#[test]
fn explin_power_is_repeated_composition() {
    let mut rng = probes::rng(8);
    let t = random_explin(&mut rng, 2);
    let sq = t.compose(&t).unwrap();
    let p2 = t.pow(2);
    assert!(sq.c0 == p2.c0 || (sq.c0 - p2.c0).norm() < 1e-15);
    assert!(t.pow(-1) == t.inverse());
}

#[test]
fn self_adjoint_predicate() {
    let t = ExpLinOp::new(vec![c(0.3, 0.0)], vec![c(0.0, -2.0)], c(0.1, 0.0)).unwrap();
    assert!(t.is_formally_self_adjoint(0.0));
    let s = ExpLinOp::new(vec![c(0.0, 0.3)], vec![c(0.0, -2.0)], c(0.1, 0.0)).unwrap();
    assert!(!s.is_formally_self_adjoint(1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_agrees_with_sequential_application(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let a = random_op(&mut rng, 2, 2);
        let b = random_op(&mut rng, 2, 2);
        let f = probes::random_polygauss(&mut rng, 2, 2);
        let lhs = a.compose(&b).unwrap().apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let a = random_op(&mut rng, 2, 3);
        let b = random_op(&mut rng, 2, 2);
        prop_assert!(a.adjoint().adjoint().max_deviation(&a) <= 1e-14 * a.max_abs().max(1.0));
        let ab = a.compose(&b).unwrap().adjoint();
        let ba = b.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert!(ab.max_deviation(&ba) <= 1e-10 * ab.max_abs().max(1.0));
    }

    #[test]
    fn adjoint_moves_across_the_inner_product(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let a = random_op(&mut rng, 2, 3);
        let f = probes::random_polygauss(&mut rng, 2, 2);
        let g = probes::random_polygauss(&mut rng, 2, 2);
        let lhs = inner_product(&a.adjoint().apply(&f).unwrap(), &g).unwrap();
        let rhs = inner_product(&f, &a.apply(&g).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn similarity_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let t = random_explin(&mut rng, 2);
        let a = random_op(&mut rng, 2, 2);
        let b = random_op(&mut rng, 2, 2);
        let lhs = t.conjugate_weyl(&a.compose(&b).unwrap()).unwrap();
        let rhs = t.conjugate_weyl(&a).unwrap().compose(&t.conjugate_weyl(&b).unwrap()).unwrap();
        prop_assert!(lhs.max_deviation(&rhs) <= 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn similarity_is_consistent_with_application(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let t = random_explin(&mut rng, 2);
        let a = random_op(&mut rng, 2, 2);
        let f = probes::random_polygauss(&mut rng, 2, 2);
        let lhs = t.conjugate_weyl(&a).unwrap().apply(&t.apply(&f).unwrap()).unwrap();
        let rhs = t.apply(&a.apply(&f).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-8));
    }
}
