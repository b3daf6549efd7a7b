use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;

use super::example2::oscillator_ladder;
use super::*;
use crate::gauss::{inner_product, norm};
use crate::par::Exec;
use crate::polygauss::{CPoly, MultiIndex};
use crate::probes;

fn distance(f: &PolyGaussFun, g: &PolyGaussFun) -> f64 {
    norm(&f.sub(g).unwrap()).unwrap()
}

fn apply_residual(op: &WeylOp, f: &PolyGaussFun, lambda: f64) -> f64 {
    distance(&op.apply(f).unwrap(), &f.scale(real(lambda))) / norm(f).unwrap()
}

fn ex1(eps: f64, xi: f64, a: f64, b: f64) -> ModelBundle {
    build_example1(&Ex1Params::new(eps, xi, a, b)).unwrap()
}

fn ex2(a: f64, b: f64) -> ModelBundle {
    build_example2(&Ex2Params::new(a, b)).unwrap()
}

fn ex3(a: f64, b: f64, t: f64, tt: f64) -> ModelBundle {
    build_example3(&Ex3Params::new(a, b, t, tt)).unwrap()
}

fn canonical() -> Vec<ModelBundle> {
    ModelKind::ALL.iter().map(|k| ModelParams::canonical(*k).build().unwrap()).collect()
}

#[test]
fn example1_reduces_to_shifted_oscillator_spectrum() {
    let p = Ex1Params::new(0.0, 1.0, 1.0, 1.0);
    for n1 in 0..5 {
        for n2 in 0..5 {
            assert_eq!(p.eigenvalue(n1, n2), (2 * (n1 + n2) + 3) as f64);
        }
    }
}

/// The ladder operators written directly in `x` and `p`.
fn ex1_direct(eps: f64, xi: f64) -> [WeylOp; 4] {
    let r = [(1.0 + eps * xi).sqrt(), (1.0 - eps * xi).sqrt()];
    let sign = [1.0, -1.0];
    let op = |j: usize, ip: f64| {
        let pre = 1.0 / (2.0 * r[j].sqrt());
        let s = sign[j];
        combo(&[
            (c(0.0, ip * pre), &p(0)),
            (real(pre * r[j]), &x(0)),
            (c(0.0, s * xi * ip * pre), &p(1)),
            (real(s * xi * pre * r[j]), &x(1)),
        ])
        .add_scalar(c(0.0, s * pre * xi / r[j]))
    };
    [op(0, 1.0), op(1, 1.0), op(0, -1.0), op(1, -1.0)]
}

#[test]
fn example1_operators_match_position_momentum_form() {
    for (eps, xi) in [(0.5, 1.0), (-0.3, -1.0), (0.8, -1.0)] {
        let want = ex1_direct(eps, xi);
        for (a, b) in [(1.0, 1.0), (0.7, -2.5), (3.0, 0.2)] {
            let m = ex1(eps, xi, a, b);
            let got = [&m.a[0], &m.a[1], &m.b[0], &m.b[1]];
            for (g, w) in got.iter().zip(&want) {
                assert!(g.max_deviation(w) <= 1e-12, "eps={eps} xi={xi} a={a} b={b}");
            }
        }
    }
}

#[test]
fn example1_mode_two_uses_its_own_scale() {
    let m = ex1(0.5, 1.0, 1.0, 3.0);
    let ccr = m.a[1].commutator(&m.b[1]).unwrap();
    assert!(ccr.max_deviation(&WeylOp::identity(2)) <= 1e-12);
}

#[test]
fn example1_vacuum_at_zero_coupling_is_a_shifted_ground_state() {
    let m = ex1(0.0, 1.0, 1.0, 1.0);
    let shifted = unit_width_gaussian([C64::default(), c(0.0, 1.0)]);
    let (want, _) = normalize_vacua(&shifted, &shifted).unwrap();
    assert!(distance(&m.vacuum_phi, &want) <= 1e-12);
}

#[test]
fn example1_printed_vacua_are_annihilated() {
    let m = ex1(0.5, 1.0, 1.0, 1.0);
    let (phi, psi) = m.printed_vacua.clone().unwrap();
    for j in 0..2 {
        assert!(norm(&m.a[j].apply(&phi).unwrap()).unwrap() <= 1e-12 * norm(&phi).unwrap());
        assert!(norm(&m.b[j].adjoint().apply(&psi).unwrap()).unwrap() <= 1e-12 * norm(&psi).unwrap());
    }
}

#[test]
fn example1_intertwiner_removes_the_imaginary_term() {
    let m = ex1(0.5, 1.0, 1.0, 1.0);
    let conj = m.t.conjugate_weyl(&m.h).unwrap();
    assert!(conj.max_deviation(&m.h_ref) <= 1e-12);
    assert!(m.t.is_formally_self_adjoint(0.0));
}

#[test]
fn solve_vacuum_examples() {
    let (c1, c1_dag) = oscillator_ladder(0);
    let (c2, _) = oscillator_ladder(1);
    let g = solve_vacuum(&[c1.clone(), c2.clone()]).unwrap();
    let want = unit_width_gaussian([C64::default(); 2]);
    assert!(g.max_coefficient_deviation(&want) <= 1e-15);
    assert!(matches!(solve_vacuum(&[c1_dag, c2.clone()]), Err(PbError::AssumptionViolation(_))));
    let second = c1.compose(&c1).unwrap();
    assert!(matches!(solve_vacuum(&[second, c2]), Err(PbError::NotFirstOrder(_))));
}

#[test]
fn example2_at_zero_is_the_oscillator() {
    let m = ex2(0.0, 0.0);
    let ground = normalize_vacua(&unit_width_gaussian([C64::default(); 2]), &unit_width_gaussian([C64::default(); 2])).unwrap().0;
    assert!(distance(&m.vacuum_phi, &ground) <= 1e-14);
    assert!(distance(&m.vacuum_psi, &ground) <= 1e-14);
    assert_eq!(m.eigenvalue(0, 0), 1.0);
    assert!(m.metric_is_trivial());
    assert!(m.h.max_deviation(&m.h_ref) == 0.0);
}

#[test]
fn example2_matches_printed_forms() {
    let m = ex2(0.3, 0.2);
    let (cc, dd) = (c(-0.2, 0.3), c(0.2, 0.3));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..2 {
        let a = combo(&[(real(s), &x(j)), (real(s), &WeylOp::d(2, j))]).add_scalar(cc * s);
        let b = combo(&[(real(s), &x(j)), (real(-s), &WeylOp::d(2, j))]).add_scalar(dd * s);
        assert!(m.a[j].max_deviation(&a) <= 1e-15);
        assert!(m.b[j].max_deviation(&b) <= 1e-15);
    }
    let (phi, psi) = m.printed_vacua.clone().unwrap();
    let (phi, psi) = normalize_vacua(&phi, &psi).unwrap();
    assert!(distance(&phi, &m.vacuum_phi) <= 1e-12);
    assert!(distance(&psi, &m.vacuum_psi) <= 1e-12);
    for k in &m.constants {
        assert!((k.printed - k.derived).norm() <= 1e-15, "{}", k.name);
    }
}

#[test]
fn example2_pairing_of_distinct_states_vanishes() {
    let m = ex2(0.3, 0.2);
    let fam = generate_family(&m, 1).unwrap();
    assert!(inner_product(&fam.phi[&(1, 0)], &fam.psi[&(0, 1)]).unwrap().norm() <= 1e-10);
    assert!((inner_product(&fam.phi[&(0, 0)], &fam.psi[&(0, 0)]).unwrap() - 1.0).norm() <= 1e-14);
}

#[test]
fn example3_constants_and_vacua() {
    let m = ex3(0.3, 0.2, 0.05, 0.03);
    for k in &m.constants {
        assert!((k.printed - k.derived).norm() <= 1e-15, "{}: {} vs {}", k.name, k.printed, k.derived);
    }
    let (phi, psi) = m.printed_vacua.clone().unwrap();
    for j in 0..2 {
        assert!(norm(&m.a[j].apply(&phi).unwrap()).unwrap() <= 1e-10 * norm(&phi).unwrap());
        assert!(norm(&m.b[j].adjoint().apply(&psi).unwrap()).unwrap() <= 1e-10 * norm(&psi).unwrap());
    }
}

#[test]
fn example3_expansions_differ_at_second_order() {
    let diff = |s: f64| {
        let p = Ex3Params::new(0.3, 0.2, 0.05 * s, 0.03 * s);
        build_example3(&p).unwrap().h.max_deviation(&bopp_hamiltonian(&p).unwrap())
    };
    let (d1, d2) = (diff(1.0), diff(0.5));
    assert!(d1 > 0.0 && d1 < 1e-2);
    assert!((d1 / d2 - 4.0).abs() < 0.05, "ratio {}", d1 / d2);
    let p = Ex3Params::new(0.3, 0.2, 0.0, 0.0);
    assert!(build_example3(&p).unwrap().h.max_deviation(&bopp_hamiltonian(&p).unwrap()) <= 1e-14);
}

#[test]
fn example3_without_noncommutativity_is_example2() {
    let m3 = ex3(0.3, 0.2, 0.0, 0.0);
    let m2 = ex2(0.3, 0.2);
    assert!(m3.h.max_deviation(&m2.h) <= 1e-12);
    assert!(distance(&m3.vacuum_phi, &m2.vacuum_phi) <= 1e-12);
    assert!(distance(&m3.vacuum_psi, &m2.vacuum_psi) <= 1e-12);
    let f3 = generate_family(&m3, 4).unwrap();
    let f2 = generate_family(&m2, 4).unwrap();
    for level in 0..=4 {
        let same: Vec<_> = (0..=level).map(|n1| (n1, level - n1)).collect();
        for idx in &same {
            let f = &f3.phi[idx];
            let mut proj = PolyGaussFun::zero(2);
            for m in &same {
                let coef = inner_product(&f2.psi[m], f).unwrap();
                proj = proj.add(&f2.phi[m].scale(coef)).unwrap();
            }
            assert!(distance(f, &proj) <= 1e-10 * norm(f).unwrap(), "level {level} state {idx:?}");
        }
    }
}

fn hermite_function(n: usize) -> (CPoly, f64) {
    let xv = CPoly::var(1, 0);
    let mut h = vec![CPoly::one(1), xv.scale(real(2.0))];
    for k in 1..n {
        let next = h[k].mul(&xv).scale(real(2.0)).add(&h[k - 1].scale(real(-2.0 * k as f64)));
        h.push(next);
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let scale = 1.0 / (2f64.powi(n as i32) * std::f64::consts::PI.sqrt() * fact).sqrt();
    (h[n].clone(), scale)
}

#[test]
fn oscillator_family_is_the_hermite_basis() {
    let m = ex2(0.0, 0.0);
    let fam = generate_family(&m, 6).unwrap();
    for (n1, n2) in fam.indices() {
        let (h1, s1) = hermite_function(n1);
        let (h2, s2) = hermite_function(n2);
        let mut poly = CPoly::zero(2);
        for (e1, c1) in h1.iter() {
            for (e2, c2) in h2.iter() {
                let e = MultiIndex::from_slice(&[e1.get(0), e2.get(0)]);
                poly = poly.add(&CPoly::monomial(e, c1 * c2 * s1 * s2));
            }
        }
        let want = unit_width_gaussian([C64::default(); 2]).mul_poly(&poly).unwrap();
        let got = &fam.phi[&(n1, n2)];
        assert!(distance(got, &want) <= 1e-12, "({n1},{n2})");
        assert!(distance(&fam.psi[&(n1, n2)], &want) <= 1e-12);
    }
}

#[test]
fn ladder_relations_hold_on_the_family() {
    for m in canonical() {
        let fam = generate_family(&m, 5).unwrap();
        for (n1, n2) in fam.indices() {
            let f = &fam.phi[&(n1, n2)];
            if n1 + n2 < 5 {
                let up = m.b[0].apply(f).unwrap();
                let want = fam.phi[&(n1 + 1, n2)].scale(real(((n1 + 1) as f64).sqrt()));
                assert!(distance(&up, &want) <= 1e-9 * norm(&want).unwrap());
            }
            let down = m.a[0].apply(f).unwrap();
            let want = if n1 == 0 { PolyGaussFun::zero(2) } else { fam.phi[&(n1 - 1, n2)].scale(real((n1 as f64).sqrt())) };
            assert!(norm(&down.sub(&want).unwrap()).unwrap() <= 1e-9 * norm(f).unwrap(), "{} ({n1},{n2})", m.kind());
            let down2 = m.a[1].apply(f).unwrap();
            let want2 = if n2 == 0 { PolyGaussFun::zero(2) } else { fam.phi[&(n1, n2 - 1)].scale(real((n2 as f64).sqrt())) };
            assert!(norm(&down2.sub(&want2).unwrap()).unwrap() <= 1e-9 * norm(f).unwrap());
        }
    }
}

#[test]
fn sequential_and_parallel_families_are_identical() {
    let m = ModelParams::canonical(ModelKind::Ex1).build().unwrap();
    let a = generate_family_with(&m, 6, Exec::Sequential).unwrap();
    let b = generate_family_with(&m, 6, Exec::Parallel).unwrap();
    assert_eq!(a.phi, b.phi);
    assert_eq!(a.psi, b.psi);
    assert_eq!(a.len(), 28);
}

#[test]
fn guards_reject_out_of_range_parameters() {
    assert!(matches!(build_example1(&Ex1Params::new(0.999, 1.0, 1.0, 1.0)), Err(PbError::SingularParameter(_))));
    assert!(matches!(build_example1(&Ex1Params::new(-1.5, 1.0, 1.0, 1.0)), Err(PbError::SingularParameter(_))));
    assert!(build_example1(&Ex1Params::new(0.998, 1.0, 1.0, 1.0)).is_ok());
    assert!(matches!(build_example1(&Ex1Params::new(0.5, 0.5, 1.0, 1.0)), Err(PbError::Guard(_))));
    assert!(matches!(build_example1(&Ex1Params::new(0.5, 1.0, 0.0, 1.0)), Err(PbError::Guard(_))));
    assert!(matches!(build_example3(&Ex3Params::new(0.3, 0.2, 0.3, 0.0)), Err(PbError::Guard(_))));
    assert!(matches!(build_example2(&Ex2Params::new(f64::NAN, 0.0)), Err(PbError::Guard(_))));
}

fn random_params(rng: &mut impl Rng) -> ModelParams {
    match rng.random_range(0..3) {
        0 => ModelParams::Ex1(Ex1Params::new(
            rng.random_range(-0.9..0.9),
            if rng.random_bool(0.5) { 1.0 } else { -1.0 },
            rng.random_range(0.5..2.0),
            -rng.random_range(0.5..2.0),
        )),
        1 => ModelParams::Ex2(Ex2Params::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6))),
        _ => ModelParams::Ex3(Ex3Params::new(
            rng.random_range(-0.6..0.6),
            rng.random_range(-0.6..0.6),
            rng.random_range(-0.2..0.2),
            rng.random_range(-0.2..0.2),
        )),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn commutation_rules_hold_on_random_functions(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let m = random_params(&mut rng).build().unwrap();
        for _ in 0..3 {
            let f = probes::random_polygauss(&mut rng, 2, 3);
            let nf = norm(&f).unwrap();
            for j in 0..2 {
                for k in 0..2 {
                    let comm = m.a[j].commutator(&m.b[k]).unwrap();
                    let want = if j == k { f.clone() } else { PolyGaussFun::zero(2) };
                    let r = norm(&comm.apply(&f).unwrap().sub(&want).unwrap()).unwrap();
                    prop_assert!(r <= 1e-9 * nf, "{:?} [a{},b{}] residual {}", m.params, j + 1, k + 1, r);
                }
            }
        }
    }

    #[test]
    fn families_are_eigenvectors(seed in any::<u64>()) {
        let mut rng = probes::rng(seed);
        let m = random_params(&mut rng).build().unwrap();
        let fam = generate_family(&m, 4).unwrap();
        let h_dag = m.h.adjoint();
        let n_dag = [m.n_ops[0].adjoint(), m.n_ops[1].adjoint()];
        for (n1, n2) in fam.indices() {
            let e = m.eigenvalue(n1, n2);
            let (phi, psi) = (&fam.phi[&(n1, n2)], &fam.psi[&(n1, n2)]);
            prop_assert!(apply_residual(&m.h, phi, e) <= 1e-8);
            prop_assert!(apply_residual(&h_dag, psi, e) <= 1e-8);
            prop_assert!(apply_residual(&m.n_ops[0], phi, n1 as f64) <= 1e-8);
            prop_assert!(apply_residual(&m.n_ops[1], phi, n2 as f64) <= 1e-8);
            prop_assert!(apply_residual(&n_dag[0], psi, n1 as f64) <= 1e-8);
            prop_assert!(apply_residual(&n_dag[1], psi, n2 as f64) <= 1e-8);
        }
    }
}

