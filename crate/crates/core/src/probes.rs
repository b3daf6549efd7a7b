//! Seeded random test functions and the default displaced-Gaussian probes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polygauss::{CPoly, GaussEnvelope, MultiIndex, PolyGaussFun};

/// Seed used when `PB_SEED` is unset.
pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random envelope: real part of the quadratic form close to `½·I`, with a
/// modest complex symmetric perturbation and a small complex linear part.
pub fn random_envelope(rng: &mut impl Rng, nvars: usize) -> GaussEnvelope {
    let mut m = DMatrix::from_diagonal_element(nvars, nvars, C64::new(0.5, 0.0));
    for i in 0..nvars {
        m[(i, i)] += C64::new(rng.random_range(0.0..0.4), rng.random_range(-0.3..0.3));
        for j in 0..i {
            let z = C64::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
            m[(i, j)] += z;
            m[(j, i)] += z;
        }
    }
    let v = DVector::from_fn(nvars, |_, _| 0.5 * unit_complex(rng));
    GaussEnvelope::new(m, v, C64::new(0.0, 0.0)).expect("perturbation keeps the real part positive definite")
}

pub fn random_poly(rng: &mut impl Rng, nvars: usize, max_degree: usize) -> CPoly {
    let mut terms = Vec::new();
    for k in MultiIndex::all_up_to(nvars, max_degree) {
        if rng.random_bool(0.6) {
            terms.push((k, unit_complex(rng)));
        }
    }
    let p = CPoly::from_terms(nvars, terms);
    if p.is_zero() {
        CPoly::one(nvars)
    } else {
        p
    }
}

/// Random non-zero function with one or two Gaussian terms.
pub fn random_polygauss(rng: &mut impl Rng, nvars: usize, max_degree: usize) -> PolyGaussFun {
    let nterms = rng.random_range(1..=2);
    let mut f = PolyGaussFun::zero(nvars);
    for _ in 0..nterms {
        let env = random_envelope(rng, nvars);
        let poly = random_poly(rng, nvars, max_degree);
        let term = PolyGaussFun::from_term(poly, env).expect("dimensions agree");
        f = f.add(&term).expect("dimensions agree");
    }
    f
}

/// Normalised oscillator ground state `π^{−n/4} exp(−|x − d|²/2)` centred at `d`.
pub fn displaced_ground_state(displacement: &[f64]) -> PolyGaussFun {
    let n = displacement.len();
    let norm = std::f64::consts::PI.powf(-(n as f64) / 4.0);
    let f = PolyGaussFun::from_term(CPoly::constant(n, C64::new(norm, 0.0)), GaussEnvelope::isotropic(n, 1.0))
        .expect("dimensions agree");
    let shift: Vec<C64> = displacement.iter().map(|&d| C64::new(-d, 0.0)).collect();
    f.translate(&shift).expect("dimensions agree")
}

/// Displacements of the default quasi-basis probes; all of length ≤ 1.
pub const DEFAULT_PROBE_DISPLACEMENTS: [[f64; 2]; 4] = [[0.0, 0.0], [0.5, 0.0], [0.0, -0.5], [0.3, 0.4]];

/// Default `(f, g)` probe pairs for the weak resolution of the identity.
pub fn default_probe_pairs() -> Vec<(PolyGaussFun, PolyGaussFun)> {
    let d = DEFAULT_PROBE_DISPLACEMENTS.map(|x| displaced_ground_state(&x));
    vec![(d[0].clone(), d[0].clone()), (d[1].clone(), d[2].clone()), (d[3].clone(), d[1].clone())]
}
