//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.
//!
//! Used as an independent check on the closed-form integrals; it knows
//! nothing about Gaussian moments.

use num_complex::Complex64 as C64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_DEPTH: u32 = 40;

fn gk15(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).norm())
}

fn adapt(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64, whole: (C64, f64), depth: u32) -> C64 {
    let (value, err) = whole;
    // Below the rounding level of the panel further splitting cannot help.
    let floor = 50.0 * f64::EPSILON * value.norm();
    if err <= tol.max(floor) || depth >= MAX_DEPTH {
        return value;
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    adapt(f, a, mid, 0.5 * tol, left, depth + 1) + adapt(f, mid, b, 0.5 * tol, right, depth + 1)
}

/// `∫_a^b f(x) dx` to roughly `abs_tol`.
pub fn integrate_1d(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, abs_tol: f64) -> C64 {
    let first = gk15(&mut f, a, b);
    adapt(&mut f, a, b, abs_tol, first, 0)
}

/// Iterated adaptive quadrature over the square `[−half_width, half_width]²`.
pub fn integrate_2d(f: impl Fn(f64, f64) -> C64, half_width: f64, abs_tol: f64) -> C64 {
    let inner_tol = abs_tol / (4.0 * half_width);
    integrate_1d(
        |x| integrate_1d(|y| f(x, y), -half_width, half_width, inner_tol),
        -half_width,
        half_width,
        abs_tol,
    )
}
