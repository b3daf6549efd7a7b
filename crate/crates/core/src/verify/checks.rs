use num_complex::Complex64 as C64;

use super::oracle::truncated_spectrum;
use super::{CheckBuilder, CheckKind, CheckResult, Series, Tolerances};
use crate::error::Result;
use crate::gauss::quadrature::integrate_2d;
use crate::gauss::{inner_product, inner_product_with_scale, norm};
use crate::models::family::ladder_table;
use crate::models::{triangle, LadderFamily, ModelBundle, ModelParams, Orientation};
use crate::par::Exec;
use crate::polygauss::PolyGaussFun;
use crate::weyl::WeylOp;

/// Number of trailing levels over which the quasi-basis deviation must not grow.
pub const QUASI_BASIS_TAIL: usize = 5;

/// Half width of the square used by the quadrature cross-check.
const QUADRATURE_HALF_WIDTH: f64 = 12.0;

/// Relative accuracy requested from the quadrature cross-check.
const QUADRATURE_REL_TARGET: f64 = 1e-10;

fn rel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn idx(n: (usize, usize)) -> Vec<usize> {
    vec![n.0, n.1]
}

/// Runs `body`; an internal error becomes a failed check carrying its message.
fn guarded(kind: CheckKind, tol: f64, body: impl FnOnce(&mut CheckBuilder) -> Result<()>) -> CheckResult {
    let mut b = CheckBuilder::new(kind, tol);
    match body(&mut b) {
        Ok(()) => b.finish(),
        Err(e) => CheckResult::failed(kind, tol, e.to_string()),
    }
}

/// `‖A f − c f‖ / ‖f‖`.
fn residual(op: &WeylOp, f: &PolyGaussFun, c: C64) -> Result<f64> {
    let r = op.apply(f)?.sub(&f.scale(c))?;
    Ok(rel(norm(&r)?, norm(f)?))
}

/// `([a_j, b_k] − δ_jk) f` on every probe, relative to `‖f‖`, together with
/// the coefficient deviation of the symbolic commutator from `δ_jk`.
pub fn check_ccr(bundle: &ModelBundle, probes: &[PolyGaussFun], tol: f64) -> CheckResult {
    guarded(CheckKind::Ccr, tol, |b| {
        for j in 0..2 {
            for k in 0..2 {
                let delta = if j == k { 1.0 } else { 0.0 };
                let comm = bundle.a[j].commutator(&bundle.b[k])?;
                let shifted = comm.add_scalar(C64::new(-delta, 0.0));
                b.measure(format!("[a{},b{}] coefficients", j + 1, k + 1), vec![j, k], shifted.max_abs());
                for (p, f) in probes.iter().enumerate() {
                    let dev = rel(norm(&shifted.apply(f)?)?, norm(f)?);
                    b.measure(format!("[a{},b{}] probe {p}", j + 1, k + 1), vec![j, k, p], dev);
                }
            }
        }
        Ok(())
    })
}

/// `‖a_j φ₀₀‖` and `‖b_j† Ψ₀₀‖ / ‖Ψ₀₀‖`, and the same for the printed vacua.
pub fn check_vacuum(bundle: &ModelBundle, tol: f64) -> CheckResult {
    guarded(CheckKind::Vacuum, tol, |b| {
        let b_dag = bundle.b_dagger();
        let mut pairs = vec![("phi", &bundle.vacuum_phi, &bundle.a), ("psi", &bundle.vacuum_psi, &b_dag)];
        if let Some((phi, psi)) = &bundle.printed_vacua {
            pairs.push(("printed phi", phi, &bundle.a));
            pairs.push(("printed psi", psi, &b_dag));
        }
        for (label, f, ops) in pairs {
            let nf = norm(f)?;
            b.structural(format!("{label} nonzero"), vec![], nf > 0.0);
            for (j, op) in ops.iter().enumerate() {
                b.measure(format!("{label} mode {}", j + 1), vec![j], rel(norm(&op.apply(f)?)?, nf));
            }
        }
        Ok(())
    })
}

/// `max_m |⟨φ_n, Ψ_m⟩ − δ_nm|` for every row `n`.
pub fn check_biorthogonality(family: &LadderFamily, tol: f64, exec: Exec) -> CheckResult {
    guarded(CheckKind::Biorthogonality, tol, |b| {
        let indices = family.indices();
        let rows = exec.try_map(&indices, |n| {
            let phi = &family.phi[n];
            let mut worst = 0.0f64;
            for m in &indices {
                let target = if n == m { 1.0 } else { 0.0 };
                let dev = (inner_product(phi, &family.psi[m])? - target).norm();
                worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
            }
            Ok::<_, crate::PbError>(worst)
        })?;
        for (n, dev) in indices.iter().zip(rows) {
            b.measure("row", idx(*n), dev);
        }
        Ok(())
    })
}

/// The `count` smallest values of the closed-form spectrum.
pub fn lowest_eigenvalues(params: &ModelParams, count: usize) -> Vec<f64> {
    let mut all: Vec<f64> =
        (0..count).flat_map(|n1| (0..count).map(move |n2| (n1, n2))).map(|(n1, n2)| params.eigenvalue(n1, n2)).collect();
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    all
}

/// Number of eigenvalues compared with the truncated-matrix oracle.
pub const ORACLE_LEVELS: usize = 6;

/// Eigen-equations for `H` and `H†`, reality of `⟨Ψ_n, Hφ_n⟩`, and the
/// lowest levels against a truncated Hermite-basis diagonalization of `H`
/// with `oracle_size` functions per mode (`0` skips the oracle).
pub fn check_eigen(
    bundle: &ModelBundle,
    family: &LadderFamily,
    tol: &Tolerances,
    oracle_size: usize,
    exec: Exec,
) -> CheckResult {
    guarded(CheckKind::Eigen, tol.eigen, |b| {
        let h_dag = bundle.h.adjoint();
        let indices = family.indices();
        let rows = exec.try_map(&indices, |&(n1, n2)| {
            let e = C64::new(bundle.eigenvalue(n1, n2), 0.0);
            let phi = &family.phi[&(n1, n2)];
            let psi = &family.psi[&(n1, n2)];
            let r_phi = residual(&bundle.h, phi, e)?;
            let r_psi = residual(&h_dag, psi, e)?;
            let rayleigh = inner_product(psi, &bundle.h.apply(phi)?)?;
            Ok::<_, crate::PbError>((r_phi, r_psi, rayleigh, e.re))
        })?;
        for (n, (r_phi, r_psi, rayleigh, e)) in indices.iter().zip(rows) {
            let scale = e.abs().max(1.0);
            b.measure("H phi", idx(*n), r_phi);
            b.measure("H^dagger psi", idx(*n), r_psi);
            b.measure("<psi, H phi> - E", idx(*n), (rayleigh.re - e).abs() / scale);
            b.record("Im <psi, H phi>", idx(*n), rayleigh.im.abs() / scale, tol.eigen_real);
        }
        if oracle_size > 0 {
            let spectrum = truncated_spectrum(&bundle.h, oracle_size)?;
            let want = lowest_eigenvalues(&bundle.params, ORACLE_LEVELS);
            b.structural("oracle size", vec![oracle_size], spectrum.len() >= want.len());
            for (k, (got, w)) in spectrum.iter().zip(&want).enumerate() {
                let dev = (got - C64::new(*w, 0.0)).norm() / w.abs().max(1.0);
                b.record("truncated-matrix oracle", vec![k], dev, tol.spectrum_oracle);
            }
        }
        Ok(())
    })
}

/// Coefficient deviation of the conjugated Hamiltonian from its partner, and
/// of every recorded generator relation.
pub fn check_intertwining(bundle: &ModelBundle, tol: f64) -> CheckResult {
    guarded(CheckKind::Intertwining, tol, |b| {
        let (source, target) = match bundle.orientation {
            Orientation::ModelToPartner => (&bundle.h, &bundle.h_ref),
            Orientation::PartnerToModel => (&bundle.h_ref, &bundle.h),
        };
        b.measure("hamiltonian", vec![], bundle.t.conjugate_weyl(source)?.max_deviation(target));
        for (k, rel) in bundle.relations.iter().enumerate() {
            b.measure(rel.name.clone(), vec![k], bundle.t.conjugate_weyl(&rel.source)?.max_deviation(&rel.target));
        }
        Ok(())
    })
}

/// `‖Ψ_n − Θφ_n‖ / ‖Ψ_n‖`, `N_j f` against `Θ⁻¹ N_j† Θ f`, and
/// positivity of `⟨f, Θf⟩` on the probes.
pub fn check_theta_conjugation(
    bundle: &ModelBundle,
    family: &LadderFamily,
    probes: &[PolyGaussFun],
    tol: &Tolerances,
    exec: Exec,
) -> CheckResult {
    guarded(CheckKind::ThetaConjugation, tol.theta, |b| {
        let theta = &bundle.theta;
        let theta_inv = theta.inverse();
        let indices = family.indices();
        let rows = exec.try_map(&indices, |n| {
            let psi = &family.psi[n];
            let diff = psi.sub(&theta.apply(&family.phi[n])?)?;
            Ok::<_, crate::PbError>(rel(norm(&diff)?, norm(psi)?))
        })?;
        for (n, dev) in indices.iter().zip(rows) {
            b.measure("Psi - Theta phi", idx(*n), dev);
        }
        for (j, n_op) in bundle.n_ops.iter().enumerate() {
            let n_dag = n_op.adjoint();
            for (p, f) in probes.iter().enumerate() {
                let direct = n_op.apply(f)?;
                let via = theta_inv.apply(&n_dag.apply(&theta.apply(f)?)?)?;
                let scale = norm(&direct)?.max(norm(f)?);
                b.measure(format!("N{} vs metric conjugate", j + 1), vec![j, p], rel(norm(&direct.sub(&via)?)?, scale));
            }
        }
        for (p, f) in probes.iter().enumerate() {
            let z = inner_product(f, &theta.apply(f)?)?;
            b.structural("<f, Theta f> > 0", vec![p], z.re > 0.0);
            b.measure("Im <f, Theta f>", vec![p], rel(z.im.abs(), z.re.abs()));
        }
        Ok(())
    })
}

/// Partial sums of the weak resolution of the identity on one probe pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSums {
    pub exact: C64,
    /// `S_N = Σ_{|n| ≤ N} ⟨f, Ψ_n⟩⟨φ_n, g⟩`.
    pub direct: Vec<C64>,
    /// `S'_N = Σ_{|n| ≤ N} ⟨f, φ_n⟩⟨Ψ_n, g⟩`.
    pub swapped: Vec<C64>,
    /// Running `Σ |terms|` of the direct sum, for the rounding floor.
    pub magnitude: Vec<f64>,
    pub magnitude_swapped: Vec<f64>,
}

impl PartialSums {
    fn accumulate(exact: (C64, f64), nmax: usize, terms: Vec<(usize, C64, C64)>) -> Self {
        let levels = nmax + 1;
        let mut out = PartialSums {
            exact: exact.0,
            direct: vec![C64::default(); levels],
            swapped: vec![C64::default(); levels],
            magnitude: vec![exact.1; levels],
            magnitude_swapped: vec![exact.1; levels],
        };
        for (level, d, s) in terms {
            for n in level..levels {
                out.direct[n] += d;
                out.swapped[n] += s;
                out.magnitude[n] += d.norm();
                out.magnitude_swapped[n] += s.norm();
            }
        }
        out
    }
}

/// Partial sums from the explicit families.
///
/// Each coefficient contracts a degree-`|n|` polynomial against a displaced
/// Gaussian, which cancels heavily: past `|n| ≈ 20` rounding dominates.
pub fn partial_sums(family: &LadderFamily, f: &PolyGaussFun, g: &PolyGaussFun, exec: Exec) -> Result<PartialSums> {
    let exact = inner_product_with_scale(f, g)?;
    let terms = exec.try_map(&family.indices(), |n| {
        let (phi, psi) = (&family.phi[n], &family.psi[n]);
        let direct = inner_product(f, psi)? * inner_product(phi, g)?;
        let swapped = inner_product(f, phi)? * inner_product(psi, g)?;
        Ok::<_, crate::PbError>((n.0 + n.1, direct, swapped))
    })?;
    Ok(PartialSums::accumulate(exact, family.nmax, terms))
}

/// Partial sums with the ladder operators moved onto the probes:
/// `⟨f, Ψ_n⟩ = ⟨a^n f, Ψ₀₀⟩/√n!` and `⟨φ_n, g⟩ = ⟨φ₀₀, (b†)^n g⟩/√n!`,
/// and likewise for the swapped form. Stays accurate at large `|n|`.
pub fn partial_sums_transfer(
    bundle: &ModelBundle,
    f: &PolyGaussFun,
    g: &PolyGaussFun,
    nmax: usize,
    exec: Exec,
) -> Result<PartialSums> {
    let exact = inner_product_with_scale(f, g)?;
    let b_dag = bundle.b_dagger();
    let fa = ladder_table(f, &bundle.a, nmax, exec)?;
    let fb = ladder_table(f, &b_dag, nmax, exec)?;
    let ga = ladder_table(g, &bundle.a, nmax, exec)?;
    let gb = ladder_table(g, &b_dag, nmax, exec)?;
    let (phi0, psi0) = (&bundle.vacuum_phi, &bundle.vacuum_psi);
    let terms = exec.try_map(&triangle(nmax), |n| {
        let direct = inner_product(&fa[n], psi0)? * inner_product(phi0, &gb[n])?;
        let swapped = inner_product(&fb[n], phi0)? * inner_product(psi0, &ga[n])?;
        Ok::<_, crate::PbError>((n.0 + n.1, direct, swapped))
    })?;
    Ok(PartialSums::accumulate(exact, nmax, terms))
}

/// Whether `deviations` does not grow over the final `QUASI_BASIS_TAIL`
/// levels, allowing growth below the rounding floor `64·ε·Σ|terms|`.
fn tail_non_increasing(deviations: &[f64], magnitude: &[f64]) -> bool {
    let start = deviations.len().saturating_sub(QUASI_BASIS_TAIL);
    (start + 1..deviations.len()).all(|n| deviations[n] <= deviations[n - 1] + 64.0 * f64::EPSILON * magnitude[n])
}

/// Convergence of `S_N(f, g)` and its swapped form to `⟨f, g⟩` up to level
/// `nmax` for every probe pair, with `⟨f, g⟩` cross-checked by adaptive
/// quadrature. Also returns the partial-sum sequences as plot data.
pub fn check_quasi_basis(
    bundle: &ModelBundle,
    nmax: usize,
    pairs: &[(PolyGaussFun, PolyGaussFun)],
    tol: &Tolerances,
    exec: Exec,
) -> (CheckResult, Vec<Series>) {
    let mut series = Vec::new();
    let result = guarded(CheckKind::QuasiBasis, tol.quasi_basis, |b| {
        for (p, (f, g)) in pairs.iter().enumerate() {
            let sums = partial_sums_transfer(bundle, f, g, nmax, exec)?;
            let dev: Vec<f64> = sums.direct.iter().map(|s| (s - sums.exact).norm()).collect();
            let dev_sw: Vec<f64> = sums.swapped.iter().map(|s| (s - sums.exact).norm()).collect();
            b.measure("|S_N - <f,g>|", vec![p, nmax], dev[nmax]);
            b.measure("|S'_N - <f,g>|", vec![p, nmax], dev_sw[nmax]);
            b.structural("tail non-increasing", vec![p], tail_non_increasing(&dev, &sums.magnitude));
            b.structural("swapped tail non-increasing", vec![p], tail_non_increasing(&dev_sw, &sums.magnitude_swapped));

            let quad = integrate_2d(
                |x, y| {
                    let pt = [C64::new(x, 0.0), C64::new(y, 0.0)];
                    let nan = C64::new(f64::NAN, 0.0);
                    f.eval(&pt).unwrap_or(nan).conj() * g.eval(&pt).unwrap_or(nan)
                },
                QUADRATURE_HALF_WIDTH,
                QUADRATURE_REL_TARGET * sums.exact.norm().max(1e-3),
            );
            b.record("quadrature <f,g>", vec![p], rel((quad - sums.exact).norm(), sums.exact.norm()), tol.quadrature);

            series.push(Series {
                name: format!("quasi_basis_pair{p}"),
                columns: ["N", "re_S", "im_S", "re_S_swapped", "im_S_swapped", "re_exact", "im_exact", "deviation"]
                    .map(String::from)
                    .to_vec(),
                rows: (0..=nmax)
                    .map(|n| {
                        let (s, t) = (sums.direct[n], sums.swapped[n]);
                        vec![n as f64, s.re, s.im, t.re, t.im, sums.exact.re, sums.exact.im, dev[n]]
                    })
                    .collect(),
            });
        }
        Ok(())
    });
    (result, series)
}

/// `g_n = ‖φ_{(n,n)}‖·‖Ψ_{(n,n)}‖` for `2n ≤ nmax`.
pub fn riesz_sequence(family: &LadderFamily) -> Result<Vec<f64>> {
    (0..=family.nmax / 2).map(|n| Ok(norm(&family.phi[&(n, n)])? * norm(&family.psi[&(n, n)])?)).collect()
}

/// Lower bound `g_n ≥ 1 − tol`; `g_n = 1` when the metric is trivial and
/// strict growth otherwise. Also returns `g_n` as plot data.
pub fn check_riesz_growth(family: &LadderFamily, metric_is_trivial: bool, tol: f64) -> (CheckResult, Vec<Series>) {
    let mut series = Vec::new();
    let result = guarded(CheckKind::RieszGrowth, tol, |b| {
        let g = riesz_sequence(family)?;
        for (n, &gn) in g.iter().enumerate() {
            b.measure("lower bound", vec![n, n], (1.0 - gn).max(0.0));
            if metric_is_trivial {
                b.measure("g_n = 1", vec![n, n], (gn - 1.0).abs());
            } else if n > 0 {
                b.structural("strictly increasing", vec![n, n], gn > g[n - 1]);
            }
        }
        series.push(Series {
            name: "riesz_growth".into(),
            columns: vec!["n".into(), "g_n".into()],
            rows: g.iter().enumerate().map(|(n, &gn)| vec![n as f64, gn]).collect(),
        });
        Ok(())
    });
    (result, series)
}
