use std::collections::BTreeSet;
use std::time::Instant;

use super::checks::{
    check_biorthogonality, check_ccr, check_eigen, check_intertwining, check_quasi_basis, check_riesz_growth,
    check_theta_conjugation, check_vacuum,
};
use super::{CheckKind, CheckResult, Tolerances};
use crate::models::{generate_family_with, LadderFamily, ModelBundle, ModelKind, ModelParams, NVARS};
use crate::par::Exec;
use crate::polygauss::PolyGaussFun;
use crate::probes::{default_probe_pairs, displaced_ground_state, random_polygauss, rng, DEFAULT_PROBE_DISPLACEMENTS, DEFAULT_SEED};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub nmax: usize,
    /// Truncation level of the quasi-basis partial sums.
    pub qb_nmax: usize,
    /// Seed of the random probe functions.
    pub seed: u64,
    /// Hermite functions per mode in the spectrum oracle; `0` disables it.
    pub oracle_size: usize,
    pub random_probes: usize,
    pub tolerances: Tolerances,
    pub checks: BTreeSet<CheckKind>,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            nmax: 8,
            qb_nmax: 40,
            seed: DEFAULT_SEED,
            oracle_size: 30,
            random_probes: 10,
            tolerances: Tolerances::default(),
            checks: CheckKind::ALL.into_iter().collect(),
            exec: Exec::default(),
        }
    }
}

/// Tabular plot data attached to a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub model: ModelKind,
    pub params: Vec<(String, f64)>,
    pub nmax: usize,
    /// One entry per enabled check, in `CheckKind` order.
    pub results: Vec<CheckResult>,
    pub series: Vec<Series>,
    pub timings: Vec<Timing>,
    pub notes: Vec<String>,
    /// Model-construction failure, if any.
    pub error: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.pass).count()
    }

    pub fn result(&self, kind: CheckKind) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.kind == kind)
    }
}

/// Probe set for operator identities: the default displaced ground states
/// followed by `count` seeded random functions.
pub fn default_probes(seed: u64, count: usize) -> Vec<PolyGaussFun> {
    let mut r = rng(seed);
    let mut probes: Vec<PolyGaussFun> = DEFAULT_PROBE_DISPLACEMENTS.iter().map(|d| displaced_ground_state(d)).collect();
    probes.extend((0..count).map(|_| random_polygauss(&mut r, NVARS, 2)));
    probes
}

fn timed<T>(timings: &mut Vec<Timing>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push(Timing { stage: stage.into(), seconds: start.elapsed().as_secs_f64() });
    out
}

/// Builds the model and runs every enabled check.
///
/// A construction failure yields a report whose enabled checks all fail
/// with the error as their diagnostic.
pub fn run_suite(params: &ModelParams, config: &SuiteConfig) -> Report {
    let mut report = Report {
        model: params.kind(),
        params: params.values().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        nmax: config.nmax,
        results: Vec::new(),
        series: Vec::new(),
        timings: Vec::new(),
        notes: Vec::new(),
        error: None,
    };
    let start = Instant::now();
    let bundle = timed(&mut report.timings, "build", || params.validate().and_then(|()| params.build()));
    let bundle = match bundle {
        Ok(b) => b,
        Err(e) => {
            let msg = e.to_string();
            report.results = config
                .checks
                .iter()
                .map(|&k| CheckResult::failed(k, config.tolerances.for_check(k), format!("model construction: {msg}")))
                .collect();
            report.error = Some(msg);
            return report;
        }
    };
    report.notes = bundle.notes.clone();
    for c in &bundle.constants {
        report.notes.push(format!(
            "constant {}: printed {:.16e}{:+.16e}i, derived {:.16e}{:+.16e}i{}",
            c.name,
            c.printed.re,
            c.printed.im,
            c.derived.re,
            c.derived.im,
            if c.asserted { "" } else { " (reported only)" }
        ));
    }

    let needs_family = config.checks.iter().any(|k| k.needs_family());
    let family = if needs_family {
        match timed(&mut report.timings, "family", || generate_family_with(&bundle, config.nmax, config.exec)) {
            Ok(f) => Some(f),
            Err(e) => {
                report.error = Some(format!("family generation: {e}"));
                None
            }
        }
    } else {
        None
    };
    let probes = default_probes(config.seed, config.random_probes);

    let kinds: Vec<CheckKind> = config.checks.iter().copied().collect();
    let outcomes = config.exec.map(&kinds, |&kind| {
        let t = Instant::now();
        let (result, series) = run_check(kind, &bundle, family.as_ref(), &probes, config);
        (result, series, Timing { stage: kind.name().into(), seconds: t.elapsed().as_secs_f64() })
    });
    for (result, series, timing) in outcomes {
        report.results.push(result);
        report.series.extend(series);
        report.timings.push(timing);
    }
    report.timings.push(Timing { stage: "total".into(), seconds: start.elapsed().as_secs_f64() });
    report
}

fn run_check(
    kind: CheckKind,
    bundle: &ModelBundle,
    family: Option<&LadderFamily>,
    probes: &[PolyGaussFun],
    config: &SuiteConfig,
) -> (CheckResult, Vec<super::Series>) {
    let tol = &config.tolerances;
    let exec = config.exec;
    let missing = || (CheckResult::failed(kind, tol.for_check(kind), "family unavailable".into()), Vec::new());
    let random = &probes[DEFAULT_PROBE_DISPLACEMENTS.len()..];
    match kind {
        CheckKind::Ccr => (check_ccr(bundle, probes, tol.ccr), Vec::new()),
        CheckKind::Vacuum => (check_vacuum(bundle, tol.vacuum), Vec::new()),
        CheckKind::Intertwining => (check_intertwining(bundle, tol.intertwining), Vec::new()),
        CheckKind::Biorthogonality => match family {
            Some(f) => (check_biorthogonality(f, tol.biorthogonality, exec), Vec::new()),
            None => missing(),
        },
        CheckKind::Eigen => match family {
            Some(f) => (check_eigen(bundle, f, tol, config.oracle_size, exec), Vec::new()),
            None => missing(),
        },
        CheckKind::ThetaConjugation => match family {
            Some(f) => (check_theta_conjugation(bundle, f, random, tol, exec), Vec::new()),
            None => missing(),
        },
        CheckKind::RieszGrowth => match family {
            Some(f) => check_riesz_growth(f, bundle.metric_is_trivial(), tol.riesz_lower),
            None => missing(),
        },
        CheckKind::QuasiBasis => check_quasi_basis(bundle, config.qb_nmax, &default_probe_pairs(), tol, exec),
    }
}
