//! Quantified pass/fail checks of the pseudo-bosonic structure of a model.

mod checks;
pub mod oracle;
mod suite;

use std::fmt;

pub use checks::{
    check_biorthogonality, check_ccr, check_eigen, check_intertwining, check_quasi_basis, check_riesz_growth,
    check_theta_conjugation, check_vacuum, lowest_eigenvalues, partial_sums, partial_sums_transfer, riesz_sequence, PartialSums,
    ORACLE_LEVELS, QUASI_BASIS_TAIL,
};
pub use suite::{default_probes, run_suite, Report, Series, SuiteConfig, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Ccr,
    Vacuum,
    Biorthogonality,
    Eigen,
    Intertwining,
    ThetaConjugation,
    QuasiBasis,
    RieszGrowth,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Ccr,
        CheckKind::Vacuum,
        CheckKind::Biorthogonality,
        CheckKind::Eigen,
        CheckKind::Intertwining,
        CheckKind::ThetaConjugation,
        CheckKind::QuasiBasis,
        CheckKind::RieszGrowth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Ccr => "ccr",
            CheckKind::Vacuum => "vacuum",
            CheckKind::Biorthogonality => "biorthogonality",
            CheckKind::Eigen => "eigen",
            CheckKind::Intertwining => "intertwining",
            CheckKind::ThetaConjugation => "theta_conjugation",
            CheckKind::QuasiBasis => "quasi_basis",
            CheckKind::RieszGrowth => "riesz_growth",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the check needs the `n₁ + n₂ ≤ nmax` family.
    fn needs_family(self) -> bool {
        matches!(self, CheckKind::Biorthogonality | CheckKind::Eigen | CheckKind::ThetaConjugation | CheckKind::RieszGrowth)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub ccr: f64,
    pub vacuum: f64,
    pub biorthogonality: f64,
    pub eigen: f64,
    /// Imaginary part of the computed eigenvalues, relative to `max(1, |E|)`.
    pub eigen_real: f64,
    /// Agreement with the truncated Hermite-basis spectrum.
    pub spectrum_oracle: f64,
    pub intertwining: f64,
    pub theta: f64,
    pub quasi_basis: f64,
    /// Closed-form inner products against adaptive quadrature, relative.
    pub quadrature: f64,
    /// Slack in the lower bound `‖φ_n‖‖Ψ_n‖ ≥ 1`.
    pub riesz_lower: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ccr: 1e-9,
            vacuum: 1e-10,
            biorthogonality: 1e-8,
            eigen: 1e-8,
            eigen_real: 1e-12,
            spectrum_oracle: 1e-6,
            intertwining: 1e-10,
            theta: 1e-8,
            quasi_basis: 1e-4,
            quadrature: 1e-6,
            riesz_lower: 1e-10,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 11] = [
        "ccr",
        "vacuum",
        "biorthogonality",
        "eigen",
        "eigen_real",
        "spectrum_oracle",
        "intertwining",
        "theta",
        "quasi_basis",
        "quadrature",
        "riesz_lower",
    ];

    pub fn get_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "ccr" => &mut self.ccr,
            "vacuum" => &mut self.vacuum,
            "biorthogonality" => &mut self.biorthogonality,
            "eigen" => &mut self.eigen,
            "eigen_real" => &mut self.eigen_real,
            "spectrum_oracle" => &mut self.spectrum_oracle,
            "intertwining" => &mut self.intertwining,
            "theta" => &mut self.theta,
            "quasi_basis" => &mut self.quasi_basis,
            "quadrature" => &mut self.quadrature,
            "riesz_lower" => &mut self.riesz_lower,
            _ => return None,
        })
    }

    /// The headline tolerance of a check.
    pub fn for_check(&self, kind: CheckKind) -> f64 {
        match kind {
            CheckKind::Ccr => self.ccr,
            CheckKind::Vacuum => self.vacuum,
            CheckKind::Biorthogonality => self.biorthogonality,
            CheckKind::Eigen => self.eigen,
            CheckKind::Intertwining => self.intertwining,
            CheckKind::ThetaConjugation => self.theta,
            CheckKind::QuasiBasis => self.quasi_basis,
            CheckKind::RieszGrowth => self.riesz_lower,
        }
    }
}

/// One measured sub-criterion of a check.
#[derive(Clone, Debug, PartialEq)]
pub struct Detail {
    pub label: String,
    pub index: Vec<usize>,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Detail {
    pub fn pass(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Outcome of one check.
///
/// Sub-criteria measured against their own tolerance enter
/// `max_abs_deviation` rescaled to the check tolerance, and a violated
/// structural condition (such as a required monotonicity) enters as an
/// infinite deviation, so that `pass ⇔ max_abs_deviation ≤ tolerance` holds
/// throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub kind: CheckKind,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Vec<Detail>,
}

impl CheckResult {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub(crate) fn failed(kind: CheckKind, tolerance: f64, reason: String) -> Self {
        let mut b = CheckBuilder::new(kind, tolerance);
        b.structural(reason, vec![], false);
        b.finish()
    }
}

pub(crate) struct CheckBuilder {
    kind: CheckKind,
    tolerance: f64,
    details: Vec<Detail>,
}

impl CheckBuilder {
    pub fn new(kind: CheckKind, tolerance: f64) -> Self {
        CheckBuilder { kind, tolerance, details: Vec::new() }
    }

    pub fn record(&mut self, label: impl Into<String>, index: Vec<usize>, deviation: f64, tolerance: f64) {
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        self.details.push(Detail { label: label.into(), index, deviation, tolerance });
    }

    /// Same as [`CheckBuilder::record`] at the check's own tolerance.
    pub fn measure(&mut self, label: impl Into<String>, index: Vec<usize>, deviation: f64) {
        self.record(label, index, deviation, self.tolerance);
    }

    /// A yes/no condition: deviation 0 when it holds, infinite otherwise.
    pub fn structural(&mut self, label: impl Into<String>, index: Vec<usize>, holds: bool) {
        let tol = self.tolerance;
        self.record(label, index, if holds { 0.0 } else { f64::INFINITY }, tol);
    }

    pub fn finish(self) -> CheckResult {
        let tol = self.tolerance;
        let max = self
            .details
            .iter()
            .map(|d| if d.tolerance == tol { d.deviation } else { d.deviation * (tol / d.tolerance) })
            .map(|d| if d.is_nan() { f64::INFINITY } else { d })
            .fold(0.0, f64::max);
        CheckResult { kind: self.kind, max_abs_deviation: max, tolerance: tol, pass: max <= tol, details: self.details }
    }
}
