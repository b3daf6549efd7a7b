//! Run configuration: a JSON document, optionally overridden by flags.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use pb_core::models::{Ex1Params, Ex2Params, Ex3Params, ModelKind, ModelParams};
use pb_core::probes::DEFAULT_SEED;
use pb_core::verify::{CheckKind, SuiteConfig, Tolerances};
use serde_json::{Map, Value};

/// A configuration problem, located by its key path.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError { path: path.into(), reason: reason.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.reason)
        } else {
            write!(f, "`{}`: {}", self.path, self.reason)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "md" | "markdown" => Some(Format::Markdown),
            _ => None,
        }
    }
}

pub fn parse_formats(list: &str, path: &str) -> Result<Vec<Format>, ConfigError> {
    let mut out = BTreeSet::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.insert(Format::parse(item).ok_or_else(|| ConfigError::new(path, format!("unknown format `{item}`")))?);
    }
    if out.is_empty() {
        return Err(ConfigError::new(path, "no output format given"));
    }
    Ok(out.into_iter().collect())
}

/// Everything needed to execute and emit one `run` or `sweep`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    /// Fixed parameter values (canonical defaults filled in).
    pub params: Vec<(String, f64)>,
    /// Sweep axes in declaration order; empty for a single run.
    pub sweep: Vec<(String, Vec<f64>)>,
    pub suite: SuiteConfig,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

/// Values given on the command line; each one replaces the file's.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub model: Option<String>,
    pub nmax: Option<usize>,
    pub out: Option<PathBuf>,
    pub formats: Option<String>,
    pub params: Vec<(String, f64)>,
    pub sweep: Vec<(String, Vec<f64>)>,
    pub seed: Option<u64>,
}

const TOP_KEYS: [&str; 10] =
    ["model", "params", "sweep", "nmax", "qb_nmax", "oracle_size", "random_probes", "tolerances", "checks", "output"];

/// Parameter names accepted for each model, in report order.
pub fn param_names(kind: ModelKind) -> &'static [&'static str] {
    match kind {
        ModelKind::Ex1 => &["epsilon", "xi", "a", "b", "epsilon_margin"],
        ModelKind::Ex2 => &["A", "B"],
        ModelKind::Ex3 => &["A", "B", "theta", "theta_tilde", "theta_max"],
    }
}

fn default_params(kind: ModelKind) -> Vec<(String, f64)> {
    let mut v: Vec<(String, f64)> =
        ModelParams::canonical(kind).values().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    match kind {
        ModelKind::Ex1 => v.push(("epsilon_margin".into(), Ex1Params::DEFAULT_EPSILON_MARGIN)),
        ModelKind::Ex3 => v.push(("theta_max".into(), Ex3Params::DEFAULT_THETA_MAX)),
        ModelKind::Ex2 => {}
    }
    v
}

/// Builds model parameters from named values.
pub fn model_params(kind: ModelKind, values: &[(String, f64)]) -> ModelParams {
    let get = |name: &str| values.iter().find(|(k, _)| k == name).map(|(_, v)| *v).unwrap_or(f64::NAN);
    match kind {
        ModelKind::Ex1 => ModelParams::Ex1(Ex1Params {
            epsilon_margin: get("epsilon_margin"),
            ..Ex1Params::new(get("epsilon"), get("xi"), get("a"), get("b"))
        }),
        ModelKind::Ex2 => ModelParams::Ex2(Ex2Params::new(get("A"), get("B"))),
        ModelKind::Ex3 => ModelParams::Ex3(Ex3Params {
            theta_max: get("theta_max"),
            ..Ex3Params::new(get("A"), get("B"), get("theta"), get("theta_tilde"))
        }),
    }
}

fn as_number(v: &Value, path: &str) -> Result<f64, ConfigError> {
    v.as_f64().ok_or_else(|| ConfigError::new(path, format!("expected a number, found {v}")))
}

fn as_count(v: &Value, path: &str) -> Result<usize, ConfigError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| ConfigError::new(path, format!("expected a non-negative integer, found {v}")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ConfigError> {
    v.as_object().ok_or_else(|| ConfigError::new(path, format!("expected an object, found {v}")))
}

fn check_param_name(kind: ModelKind, name: &str, path: &str) -> Result<(), ConfigError> {
    if param_names(kind).contains(&name) {
        Ok(())
    } else {
        Err(ConfigError::new(
            path,
            format!("unknown parameter for {kind}; expected one of {}", param_names(kind).join(", ")),
        ))
    }
}

fn set_param(params: &mut [(String, f64)], name: &str, value: f64) {
    if let Some(slot) = params.iter_mut().find(|(k, _)| k == name) {
        slot.1 = value;
    }
}

fn parse_checks(v: &Value) -> Result<BTreeSet<CheckKind>, ConfigError> {
    let lookup = |name: &str, path: &str| {
        CheckKind::parse(name).ok_or_else(|| ConfigError::new(path, format!("unknown check `{name}`")))
    };
    match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let path = format!("checks[{i}]");
                let name = item.as_str().ok_or_else(|| ConfigError::new(&path, "expected a check name"))?;
                lookup(name, &path)
            })
            .collect(),
        Value::Object(map) => {
            let mut set: BTreeSet<CheckKind> = CheckKind::ALL.into_iter().collect();
            for (name, on) in map {
                let path = format!("checks.{name}");
                let kind = lookup(name, &path)?;
                match on.as_bool() {
                    Some(true) => set.insert(kind),
                    Some(false) => set.remove(&kind),
                    None => return Err(ConfigError::new(path, "expected true or false")),
                };
            }
            Ok(set)
        }
        other => Err(ConfigError::new("checks", format!("expected a list of names or an object of toggles, found {other}"))),
    }
}

/// Seed of the random probes: `PB_SEED` if set, otherwise the default.
pub fn seed_from_env() -> Result<u64, ConfigError> {
    match std::env::var("PB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| ConfigError::new("PB_SEED", format!("expected an unsigned integer, found `{s}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parses a configuration document and applies the overrides.
///
/// Parameters may be given at top level or under `params`; missing ones
/// take the model's reference values.
///
/// Fixed parameters are checked against the model's guards; sweep points
/// are checked when they run, so a bad point fails on its own.
pub fn parse_config(source: Option<&str>, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let doc: Value = match source {
        Some(text) => serde_json::from_str(text).map_err(|e| ConfigError::new("", format!("malformed JSON: {e}")))?,
        None => Value::Object(Map::new()),
    };
    let root = as_object(&doc, "")?;

    let model_name = match (&overrides.model, root.get("model")) {
        (Some(m), _) => m.clone(),
        (None, Some(v)) => v.as_str().ok_or_else(|| ConfigError::new("model", "expected a string"))?.to_string(),
        (None, None) => return Err(ConfigError::new("model", "missing; expected ex1, ex2 or ex3")),
    };
    let model = ModelKind::parse(&model_name)
        .ok_or_else(|| ConfigError::new("model", format!("unknown model `{model_name}`; expected ex1, ex2 or ex3")))?;

    for key in root.keys() {
        if !TOP_KEYS.contains(&key.as_str()) && !param_names(model).contains(&key.as_str()) {
            return Err(ConfigError::new(
                key.as_str(),
                format!("unknown key; expected one of {} or a {model} parameter", TOP_KEYS.join(", ")),
            ));
        }
    }

    let mut params = default_params(model);
    for name in param_names(model) {
        if let Some(v) = root.get(*name) {
            set_param(&mut params, name, as_number(v, name)?);
        }
    }
    if let Some(v) = root.get("params") {
        for (name, value) in as_object(v, "params")? {
            let path = format!("params.{name}");
            check_param_name(model, name, &path)?;
            set_param(&mut params, name, as_number(value, &path)?);
        }
    }
    for (name, value) in &overrides.params {
        check_param_name(model, name, &format!("--param {name}"))?;
        set_param(&mut params, name, *value);
    }

    let mut sweep: Vec<(String, Vec<f64>)> = Vec::new();
    if let Some(v) = root.get("sweep") {
        for (name, values) in as_object(v, "sweep")? {
            let path = format!("sweep.{name}");
            check_param_name(model, name, &path)?;
            let list = values.as_array().ok_or_else(|| ConfigError::new(&path, "expected a list of numbers"))?;
            let nums = list.iter().enumerate().map(|(i, x)| as_number(x, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
            sweep.push((name.clone(), nums));
        }
    }
    for (name, values) in &overrides.sweep {
        check_param_name(model, name, &format!("--grid {name}"))?;
        sweep.retain(|(k, _)| k != name);
        sweep.push((name.clone(), values.clone()));
    }
    for (name, values) in &sweep {
        if values.is_empty() {
            return Err(ConfigError::new(format!("sweep.{name}"), "sweep grid must not be empty"));
        }
    }

    let mut suite = SuiteConfig { seed: overrides.seed.map_or_else(seed_from_env, Ok)?, ..SuiteConfig::default() };
    for (key, slot) in [
        ("nmax", &mut suite.nmax),
        ("qb_nmax", &mut suite.qb_nmax),
        ("oracle_size", &mut suite.oracle_size),
        ("random_probes", &mut suite.random_probes),
    ] {
        if let Some(v) = root.get(key) {
            *slot = as_count(v, key)?;
        }
    }
    if let Some(n) = overrides.nmax {
        suite.nmax = n;
    }
    if let Some(v) = root.get("tolerances") {
        suite.tolerances = Tolerances::default();
        for (name, value) in as_object(v, "tolerances")? {
            let path = format!("tolerances.{name}");
            let slot = suite.tolerances.get_mut(name).ok_or_else(|| {
                ConfigError::new(&path, format!("unknown tolerance; expected one of {}", Tolerances::NAMES.join(", ")))
            })?;
            let t = as_number(value, &path)?;
            if t.is_nan() || t <= 0.0 {
                return Err(ConfigError::new(&path, format!("tolerance must be positive, found {t}")));
            }
            *slot = t;
        }
    }
    if let Some(v) = root.get("checks") {
        suite.checks = parse_checks(v)?;
    }

    let mut out = PathBuf::from("pb-out");
    let mut formats = vec![Format::Json, Format::Csv, Format::Markdown];
    if let Some(v) = root.get("output") {
        for (key, value) in as_object(v, "output")? {
            let path = format!("output.{key}");
            match key.as_str() {
                "dir" => out = PathBuf::from(value.as_str().ok_or_else(|| ConfigError::new(&path, "expected a string"))?),
                "formats" => {
                    let list = match value {
                        Value::String(s) => s.clone(),
                        Value::Array(items) => items
                            .iter()
                            .map(|i| i.as_str().map(String::from).ok_or_else(|| ConfigError::new(&path, "expected format names")))
                            .collect::<Result<Vec<_>, _>>()?
                            .join(","),
                        _ => return Err(ConfigError::new(&path, "expected a list of format names")),
                    };
                    formats = parse_formats(&list, &path)?;
                }
                _ => return Err(ConfigError::new(&path, "unknown key; expected dir or formats")),
            }
        }
    }
    if let Some(dir) = &overrides.out {
        out = dir.clone();
    }
    if let Some(list) = &overrides.formats {
        formats = parse_formats(list, "--format")?;
    }

    let config = RunConfig { model, params, sweep, suite, out, formats };
    if config.sweep.is_empty() {
        if let Err(e) = model_params(model, &config.params).validate() {
            let culprit = param_names(model).iter().find(|n| e.to_string().contains(&format!(": {n} ="))).copied();
            return Err(ConfigError::new(culprit.map_or("params".to_string(), |n| format!("params.{n}")), e.to_string()));
        }
    }
    Ok(config)
}

impl RunConfig {
    /// Every run point: the cartesian product of the sweep axes, first axis
    /// slowest, over the fixed parameters.
    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut points = vec![self.params.clone()];
        for (name, values) in &self.sweep {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        set_param(&mut q, name, v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    pub fn model_points(&self) -> Vec<ModelParams> {
        self.points().iter().map(|p| model_params(self.model, p)).collect()
    }
}
