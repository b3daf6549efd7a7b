//! Report emission: JSON (lossless), CSV, Markdown and plot-data CSV.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use pb_core::models::ModelKind;
use pb_core::verify::{CheckKind, CheckResult, Detail, Report, Series, Timing};
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SCHEMA: &str = "pb-report/1";

/// 17 significant digits: parses back to the identical `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn num_value(x: f64) -> Value {
    Value::String(num(x))
}

pub fn reports_to_json(reports: &[Report]) -> Value {
    let failures: usize = reports.iter().map(Report::failures).sum();
    json!({
        "schema": SCHEMA,
        "runs": reports.iter().map(report_to_json).collect::<Vec<_>>(),
        "failures": failures,
    })
}

fn report_to_json(r: &Report) -> Value {
    json!({
        "model": r.model.name(),
        "params": r.params.iter().map(|(k, v)| json!({"name": k, "value": num(*v)})).collect::<Vec<_>>(),
        "nmax": r.nmax,
        "pass": r.passed(),
        "error": r.error,
        "results": r.results.iter().map(|c| json!({
            "name": c.name(),
            "max_abs_deviation": num(c.max_abs_deviation),
            "tolerance": num(c.tolerance),
            "pass": c.pass,
            "details": c.details.iter().map(|d| json!({
                "label": d.label,
                "index": d.index,
                "deviation": num(d.deviation),
                "tolerance": num(d.tolerance),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "series": r.series.iter().map(|s| json!({
            "name": s.name,
            "columns": s.columns,
            "rows": s.rows.iter().map(|row| row.iter().map(|x| num_value(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "timings": r.timings.iter().map(|t| json!({"stage": t.stage, "seconds": num(t.seconds)})).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

/// Failure to read back a JSON report.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeError(pub String);

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid report: {}", self.0)
    }
}

impl std::error::Error for DecodeError {}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, DecodeError> {
    obj.get(key).ok_or_else(|| DecodeError(format!("missing `{key}`")))
}

fn obj(v: &Value) -> Result<&Map<String, Value>, DecodeError> {
    v.as_object().ok_or_else(|| DecodeError(format!("expected an object, found {v}")))
}

fn arr(v: &Value) -> Result<&Vec<Value>, DecodeError> {
    v.as_array().ok_or_else(|| DecodeError(format!("expected an array, found {v}")))
}

fn text(v: &Value) -> Result<String, DecodeError> {
    v.as_str().map(String::from).ok_or_else(|| DecodeError(format!("expected a string, found {v}")))
}

fn real(v: &Value) -> Result<f64, DecodeError> {
    let s = v.as_str().ok_or_else(|| DecodeError(format!("expected a numeric string, found {v}")))?;
    s.parse().map_err(|_| DecodeError(format!("bad number `{s}`")))
}

fn count(v: &Value) -> Result<usize, DecodeError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| DecodeError(format!("expected an integer, found {v}")))
}

fn flag(v: &Value) -> Result<bool, DecodeError> {
    v.as_bool().ok_or_else(|| DecodeError(format!("expected a boolean, found {v}")))
}

pub fn reports_from_json(doc: &Value) -> Result<Vec<Report>, DecodeError> {
    let root = obj(doc)?;
    if text(field(root, "schema")?)? != SCHEMA {
        return Err(DecodeError("unsupported schema".into()));
    }
    arr(field(root, "runs")?)?.iter().map(report_from_json).collect()
}

fn report_from_json(v: &Value) -> Result<Report, DecodeError> {
    let o = obj(v)?;
    let model_name = text(field(o, "model")?)?;
    let model = ModelKind::parse(&model_name).ok_or_else(|| DecodeError(format!("unknown model `{model_name}`")))?;
    let params = arr(field(o, "params")?)?
        .iter()
        .map(|p| {
            let p = obj(p)?;
            Ok((text(field(p, "name")?)?, real(field(p, "value")?)?))
        })
        .collect::<Result<_, DecodeError>>()?;
    let results = arr(field(o, "results")?)?
        .iter()
        .map(|c| {
            let c = obj(c)?;
            let name = text(field(c, "name")?)?;
            let kind = CheckKind::parse(&name).ok_or_else(|| DecodeError(format!("unknown check `{name}`")))?;
            let details = arr(field(c, "details")?)?
                .iter()
                .map(|d| {
                    let d = obj(d)?;
                    Ok(Detail {
                        label: text(field(d, "label")?)?,
                        index: arr(field(d, "index")?)?.iter().map(count).collect::<Result<_, _>>()?,
                        deviation: real(field(d, "deviation")?)?,
                        tolerance: real(field(d, "tolerance")?)?,
                    })
                })
                .collect::<Result<_, DecodeError>>()?;
            Ok(CheckResult {
                kind,
                max_abs_deviation: real(field(c, "max_abs_deviation")?)?,
                tolerance: real(field(c, "tolerance")?)?,
                pass: flag(field(c, "pass")?)?,
                details,
            })
        })
        .collect::<Result<_, DecodeError>>()?;
    let series = arr(field(o, "series")?)?
        .iter()
        .map(|s| {
            let s = obj(s)?;
            Ok(Series {
                name: text(field(s, "name")?)?,
                columns: arr(field(s, "columns")?)?.iter().map(text).collect::<Result<_, _>>()?,
                rows: arr(field(s, "rows")?)?
                    .iter()
                    .map(|row| arr(row)?.iter().map(real).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<_, DecodeError>>()?;
    let timings = arr(field(o, "timings")?)?
        .iter()
        .map(|t| {
            let t = obj(t)?;
            Ok(Timing { stage: text(field(t, "stage")?)?, seconds: real(field(t, "seconds")?)? })
        })
        .collect::<Result<_, DecodeError>>()?;
    let error = match field(o, "error")? {
        Value::Null => None,
        other => Some(text(other)?),
    };
    Ok(Report {
        model,
        params,
        nmax: count(field(o, "nmax")?)?,
        results,
        series,
        timings,
        notes: arr(field(o, "notes")?)?.iter().map(text).collect::<Result<_, _>>()?,
        error,
    })
}

fn params_label(r: &Report) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per check per run point.
pub fn reports_to_csv(reports: &[Report]) -> String {
    let mut out = String::from("run,model,params,nmax,check,max_abs_deviation,tolerance,pass,error\n");
    for (i, r) in reports.iter().enumerate() {
        for c in &r.results {
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{},{},{},{}",
                r.model,
                csv_field(&params_label(r)),
                r.nmax,
                c.name(),
                num(c.max_abs_deviation),
                num(c.tolerance),
                c.pass,
                csv_field(r.error.as_deref().unwrap_or(""))
            );
        }
    }
    out
}

/// A pass/fail table per model.
pub fn reports_to_markdown(reports: &[Report]) -> String {
    let mut out = String::from("# Check summary\n");
    let failures: usize = reports.iter().map(Report::failures).sum();
    let _ = writeln!(out, "\n{} run point(s), {} failed check(s).", reports.len(), failures);
    for model in ModelKind::ALL {
        let runs: Vec<(usize, &Report)> = reports.iter().enumerate().filter(|(_, r)| r.model == model).collect();
        if runs.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n## {model}\n");
        out.push_str("| run | parameters | check | max deviation | tolerance | result |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for (i, r) in runs {
            if let Some(e) = &r.error {
                let _ = writeln!(out, "| {i} | {} | model construction | - | - | FAIL: {} |", params_label(r), e.replace('|', "/"));
            }
            for c in &r.results {
                let _ = writeln!(
                    out,
                    "| {i} | {} | {} | {:.3e} | {:.0e} | {} |",
                    params_label(r),
                    c.name(),
                    c.max_abs_deviation,
                    c.tolerance,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
        }
    }
    out
}

pub fn series_to_csv(s: &Series) -> String {
    let mut out = s.columns.join(",");
    out.push('\n');
    for row in &s.rows {
        out.push_str(&row.iter().map(|x| num(*x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn write(path: &Path, contents: &str) -> io::Result<()> {
    fs::write(path, contents).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Writes the requested formats plus plot data into `dir`; returns the files written.
pub fn emit(reports: &[Report], formats: &[Format], dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for f in formats {
        let (name, body) = match f {
            Format::Json => ("report.json", serde_json::to_string_pretty(&reports_to_json(reports)).expect("serializable")),
            Format::Csv => ("report.csv", reports_to_csv(reports)),
            Format::Markdown => ("summary.md", reports_to_markdown(reports)),
        };
        let path = dir.join(name);
        write(&path, &body)?;
        written.push(path);
    }
    let plots = dir.join("plots");
    if reports.iter().any(|r| !r.series.is_empty()) {
        fs::create_dir_all(&plots)?;
    }
    for (i, r) in reports.iter().enumerate() {
        for s in &r.series {
            let path = plots.join(format!("run{i}_{}_{}.csv", r.model, s.name));
            write(&path, &series_to_csv(s))?;
            written.push(path);
        }
    }
    Ok(written)
}
