use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pb_cli::config::{parse_config, ConfigError, Overrides};
use pb_cli::{execute, output};

#[derive(Parser)]
#[command(name = "pb", version, about = "Check suites for pseudo-bosonic model Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check suite on one parameter point.
    Run(Common),
    /// Run the check suite on every point of a parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Grid axis, e.g. `epsilon=0.1,0.5,0.9`; repeatable.
        #[arg(long = "grid", value_name = "NAME=V1,V2,...")]
        grid: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model: ex1, ex2 or ex3.
    #[arg(long)]
    model: Option<String>,
    /// Highest level n₁ + n₂ of the eigenfamilies.
    #[arg(long)]
    nmax: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated output formats: json, csv, md.
    #[arg(long)]
    format: Option<String>,
    /// Run points executed concurrently.
    #[arg(long)]
    jobs: Option<usize>,
    /// Parameter value, e.g. `A=0.3`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

fn split_assignment(s: &str, flag: &str) -> Result<(String, String), ConfigError> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| ConfigError::new(flag, format!("expected NAME=VALUE, found `{s}`")))
}

fn parse_number(s: &str, path: &str) -> Result<f64, ConfigError> {
    s.parse().map_err(|_| ConfigError::new(path, format!("expected a number, found `{s}`")))
}

fn overrides(common: &Common, grid: &[String]) -> Result<Overrides, ConfigError> {
    let params = common
        .params
        .iter()
        .map(|p| {
            let (k, v) = split_assignment(p, "--param")?;
            let value = parse_number(&v, &format!("--param {k}"))?;
            Ok((k, value))
        })
        .collect::<Result<_, ConfigError>>()?;
    let sweep = grid
        .iter()
        .map(|g| {
            let (k, list) = split_assignment(g, "--grid")?;
            let values = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_number(s.trim(), &format!("--grid {k}")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((k, values))
        })
        .collect::<Result<_, ConfigError>>()?;
    Ok(Overrides {
        model: common.model.clone(),
        nmax: common.nmax,
        out: common.out.clone(),
        formats: common.format.clone(),
        params,
        sweep,
        seed: None,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, grid, is_sweep) = match &cli.command {
        Command::Run(c) => (c, &[][..], false),
        Command::Sweep { common, grid } => (common, &grid[..], true),
    };

    let source = match &common.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let config = match overrides(common, grid).and_then(|o| parse_config(source.as_deref(), &o)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if is_sweep && config.sweep.is_empty() {
        eprintln!("config error: `sweep`: no grid given; use a `sweep` object or --grid");
        return ExitCode::from(2);
    }
    if !is_sweep && !config.sweep.is_empty() {
        eprintln!("config error: `sweep`: grids are only allowed with `pb sweep`");
        return ExitCode::from(2);
    }

    let reports = execute(&config, common.jobs);
    for (i, r) in reports.iter().enumerate() {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let verdict = if r.passed() { "pass".to_string() } else { format!("FAIL ({} check(s))", r.failures()) };
        println!("run {i}: {} [{}] {verdict}", r.model, params.join(", "));
        if let Some(e) = &r.error {
            println!("  error: {e}");
        }
        for c in r.results.iter().filter(|c| !c.pass) {
            println!("  {}: max deviation {:.3e} > tolerance {:.0e}", c.name(), c.max_abs_deviation, c.tolerance);
        }
    }
    match output::emit(&reports, &config.formats, &config.out) {
        Ok(files) => println!("wrote {} file(s) to {}", files.len(), config.out.display()),
        Err(e) => {
            eprintln!("error: cannot write reports: {e}");
            return ExitCode::from(2);
        }
    }

    let failures: usize = reports.iter().map(|r| r.failures()).sum();
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        let bad_runs = reports.iter().filter(|r| !r.passed()).count();
        eprintln!("{failures} check(s) failed in {bad_runs} of {} run point(s)", reports.len());
        ExitCode::FAILURE
    }
}
