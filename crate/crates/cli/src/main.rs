use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use maglev_core::config::{parse_alpha_list, parse_config, to_json, Config};
use maglev_core::csv::{metrics_json, write_csv};
use maglev_core::selftest::run_selftest;
use maglev_core::simloop::{compute_metrics, run_simulation};
use maglev_core::svg::render_svg;
use maglev_core::sweep::{sweep, sweep_csv};
use maglev_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(name = "maglev", version, about = "Fractional-order backstepping maglev simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write log.csv, metrics.json, config.echo.json and SVG plots.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the scenario once per fractional order and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated orders, e.g. `0.01,0.7`.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the fractional-calculus kernel against closed forms.
    Selftest,
}

enum Failure {
    Config(anyhow::Error),
    Abort(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn load_config(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Config)?;
    parse_config(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Config)
}

fn write_file(dir: &Path, name: &str, contents: &str, emitted: &mut Vec<String>) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    emitted.push(name.to_string());
    Ok(())
}

fn write_manifest(dir: &Path, config: &Path, emitted: &[String], status: u8) -> anyhow::Result<()> {
    let manifest = serde_json::json!({
        "config_path": config.display().to_string(),
        "output_dir": dir.display().to_string(),
        "files": emitted,
        "exit_status": status,
    });
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(dir.join("manifest.json"), text).context("writing manifest.json")?;
    Ok(())
}

fn cmd_run(config_path: &Path, out: &Path) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let log = run_simulation(&config.sim).map_err(|e| Failure::Config(e.into()))?;
    let mut emitted = Vec::new();
    write_file(out, "config.echo.json", &to_json(&config), &mut emitted)?;
    write_file(out, "log.csv", &write_csv(&log), &mut emitted)?;
    let metrics = compute_metrics(&log, config.output.settle_band, config.output.tail);
    write_file(out, "metrics.json", &metrics_json(&metrics), &mut emitted)?;
    if !log.records.is_empty() {
        for channel in &config.output.channels {
            let svg = render_svg(&log, channel, config.output.svg_width, config.output.svg_height)
                .map_err(|e| Failure::Config(e.into()))?;
            write_file(out, &format!("{channel}.svg"), &svg, &mut emitted)?;
        }
    }

    let status = if log.is_complete() { 0 } else { EXIT_ABORT };
    write_manifest(out, config_path, &emitted, status)?;
    for name in &emitted {
        println!("{}", out.join(name).display());
    }
    match log.abort {
        None => Ok(()),
        Some(a) => Err(Failure::Abort(format!(
            "{} at t = {:.6} s (y = {:e} m, v = {:e} m/s)",
            a.reason, a.t, a.y, a.v
        ))),
    }
}

fn sweep_threads(jobs: usize) -> usize {
    std::env::var("MAGLEV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(jobs, |n| n.min(jobs))
}

fn cmd_sweep(config_path: &Path, alphas: &str, out: &Path) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    let alphas = parse_alpha_list(alphas).map_err(|e| Failure::Config(e.into()))?;
    let rows = sweep(
        &config.sim,
        &alphas,
        config.output.settle_band,
        config.output.tail,
        sweep_threads(alphas.len()),
    )
    .map_err(|e| match e {
        Error::Validation(_) | Error::Parse(_) => Failure::Config(e.into()),
        other => Failure::Other(other.into()),
    })?;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut emitted = Vec::new();
    write_file(out, "config.echo.json", &to_json(&config), &mut emitted)?;
    write_file(out, "sweep.csv", &sweep_csv(&rows), &mut emitted)?;
    let aborted: Vec<String> = rows
        .iter()
        .filter_map(|r| r.abort.as_ref().map(|why| format!("alpha {}: {why}", r.alpha)))
        .collect();
    write_manifest(out, config_path, &emitted, if aborted.is_empty() { 0 } else { EXIT_ABORT })?;
    print!("{}", sweep_csv(&rows));
    if aborted.is_empty() {
        Ok(())
    } else {
        Err(Failure::Abort(aborted.join("; ")))
    }
}

fn cmd_selftest() -> ExitCode {
    let checks = run_selftest();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:<width$}  {}", c.name, c.detail);
    }
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Sweep { config, alphas, out } => cmd_sweep(&config, &alphas, &out),
        Command::Selftest => return cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Abort(msg)) => {
            eprintln!("simulation aborted: {msg}");
            ExitCode::from(EXIT_ABORT)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
