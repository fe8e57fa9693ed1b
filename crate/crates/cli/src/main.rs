use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hqa_cli::{convergence_report, preset, run, ExperimentConfig, Mode, Report, PRESETS};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "hqa", version, about = "Hybrid qubit-resonator annealing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write trajectory.csv, summary.json and plots.
    Run(Selection),
    /// Repeat a run at 2N and at half the tolerance and compare final observables.
    Convergence(Selection),
    /// Print a preset as a TOML config.
    Show {
        #[arg(long)]
        preset: String,
    },
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct Selection {
    /// Built-in parameter set (repeatable with --sweep).
    #[arg(long)]
    preset: Vec<String>,
    /// TOML config file (repeatable with --sweep).
    #[arg(long)]
    config: Vec<PathBuf>,
    /// Override the config's mode (repeatable with --sweep).
    #[arg(long, value_enum)]
    mode: Vec<Mode>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 1 unless every check passes.
    #[arg(long)]
    check: bool,
    /// Fock levels per resonator.
    #[arg(long)]
    truncation: Option<usize>,
    /// Integrator tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Run every selected config/mode combination concurrently, each in its own directory.
    #[arg(long)]
    sweep: bool,
}

impl Selection {
    fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let mut base = Vec::new();
        for p in &self.preset {
            base.push(preset(p)?);
        }
        for c in &self.config {
            base.push(ExperimentConfig::load(c)?);
        }
        if base.is_empty() {
            bail!("pass --preset NAME or --config PATH");
        }
        let mut out = Vec::new();
        for cfg in base {
            let modes = if self.mode.is_empty() { vec![cfg.mode] } else { self.mode.clone() };
            for mode in modes {
                let mut c = cfg.clone();
                c.mode = mode;
                if let Some(n) = self.truncation {
                    c.truncation = n;
                }
                if let Some(t) = self.tol {
                    c.integrator_tol = t;
                    c.appendix.lab_tol = Some(t);
                }
                c.validate().with_context(|| format!("config {}", c.name))?;
                out.push(c);
            }
        }
        if out.len() > 1 && !self.sweep {
            bail!("{} runs selected; pass --sweep to run them all", out.len());
        }
        Ok(out)
    }

    fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        let base = self
            .out
            .clone()
            .or_else(|| std::env::var_os("HQA_OUT").map(PathBuf::from))
            .or_else(|| cfg.out.clone())
            .unwrap_or_else(|| PathBuf::from("hqa-out"));
        if self.sweep {
            base.join(format!("{}-{}", cfg.name, cfg.mode))
        } else {
            base
        }
    }
}

fn print_report(cfg: &ExperimentConfig, report: &Report, dir: &Path) -> Result<()> {
    println!("{} [{}] -> {}", cfg.name, cfg.mode, dir.display());
    if let Report::Oracle(r) = report {
        println!("{}", serde_json::to_string_pretty(&r.solution)?);
    }
    for c in report.checks() {
        println!(
            "  {} {}: {:.6e} {} {:.6e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.relation,
            c.limit
        );
    }
    Ok(())
}

fn run_one(sel: &Selection, cfg: &ExperimentConfig) -> Result<bool> {
    let dir = sel.out_dir(cfg);
    let (report, _) = run(cfg, &dir)?;
    print_report(cfg, &report, &dir)?;
    Ok(report.passed())
}

fn converge_one(sel: &Selection, cfg: &ExperimentConfig) -> Result<bool> {
    let dir = sel.out_dir(cfg);
    std::fs::create_dir_all(&dir)?;
    let report = convergence_report(cfg)?;
    report.table().write(&dir.join("convergence.csv"))?;
    std::fs::write(
        dir.join("convergence.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    println!("{} [{}] N {} -> {}, tol {:e} -> {:e}", cfg.name, cfg.mode, cfg.truncation, 2 * cfg.truncation, cfg.integrator_tol, cfg.integrator_tol / 2.0);
    for r in &report.rows {
        println!(
            "  {} {}: dN {:.3e}, dtol {:.3e}",
            if r.passed { "ok  " } else { "FAIL" },
            r.observable,
            r.delta_truncation,
            r.delta_tol
        );
    }
    Ok(report.converged)
}

fn dispatch(sel: &Selection, f: fn(&Selection, &ExperimentConfig) -> Result<bool>) -> Result<bool> {
    let configs = sel.configs()?;
    let results: Vec<Result<bool>> = configs.par_iter().map(|c| f(sel, c)).collect();
    let mut all = true;
    for r in results {
        all &= r?;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(sel) => dispatch(sel, run_one).map(|ok| (ok, sel.check)),
        Command::Convergence(sel) => dispatch(sel, converge_one).map(|ok| (ok, sel.check)),
        Command::Show { preset: name } => preset(name)
            .and_then(|c| c.to_toml())
            .map(|t| {
                print!("{t}");
                (true, false)
            }),
        Command::Presets => {
            PRESETS.iter().for_each(|p| println!("{p}"));
            Ok((true, false))
        }
    };
    match outcome {
        Ok((ok, check)) => {
            if check && !ok {
                eprintln!("one or more checks failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
