//! Thin command-line front end; all functionality lives in the library.

use clap::{Args, Parser, Subcommand};
use mcrt::config::{cmd_build, cmd_diag, cmd_embed, cmd_sample, cmd_walk, RunConfig};
use mcrt::Topology;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mcrt", version, about = "Mated-CRT map sampling, embedding, and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonFlags {
    /// Flat key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling parameter in (0, 2).
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of grid cells (vertices).
    #[arg(long)]
    n: Option<usize>,
    /// disk, plane, or sphere.
    #[arg(long)]
    topology: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Plane embedding horizon.
    #[arg(long)]
    horizon: Option<f64>,
    /// Sphere window margin.
    #[arg(long)]
    delta: Option<f64>,
    /// Solver residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Walks for the exit-law experiment.
    #[arg(long)]
    walks: Option<u64>,
    /// Output directory (one run directory per invocation inside).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cross-check the builder against the quadratic oracle (n <= 500).
    #[arg(long)]
    verify: bool,
}

impl CommonFlags {
    fn into_config(self) -> mcrt::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(file) = &self.config {
            cfg.apply_file(file)?;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = &self.topology {
            cfg.topology = Topology::parse(v)?;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.walks {
            cfg.walks = v;
        }
        if let Some(v) = self.out {
            cfg.out = v;
        }
        cfg.verify |= self.verify;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a correlated Brownian path and write it to disk.
    Sample(CommonFlags),
    /// Build the mated-CRT map (and trace its faces).
    Build(CommonFlags),
    /// Compute the Tutte embedding with CSV/SVG artifacts.
    Embed(CommonFlags),
    /// Run walks to the boundary and compare exit laws.
    Walk(CommonFlags),
    /// Full diagnostics report; nonzero exit on failed checks.
    Diag(CommonFlags),
    /// Run the complete verification suite (slow).
    Repro,
}

fn run() -> mcrt::Result<bool> {
    mcrt::init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Sample(flags) => {
            let report = cmd_sample(&flags.into_config()?)?;
            println!("{}", report.json());
            Ok(true)
        }
        Command::Build(flags) => {
            let report = cmd_build(&flags.into_config()?)?;
            println!("{}", report.json());
            Ok(true)
        }
        Command::Embed(flags) => {
            let report = cmd_embed(&flags.into_config()?)?;
            println!("{}", report.json());
            Ok(true)
        }
        Command::Walk(flags) => {
            let report = cmd_walk(&flags.into_config()?)?;
            println!("{}", report.json());
            Ok(true)
        }
        Command::Diag(flags) => {
            let (report, pass) = cmd_diag(&flags.into_config()?)?;
            println!("{}", report.json());
            Ok(pass)
        }
        Command::Repro => {
            let results = mcrt::repro::run_all(|r| println!("{}", r.line()));
            Ok(results.iter().all(|r| r.pass))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
