//! `ballcover`: certificate-emitting front end for the covering library.
//!
//! Exit codes: 0 when the emitted certificate re-verifies, 1 on a
//! verification failure, 2 on usage or input errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covering_core::Error as CoreError;

use config::{Command, FileConfig, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "ballcover", version, about = "Exact covering certificates for balls and nearly spherical bodies")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON file with default values for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Classify the maximal simplices of A_n* and decide extensibility of the ball.
    BallClass {
        /// Dimension n.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        dim: Option<u8>,
    },
    /// Geometry of A_n*: covering radius, maximal simplices, ball density.
    Anstar {
        /// Dimension n.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        dim: Option<u8>,
    },
    /// Build covering lattices for a nearly spherical body in three dimensions.
    Construct {
        /// Radial body as JSON spherical-harmonic coefficients.
        #[arg(long)]
        body: Option<PathBuf>,
        /// Number of rotations in the scan.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Witness that the ball cannot be enlarged along one simplex pair.
    Witness {
        /// Dimension n.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        dim: Option<u8>,
        /// Index of the ± simplex pair to remove.
        #[arg(long)]
        pair: Option<usize>,
        /// Augmentation size as an exact rational `p/q`.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Nonvanishing certificates for the multiplier coefficients c_l.
    ClCertify {
        /// Highest degree to certify.
        #[arg(long)]
        lmax: Option<u32>,
    },
    /// Zonal multipliers of the 24-vertex measure.
    Zonal {
        /// Highest degree of the spectrum.
        #[arg(long)]
        lmax: Option<u32>,
    },
    /// Re-check a certificate file.
    Verify {
        /// Certificate JSON produced by another subcommand.
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn resolve(cli: Cli) -> anyhow::Result<RunConfig> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut cfg = RunConfig {
        command: Command::Verify,
        dim: file.dim,
        lmax: file.lmax,
        grid: file.grid,
        pair: file.pair,
        eps: file.eps,
        body: file.body,
        certificate: None,
        out: cli.out.or(file.out),
    };
    let dim = |d: Option<u8>, cfg: &RunConfig| d.map(usize::from).or(cfg.dim);
    match cli.command {
        Cmd::BallClass { dim: d } => {
            cfg.command = Command::BallClass;
            cfg.dim = dim(d, &cfg);
        }
        Cmd::Anstar { dim: d } => {
            cfg.command = Command::Anstar;
            cfg.dim = dim(d, &cfg);
        }
        Cmd::Construct { body, grid } => {
            cfg.command = Command::Construct;
            cfg.body = body.or(cfg.body);
            cfg.grid = grid.or(cfg.grid);
        }
        Cmd::Witness { dim: d, pair, eps } => {
            cfg.command = Command::Witness;
            cfg.dim = dim(d, &cfg);
            cfg.pair = pair.or(cfg.pair);
            cfg.eps = eps.or(cfg.eps);
        }
        Cmd::ClCertify { lmax } => {
            cfg.command = Command::ClCertify;
            cfg.lmax = lmax.or(cfg.lmax);
        }
        Cmd::Zonal { lmax } => {
            cfg.command = Command::Zonal;
            cfg.lmax = lmax.or(cfg.lmax);
        }
        Cmd::Verify { certificate } => {
            cfg.command = Command::Verify;
            cfg.certificate = Some(certificate);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Failures of the mathematics map to 1, everything the caller got wrong to 2.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Verification(_) | CoreError::NoWitness(_) | CoreError::Singular) => 1,
        _ => 2,
    }
}

fn run(cfg: &RunConfig) -> anyhow::Result<()> {
    let outcome = commands::run(cfg)?;
    outcome.certificate.verify()?;
    let json = outcome.certificate.to_json();
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &json)?;
            for (p, text) in &outcome.mirrors {
                std::fs::write(p, text)?;
            }
        }
        None if cfg.command != Command::Verify => print!("{json}"),
        None => {}
    }
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    eprintln!("verified");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
