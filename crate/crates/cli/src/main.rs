//! Command-line front end for `tensor-spectra`.

mod campaign;
mod commands;
mod error;
mod manifest;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tensor_spectra::{BaseDistribution, TauRule};

#[derive(Parser)]
#[command(name = "tensor-spectra", version, about = "Spectral moments of tensor-product sample covariance matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the counting identities by brute force up to order p-max.
    Verify {
        #[arg(long)]
        p_max: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limiting moments, their polynomials and the Carleman diagnostic.
    Moments {
        #[arg(long)]
        p_max: usize,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        m4: f64,
        /// const:a, list:a,b,... or twopoint:a,b
        #[arg(long, default_value = "const:1")]
        tau: TauRule,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact finite-size mean (and optionally variance) of n^-k Tr M^p.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value = "complex-gaussian")]
        dist: BaseDistribution,
        #[arg(long, default_value = "const:1")]
        tau: TauRule,
        #[arg(long)]
        variance: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo campaign described by a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Join simulation CSVs into one convergence table.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { p_max, out } => commands::verify(p_max, out.as_deref()),
        Command::Moments { p_max, c, d, m4, tau, out } => commands::moments(p_max, c, d, m4, &tau, out.as_deref()),
        Command::Oracle { n, k, m, p, dist, tau, variance, out } => {
            commands::oracle(n, k, m, p, dist, &tau, variance, out.as_deref())
        }
        Command::Simulate { config, seed, replicas, out } => {
            let out = out.unwrap_or_else(commands::default_out_dir);
            commands::simulate(&config, seed, replicas, &out)
        }
        Command::Report { input, out } => commands::report(&input, &out),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
