//! `nlho`: command-line interface for the position-dependent-mass
//! nonlinear oscillator toolkit.
//!
//! Exit codes: 0 success, 1 usage/config/domain error, 2 tolerance breach,
//! 3 internal numerical failure.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use nlho::error::Error;

use config::{parse_file, parse_format, parse_tol_flag, RawConfig};

const AFTER_HELP: &str = "\
Exit codes: 0 success; 1 usage, config, or domain error; 2 tolerance breach;\n\
3 internal numerical failure.\n\n\
Defaults: m = omega = hbar = 1, lambda = 0.1. Config files use flat\n\
key=value lines (lambda, mass, omega, hbar, grid_n, grid_l, format, out,\n\
tol.NAME) or a JSON object with the same keys; flags override file values.";

#[derive(Parser)]
#[command(name = "nlho", version, about = "Nonlinear oscillator spectra, orbits, and coherent states", after_help = AFTER_HELP)]
struct Cli {
    /// Config file (flat key=value or JSON)
    #[arg(global = true, long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Deformation strength (> 0 deforms; 0 is the harmonic oscillator)
    #[arg(global = true, long, allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// Particle mass
    #[arg(global = true, long)]
    mass: Option<f64>,

    /// Oscillator frequency
    #[arg(global = true, long)]
    omega: Option<f64>,

    /// Planck constant
    #[arg(global = true, long)]
    hbar: Option<f64>,

    /// Grid points for finite-difference oracles
    #[arg(global = true, long, value_name = "INT")]
    grid_n: Option<usize>,

    /// Grid half-width in the canonical coordinate
    #[arg(global = true, long, value_name = "LENGTH")]
    grid_l: Option<f64>,

    /// Output format
    #[arg(global = true, long, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Write the primary document here instead of stdout
    #[arg(global = true, long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Override a named tolerance (repeatable)
    #[arg(global = true, long, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state energies against the finite-difference oracle
    Spectrum,
    /// Closed-form eigenfunction next to the oracle eigenvector
    Wavefunction {
        /// Level index n
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// Integrate an orbit and compare its period with the closed form
    Classical {
        /// Turning-point amplitude
        #[arg(long, allow_negative_numbers = true)]
        amplitude: f64,
        /// Number of periods to integrate
        #[arg(long, default_value_t = 30)]
        periods: usize,
    },
    /// Coherent states: 1 displaced Gaussian, 2 deformed number basis,
    /// 3 generalized displacement of the factorization ground state
    Coherent {
        /// Family type
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=3))]
        kind: u8,
        /// Label real part
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        re: f64,
        /// Label imaginary part
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        /// Basis dimension (type 2 only)
        #[arg(long, default_value_t = 40)]
        dim: usize,
    },
    /// Phase-space and operator complexifier criteria (exits 2: the
    /// operator series clause fails by construction; see the report)
    ComplexifierCheck,
    /// Run the full acceptance suite and print a structured report
    Validate,
}

fn flag_overrides(cli: &Cli) -> Result<RawConfig, String> {
    let format = match &cli.format {
        Some(s) => Some(parse_format(s)?),
        None => None,
    };
    let mut tol = BTreeMap::new();
    for spec in &cli.tol {
        let (name, value) = parse_tol_flag(spec)?;
        tol.insert(name, value);
    }
    Ok(RawConfig {
        lambda: cli.lambda,
        mass: cli.mass,
        omega: cli.omega,
        hbar: cli.hbar,
        grid_n: cli.grid_n,
        grid_l: cli.grid_l,
        format,
        out: cli.out.clone(),
        tol,
    })
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let file = match &cli.config {
        Some(path) => match parse_file(path) {
            Ok(raw) => raw,
            Err(msg) => {
                eprintln!("config error: {msg}");
                return 1;
            }
        },
        None => RawConfig::default(),
    };
    let flags = match flag_overrides(&cli) {
        Ok(raw) => raw,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return 1;
        }
    };
    let mut merged = file.merged_with(flags);
    // The report commands emit a structured report; their natural document
    // is JSON unless a format was explicitly chosen.
    if merged.format.is_none()
        && matches!(cli.command, Command::Validate | Command::ComplexifierCheck)
    {
        merged.format = Some(config::Format::Json);
    }
    let cfg = match merged.resolve() {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return 1;
        }
    };

    let result = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Wavefunction { level } => commands::wavefunction(&cfg, level),
        Command::Classical { amplitude, periods } => {
            commands::classical(&cfg, amplitude, periods)
        }
        Command::Coherent { kind, re, im, dim } => {
            commands::coherent(&cfg, kind, Complex64::new(re, im), dim)
        }
        Command::ComplexifierCheck => commands::complexifier_check(&cfg),
        Command::Validate => commands::validate(&cfg),
    };
    match result {
        Ok(code) => code,
        Err(e @ Error::Domain(_)) => {
            eprintln!("{e}");
            1
        }
        Err(e @ Error::Numerical(_)) => {
            eprintln!("{e}");
            3
        }
    }
}

fn main() {
    std::process::exit(run());
}
