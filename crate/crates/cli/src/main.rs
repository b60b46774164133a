//! `hankel-schmidt`: analyze rational symbols, run the seeded verification
//! suites, and apply Möbius conjugation or Frostman shifts from the shell.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hankel_schmidt::report::{self, exit, AnalysisConfig};
use hankel_schmidt::{BlaschkeProduct, Error, RationalSymbol};
use num_complex::Complex;

#[derive(Parser)]
#[command(name = "hankel-schmidt", version, about = "Schmidt subspaces of Hankel operators with rational symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose H_u and extract (p, θ, φ) for every Schmidt block.
    Analyze {
        symbol: PathBuf,
        /// Truncation order (power of two, 16..=1024).
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        grid_oversample: usize,
        #[arg(long, default_value_t = 1e-8)]
        cluster_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        verify_tol: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded identity and lemma suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add EPS to Γ[0][1] in the identity suite.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb: f64,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of the Möbius-conjugated symbol w = −S*((Su)∘μ).
    Conjugate {
        symbol: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex<f64>,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frostman shift (θ_α, g_α) of a Blaschke product.
    Frostman {
        blaschke: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex<f64>,
        /// Number of Taylor coefficients of g_α to emit.
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got `{s}`"))?;
    let part = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(Complex::new(part(re)?, part(im)?))
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Analyze { symbol, n, grid_oversample, cluster_tol, verify_tol, out } => {
            let sym = RationalSymbol::from_json(&read(&symbol)?)?;
            let config = AnalysisConfig { n, grid_oversample, cluster_tol, verify_tol, ..Default::default() };
            let r = report::run_analyze(&sym, &config)?;
            emit(&r, out.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Verify { seed, perturb, n, out } => {
            let config = AnalysisConfig { n, seed, ..Default::default() };
            let r = report::run_verify(&config, perturb)?;
            emit(&r, out.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Conjugate { symbol, alpha, n, out } => {
            AnalysisConfig { n, ..Default::default() }.validate()?;
            let sym = RationalSymbol::from_json(&read(&symbol)?)?;
            emit(&report::run_conjugate(&sym, alpha, n, 2)?, out.as_deref())?;
            Ok(exit::PASS)
        }
        Command::Frostman { blaschke, alpha, n, out } => {
            let theta = BlaschkeProduct::from_json(&read(&blaschke)?)?;
            emit(&report::run_frostman(&theta, alpha, n)?, out.as_deref())?;
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
