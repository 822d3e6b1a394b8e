//! `fplap` — evaluate the fractional p-Laplacian of radial bump
//! profiles, run sweeps and verification reports.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage/validation,
//! 3 non-convergence, 4 I/O.

mod emit;
mod run;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid fraction numerator: {num}"))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid fraction denominator: {den}"))?;
        if d == 0.0 {
            return Err("fraction denominator is zero".into());
        }
        Ok(n / d)
    } else {
        s.parse().map_err(|_| format!("invalid number: {s}"))
    }
}

/// Grid specification `start:stop:count`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| {
                self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
            })
            .collect()
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("grid must be start:stop:count".into());
    }
    let start = parse_real(parts[0])?;
    let stop = parse_real(parts[1])?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("invalid grid count: {}", parts[2]))?;
    if count < 1 {
        return Err("grid count must be >= 1".into());
    }
    Ok(GridSpec { start, stop, count })
}

/// Options shared by every computing subcommand. Precedence:
/// explicit flags > `--config` file > built-in defaults.
#[derive(Debug, Args, Clone)]
pub struct CommonOpts {
    /// Dimension n >= 1
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Order s in (0,1); accepts fractions like 1/3
    #[arg(long, global = true, value_parser = parse_real)]
    pub s: Option<f64>,
    /// Exponent p >= 2
    #[arg(long, global = true, value_parser = parse_real)]
    pub p: Option<f64>,
    /// Normalization constant (default 1)
    #[arg(long = "c-norm", global = true, value_parser = parse_real)]
    pub c_norm: Option<f64>,
    /// Absolute quadrature tolerance (default 1e-10)
    #[arg(long = "abs-tol", global = true, value_parser = parse_real)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance (default 1e-9)
    #[arg(long = "rel-tol", global = true, value_parser = parse_real)]
    pub rel_tol: Option<f64>,
    /// Worker threads for sweeps (default 1)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output format: json or csv
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// JSON config file supplying defaults for the flags above
    #[arg(long, global = true)]
    pub config: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "fplap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the operator of the unit bump at one point
    Eval {
        /// Evaluation abscissa (n = 1)
        #[arg(long, value_parser = parse_real)]
        x: Option<f64>,
        /// Evaluation radius (n >= 2)
        #[arg(long, value_parser = parse_real)]
        r0: Option<f64>,
        /// Method: auto, direct, decomposed, radial, cartesian
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Evaluate over a grid of points/radii
    Sweep {
        /// Grid as start:stop:count
        #[arg(long, value_parser = parse_grid)]
        grid: GridSpec,
    },
    /// Residual and epsilon-split of the boundary-singular identity
    Identity,
    /// Reference closed form at s = 1/2 (p in {2,4,6,8})
    Closedform {
        #[arg(long, value_parser = parse_real)]
        x: f64,
    },
    /// Two-parameter boundary fit of the operator trace
    Singfit {
        /// Largest dyadic level (points x_j = 1 - 2^-j, j = 4..=jmax)
        #[arg(long, default_value_t = 14)]
        jmax: u32,
        /// Add the (1-x)^{1-s} correction column
        #[arg(long)]
        extended: bool,
    },
    /// Relative error of the rho^{-sp} rescaling law
    Scaling {
        #[arg(long, value_parser = parse_real)]
        rho: f64,
        #[arg(long, value_parser = parse_real)]
        x: f64,
    },
    /// Measured barrier chain and boundary-ratio trace
    Hopf {
        #[arg(long, value_parser = parse_real)]
        rho: f64,
    },
    /// Tail-space membership of the half-ball power cusp
    Lsp {
        #[arg(long, value_parser = parse_real)]
        t: f64,
    },
    /// Evaluate by two independent methods and compare
    CompareMethods {
        #[arg(long, value_parser = parse_real)]
        x: Option<f64>,
        #[arg(long, value_parser = parse_real)]
        r0: Option<f64>,
    },
    /// Run the full acceptance suite and print a pass/fail table
    Verify,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(2);
        }
    };
    std::process::exit(run::dispatch(cli));
}
