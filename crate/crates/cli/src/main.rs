use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rootcont::harness::{estimate_with_certificate, DEFAULT_SAFETY, DEFAULT_SLACK};
use rootcont::io::{parse_scalar, read_polynomial, to_json};
use rootcont::{fuzz_theorem, FuzzConfig, Theorem};
use rootcont_core::alignment::is_epsilon_aligned_with_slack;
use rootcont_core::roots::DEFAULT_CLUSTER_TOL;
use rootcont_core::{
    cluster_roots, delta_aligned, delta_all_roots, delta_zero_root, epsilon_inverse, find_roots, separation,
    FindRootsOptions, RootClusters,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "rootcont", version, about = "Certified perturbation bounds for polynomial roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundMethod {
    ZeroRoot,
    AllRoots,
    Aligned,
}

#[derive(Subcommand)]
enum Command {
    /// All roots of a polynomial.
    Roots {
        poly: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Divide out the factor z - zeta.
    Deflate {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_name = "RE,IM")]
        zeta: String,
    },
    /// Distinct roots and their minimum pairwise distance.
    Separation {
        poly: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Coefficient bound delta(epsilon).
    Bound {
        poly: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum)]
        method: BoundMethod,
    },
    /// Root bound epsilon(delta) for the inverse direction.
    Inverse {
        poly: PathBuf,
        #[arg(long)]
        delta: f64,
    },
    /// Check whether g is epsilon-aligned to f. Exit 1 when not aligned.
    Align {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
    },
    /// Fuzz a theorem against its certificate. Exit 1 on any violation.
    Fuzz {
        poly: PathBuf,
        /// Root radius; for `inverse` this is the coefficient tolerance delta.
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAFETY)]
        safety: f64,
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: f64,
    },
    /// Empirical delta for alignment, compared with the certified one.
    Estimate {
        poly: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct SeparationReport {
    clusters: RootClusters,
    separation: Option<f64>,
    epsilon_max: Option<f64>,
}

#[derive(Serialize)]
struct EstimateReport {
    epsilon: f64,
    certified_delta_sup: f64,
    log10_certified_delta_sup: f64,
    empirical_delta_sup: f64,
    /// `log10(empirical / certified)`; the plain ratio overflows once the
    /// certificate leaves the `f64` range.
    log10_ratio: f64,
    trials_per_level: usize,
    seed: u64,
}

type Failure = Box<dyn std::error::Error>;

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mut status = ExitCode::SUCCESS;
    let out = match cli.command {
        Command::Roots {
            poly,
            tol,
            max_iter,
            seed,
        } => {
            let f = read_polynomial(&poly)?;
            to_json(&find_roots(&f, &FindRootsOptions { max_iter, tol, seed })?)
        }
        Command::Deflate { poly, zeta } => {
            let f = read_polynomial(&poly)?;
            to_json(&f.deflate(parse_scalar(&zeta)?)?)
        }
        Command::Separation { poly, cluster_tol } => {
            let f = read_polynomial(&poly)?;
            let clusters = cluster_roots(&find_roots(&f, &FindRootsOptions::default())?, cluster_tol)?;
            let sep = separation(&clusters).ok();
            to_json(&SeparationReport {
                clusters,
                separation: sep,
                epsilon_max: sep.map(|s| 0.5 * s),
            })
        }
        Command::Bound { poly, epsilon, method } => {
            let f = read_polynomial(&poly)?;
            let cert = match method {
                BoundMethod::ZeroRoot => delta_zero_root(&f, epsilon)?,
                BoundMethod::AllRoots => delta_all_roots(&f, epsilon)?,
                BoundMethod::Aligned => delta_aligned(&f, epsilon)?,
            };
            to_json(&cert)
        }
        Command::Inverse { poly, delta } => to_json(&epsilon_inverse(&read_polynomial(&poly)?, delta)?),
        Command::Align { f, g, epsilon, slack } => {
            let f = read_polynomial(&f)?;
            let g = read_polynomial(&g)?;
            let clusters = cluster_roots(&find_roots(&f, &FindRootsOptions::default())?, DEFAULT_CLUSTER_TOL)?;
            let g_roots = find_roots(&g, &FindRootsOptions::default())?;
            let report = is_epsilon_aligned_with_slack(&clusters, &g_roots, epsilon, slack)?;
            if !report.aligned {
                status = ExitCode::from(1);
            }
            to_json(&report)
        }
        Command::Fuzz {
            poly,
            epsilon,
            theorem,
            trials,
            seed,
            safety,
            slack,
        } => {
            let f = read_polynomial(&poly)?;
            let cfg = FuzzConfig {
                theorem,
                epsilon,
                trials,
                seed,
                safety,
                slack,
            };
            let report = fuzz_theorem(&f, &cfg)?;
            if report.violations > 0 {
                status = ExitCode::from(1);
            }
            to_json(&report)
        }
        Command::Estimate {
            poly,
            epsilon,
            trials,
            seed,
        } => {
            let f = read_polynomial(&poly)?;
            let (cert, empirical) = estimate_with_certificate(&f, epsilon, trials, seed)?;
            to_json(&EstimateReport {
                epsilon: cert.epsilon,
                certified_delta_sup: cert.delta_sup,
                log10_certified_delta_sup: cert.log10_delta_sup,
                empirical_delta_sup: empirical,
                log10_ratio: empirical.log10() - cert.log10_delta_sup,
                trials_per_level: trials,
                seed,
            })
        }
    };
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{out}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(status),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
