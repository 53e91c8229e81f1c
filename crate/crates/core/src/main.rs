use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lcac::fuzz::{fuzz, FuzzConfig};
use lcac::immersion::catalog;
use lcac::scenario::run_scenario;

/// Default worker count when --jobs is not given.
const JOBS_ENV: &str = "LCAC_JOBS";

#[derive(Parser)]
#[command(name = "lcac", version, about = "Curvature bounds for submanifolds tangent to the structure field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON scenario and write its report.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Random draws through every identity and bound.
    Fuzz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Force σ = 0 in every draw.
        #[arg(long)]
        zero_sigma: bool,
        /// Skip the θ_k search and the bounds that need it.
        #[arg(long)]
        no_theta_k: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the immersion catalog with parameter ranges.
    Catalog,
}

fn jobs(flag: Option<usize>) -> Result<usize, String> {
    if let Some(j) = flag {
        return Ok(j.max(1));
    }
    match std::env::var(JOBS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .map(|j| j.max(1))
            .map_err(|_| format!("{JOBS_ENV} must be a positive integer, got {v:?}")),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn pool(flag: Option<usize>) -> Result<rayon::ThreadPool, String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(flag)?)
        .build()
        .map_err(|e| e.to_string())
}

fn emit(json: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n")).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{json}").map_err(|e| e.to_string())
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            scenario,
            out,
            seed,
            jobs,
        } => {
            let pool = match pool(jobs) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let report = match pool.install(|| run_scenario(&scenario, seed)) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Err(e) = emit(&json, out.as_ref()) {
                return fail(e);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Fuzz {
            n,
            m,
            trials,
            seed,
            jobs,
            zero_sigma,
            no_theta_k,
            out,
        } => {
            let mut cfg = FuzzConfig::new(n, m, trials, seed);
            cfg.zero_sigma = zero_sigma;
            cfg.theta_k = !no_theta_k;
            let pool = match pool(jobs) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let summary = match pool.install(|| fuzz(&cfg)) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            if let Err(e) = emit(&json, out.as_ref()) {
                return fail(e);
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Command::Catalog => {
            let json = serde_json::to_string_pretty(&catalog()).expect("catalog serializes");
            match emit(&json, None) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
    }
}
