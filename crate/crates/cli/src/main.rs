//! `thetaobs`: run the verification suites and the library queries, and
//! emit versioned JSON reports.
//!
//! Exit status: 0 when every check passes, 1 on a failed check, 2 on a
//! usage error, 3 when a check exceeded a capacity limit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thetaobs::report::Report;
use thetaobs::suite::{self, Level, SuiteConfig};

#[derive(Parser)]
#[command(name = "thetaobs", version, about = "Finite theta groups, symplectic modules and obstruction classes")]
struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also print a human-readable table to standard error.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the symplectic module described in a text file.
    Classify {
        /// Module file: a `type d1,...,dg` or `orders m1,...,mr` header and a Gram table.
        file: PathBuf,
    },
    /// Decide the extension class for a type, or the lifting problem for a subgroup.
    Obstruction {
        /// Type D as comma-separated divisors, e.g. `2,2,2`.
        #[arg(long = "type")]
        type_d: String,
        /// Subgroup generators: a `g d seed` header line, then each generator as
        /// a `rows cols modulus` line followed by its rows.
        #[arg(long)]
        subgroup: Option<PathBuf>,
        /// Add the orbit-stabilizer negligibility report for D = (2,...,2).
        #[arg(long)]
        report_negligibility: bool,
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "quick")]
        level: Level,
        /// Record wall times (reports then differ between runs).
        #[arg(long)]
        timing: bool,
        /// Run only these criteria (1-12); repeatable.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=12))]
        criteria: Vec<u8>,
    },
    /// Finite-precision paramodular checks for the type (1^n, 2^k).
    Paramod {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Checks are made modulo 2^this.
        #[arg(long, default_value_t = thetaobs::paramod::DEFAULT_BITS)]
        modulus_exponent: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
}

fn run(cli: &Cli, argv: Vec<String>) -> Report {
    match &cli.command {
        Command::Classify { file } => suite::classify_report(file, argv),
        Command::Obstruction { type_d, subgroup, report_negligibility, seed } => {
            suite::obstruction_report(type_d, subgroup.as_deref(), *report_negligibility, *seed, argv)
        }
        Command::VerifyAll { seed, level, timing, criteria } => {
            let cfg = SuiteConfig { seed: *seed, level: *level, timing: *timing };
            if criteria.is_empty() {
                suite::run_suite(&cfg, argv)
            } else {
                let mut report = Report::new(argv, *seed, Some(level.to_string()));
                for &id in criteria {
                    report.extend(suite::run_criterion(id, &cfg));
                }
                report
            }
        }
        Command::Paramod { n, k, modulus_exponent, trials, seed } => {
            suite::paramod_report(*n, *k, *modulus_exponent, *trials, *seed, argv)
        }
    }
}

fn main() -> ExitCode {
    thetaobs::par::init_from_env();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let report = run(&cli, argv);
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("thetaobs: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{json}"),
    }
    if cli.table {
        eprint!("{}", report.table());
    }
    ExitCode::from(report.exit_code() as u8)
}
