mod commands;
mod pretty;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Analysis of triangular line arrangements defined by roots of unity.
#[derive(Parser, Debug)]
#[command(name = "triarr", version, about)]
struct Cli {
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for an arrangement file: combinatorics, c2, freeness, restrictions.
    Analyze {
        input: PathBuf,
        /// Number of prime fields to classify over.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
        primes: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Realize a combinatorics file as a root-of-unity arrangement.
    Realize {
        input: PathBuf,
        /// Sampling seed; defaults to TRIARR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Deleted lines and their triple points relative to the full monomial arrangement.
    Complement {
        input: PathBuf,
        /// Ambient order; defaults to the arrangement's modulus.
        #[arg(long = "N", value_name = "N")]
        big_n: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Prediction against the oracle for every sub-arrangement of the full monomial one.
    Enumerate {
        #[arg(long = "N", value_name = "N", value_parser = clap::value_parser!(u64).range(1..=6))]
        big_n: u64,
        #[arg(long, value_enum, default_value_t = SideSets::All)]
        sides: SideSets,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
        primes: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Rebuild and check the free / nearly free pair with equal weak combinatorics.
    #[command(name = "repro-pair", visible_alias = "repro-section6")]
    ReproPair {
        /// Check the member of the `(2k+1, 2k+1, 2k+1)` family instead.
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=4))]
        family: Option<u64>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
        primes: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Saito certificate at the given degrees.
    Certify {
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["E1", "E2"], required = true)]
        exponents: Vec<usize>,
        /// Prime p ≡ 1 (mod n); defaults to the first certification field.
        #[arg(long)]
        prime: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideSets {
    /// Only arrangements containing all three sides.
    All,
    /// Every side subset.
    Subsets,
}

/// Exit statuses, part of the command-line contract.
#[derive(Debug)]
pub enum Failure {
    Malformed(String),
    Invariant(String),
    Forced,
    Exhausted(String),
    NoCertificate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Forced => 4,
            Failure::Exhausted(_) => 5,
            Failure::NoCertificate(_) => 6,
        }
    }
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("TRIARR_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Malformed(format!("TRIARR_SEED must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Analyze { input, primes, output } => commands::analyze(&input, primes as usize, pretty, output.out),
        Command::Realize { input, seed, output } => {
            let seed = match seed {
                Some(s) => s,
                None => seed_from_env()?,
            };
            commands::realize(&input, seed, output.out)
        }
        Command::Complement { input, big_n, output } => commands::complement(&input, big_n, pretty, output.out),
        Command::Enumerate {
            big_n,
            sides,
            primes,
            output,
        } => commands::enumerate(big_n, sides == SideSets::Subsets, primes as usize, pretty, output.out),
        Command::ReproPair { family, primes, output } => {
            commands::repro_pair(family.map(|k| k as usize), primes as usize, pretty, output.out)
        }
        Command::Certify {
            input,
            exponents,
            prime,
            output,
        } => commands::certify(&input, (exponents[0], exponents[1]), prime, pretty, output.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli));
    let failure = match outcome {
        Ok(Ok(())) => return ExitCode::SUCCESS,
        Ok(Err(f)) => f,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Failure::Invariant(msg)
        }
    };
    match &failure {
        Failure::Malformed(m) => eprintln!("error: malformed input: {m}"),
        Failure::Invariant(m) => {
            let dump = serde_json::json!({ "error": "invariant violation", "detail": m });
            eprintln!("{dump}");
        }
        Failure::Forced => eprintln!("error: the combinatorics force extra relations"),
        Failure::Exhausted(m) | Failure::NoCertificate(m) => eprintln!("error: {m}"),
    }
    ExitCode::from(failure.code())
}
