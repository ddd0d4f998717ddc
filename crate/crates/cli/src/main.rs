use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

mod run;

/// Representation functions and additive basis constructions.
#[derive(Parser, Debug)]
#[command(name = "repbasis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a representation function on a window.
    Compute(ComputeArgs),
    #[command(subcommand)]
    Construct(Construct),
    #[command(subcommand)]
    Check(Check),
    #[command(subcommand)]
    Generate(Generate),
    /// Recover a set from a table of its ordered representation function.
    Reconstruct(ReconstructArgs),
    #[command(subcommand)]
    Search(Search),
    /// Cross-check the fast counting paths against brute force.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Set file (text, or periodic JSON).
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// ordered, unordered or restricted.
    #[arg(long, default_value = "unordered")]
    kind: String,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
    window: Vec<BigInt>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Unique representation basis for the integers.
    Urb {
        #[arg(long)]
        steps: usize,
        /// `log`, `log+K` or `poly:p/q`.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Basis of order h with a prescribed representation function.
    Prescribed {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        steps: usize,
        /// Target function JSON.
        #[arg(long)]
        target: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Unique representation basis for a binary linear form.
    Linform {
        #[arg(long)]
        u1: BigInt,
        #[arg(long)]
        u2: BigInt,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Set file to write; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report to write.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Test the Sidon (or generalized Sidon) property.
    Sidon {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        generalized: bool,
    },
    /// Compare ordered pair counts of two sets beyond their heads.
    Coincide {
        /// Pair JSON; the two sets are synthesized from it.
        #[arg(long, conflicts_with_all = ["left", "right"])]
        pair: Option<PathBuf>,
        /// Periodic set JSON.
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
        #[arg(long)]
        horizon: BigInt,
    },
    /// Check a partition of the nonnegative integers with equal pair counts.
    Sandor(SandorArgs),
}

#[derive(Args, Debug)]
struct SandorArgs {
    #[arg(long = "N", short = 'N')]
    n: usize,
    /// Membership of 0, 1, …, 2N-1 as a string of 0s and 1s.
    #[arg(long)]
    head: String,
    #[arg(long)]
    horizon: usize,
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Materialize a partition up to the horizon.
    Sandor {
        #[command(flatten)]
        args: SandorArgs,
        /// File for A; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// File for the complement.
        #[arg(long)]
        complement: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// Table JSON of kind `ordered`.
    #[arg(long)]
    table: PathBuf,
    /// Order; defaults to the one recorded in the table.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Search {
    /// Bounded-representation basis of Z/mZ.
    Modular {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value_t = 2)]
    order: usize,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
    window: Vec<BigInt>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("repbasis: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
