mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Outcome, Settings};

#[derive(Parser, Debug)]
#[command(name = "qcluster", version, about = "Quantum cluster variables checked against quiver Grassmannian counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Maximum number of primes tried while sampling rigid models.
    #[arg(long, global = true, default_value_t = 64)]
    primes: usize,
    /// Work ceiling for a single Grassmannian count.
    #[arg(long, global = true, default_value_t = qcluster::rep::DEFAULT_CEILING)]
    ceiling: u128,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 selects the sequential counting kernel.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Degree bound used when interpolating counting polynomials.
    #[arg(long, global = true, value_enum, default_value_t = Bound::Ambient)]
    bound: Bound,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Bound {
    Ambient,
    Tangent,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutate along a word and report every seed.
    Mutate {
        #[arg(long)]
        quiver: PathBuf,
        /// Comma separated, 1-based, first entry mutated first.
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Recompute each new variable from Grassmannian counts and compare.
    Verify {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Counting polynomial of one quiver Grassmannian.
    Count {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        dims: String,
        #[arg(long)]
        e: String,
        /// Treat the class as non-rigid and look for a refutation.
        #[arg(long)]
        refute: bool,
    },
    /// Rerun a stored reference table.
    Reproduce {
        #[arg(long, value_enum)]
        table: commands::Table,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let settings = Settings {
        primes: c.primes,
        ceiling: c.ceiling,
        seed: c.seed,
        sequential: c.jobs == Some(1),
        tangent: matches!(c.bound, Bound::Tangent),
    };
    #[cfg(feature = "parallel")]
    if let Some(j) = c.jobs {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Mutate { quiver, word } => commands::mutate(quiver, word, &settings),
        Command::Verify { quiver, word } => commands::verify(quiver, word, &settings),
        Command::Count { quiver, dims, e, refute } => commands::count(quiver, dims, e, *refute, &settings),
        Command::Reproduce { table } => commands::reproduce(*table, &settings),
    };
    match result.and_then(|o| emit(o, c.out.as_ref())) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}

fn emit(outcome: Outcome, out: Option<&PathBuf>) -> anyhow::Result<u8> {
    match out {
        Some(path) => std::fs::write(path, &outcome.report)?,
        None => print!("{}", outcome.report),
    }
    Ok(outcome.status)
}
