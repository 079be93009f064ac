use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use mvbell::verify::{self, Suite};
use mvbell::{bell, fdb, Error, MultiIndex, TaylorSeries};

#[derive(Parser)]
#[command(
    name = "mvbell",
    version,
    about = "Exact multivariate Bell polynomials and Faà di Bruno derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print a partial (with --k) or complete Bell polynomial.
    Bell {
        /// Comma-separated multi-index, e.g. "2,1".
        #[arg(long)]
        n: MultiIndex,
        #[arg(long)]
        k: Option<MultiIndex>,
        /// Output dimension; defaults to the length of --k, or 1.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        d2: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Derivatives of f∘g at the center of g, from two series files.
    #[command(group(ArgGroup::new("target").required(true).args(["n", "all"])))]
    Compose {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        n: Option<MultiIndex>,
        /// Every derivative with |n| up to this order.
        #[arg(long)]
        all: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a seeded randomized check suite and print a JSON report.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// One-dimensional partial Bell polynomials, one row per n.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(String, bool), Error> {
    match command {
        Command::Bell { n, k, d2, format } => {
            let d2 = d2.map_or_else(|| k.as_ref().map_or(1, MultiIndex::dim), |d| d as usize);
            let poly = match &k {
                Some(k) => bell::bell_partial_mv(&n, k, d2)?,
                None => bell::bell_complete_mv(&n, d2)?,
            };
            let out = match format {
                Format::Text => poly.to_string(),
                Format::Json => serde_json::to_string(&poly)?,
            };
            Ok((out + "\n", true))
        }
        Command::Compose {
            f,
            g,
            n,
            all,
            format,
        } => {
            let f = read_series(&f)?;
            let g = read_series(&g)?;
            let out = match (n, all) {
                (Some(n), _) => {
                    let v = fdb::fdb_derivative(&f, &g, &n)?;
                    match format {
                        Format::Text => fdb::format_entry(&n, &v) + "\n",
                        Format::Json => fdb::entry_json(&n, &v) + "\n",
                    }
                }
                (None, Some(order)) => {
                    let t = fdb::fdb_all(&f, &g, order)?;
                    match format {
                        Format::Text => t.to_text(),
                        Format::Json => t.to_json() + "\n",
                    }
                }
                (None, None) => unreachable!("clap requires --n or --all"),
            };
            Ok((out, true))
        }
        Command::Verify {
            suite,
            seed,
            trials,
        } => {
            let report = verify::run_suite(suite, seed, trials);
            Ok((serde_json::to_string(&report)? + "\n", report.passed()))
        }
        Command::Table { max_n } => Ok((bell::bell_table(max_n), true)),
    }
}

fn read_series(path: &Path) -> Result<TaylorSeries, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    TaylorSeries::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
