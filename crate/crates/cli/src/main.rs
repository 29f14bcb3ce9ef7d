use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Walrasian prices and excess/dearth demand auctions for gross-substitute
/// combinatorial auctions.
///
/// Exit codes: 0 ok, 1 usage or input error, 2 auction contract violation,
/// 3 check failure.
#[derive(Debug, Parser)]
#[command(name = "walras", version)]
pub struct Cli {
    /// Output format. `csv` is accepted by `unitdemand` only.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for grid sweeps. Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct PriceArg {
    /// Price vector, e.g. `1,0`.
    #[arg(long, value_parser = parse_price)]
    pub price: walras::PriceVector,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check normalization and monotonicity; report Vmax and the grid bound.
    Validate { file: PathBuf },
    /// Demanded bundles of each bidder at a price.
    Demand {
        file: PathBuf,
        #[command(flatten)]
        price: PriceArg,
        #[arg(long)]
        bidder: Option<usize>,
    },
    /// Requirement, redundant and OD/WOD/UD/WUD flags.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        price: PriceArg,
        /// A single set such as `{a,b}`.
        #[arg(long, value_parser = parse_set)]
        set: Option<walras::ItemSet>,
        /// List every set in the class (OD, WOD, UD, WUD).
        #[arg(long)]
        class: Option<String>,
    },
    /// Exhaustive gross-substitute check per bidder.
    GsCheck {
        file: PathBuf,
        #[arg(long)]
        bidder: Option<usize>,
        /// Largest m the exhaustive check accepts.
        #[arg(long, default_value_t = walras::demand::DEFAULT_GS_CHECK_CAP)]
        cap: usize,
        /// Also search for the non-gross-substitute demand configuration.
        #[arg(long)]
        search: bool,
    },
    /// The Lyapunov value at a price, optionally with a one-step prediction.
    Lyapunov {
        file: PathBuf,
        #[command(flatten)]
        price: PriceArg,
        #[arg(long, value_parser = parse_set)]
        raise: Option<walras::ItemSet>,
        #[arg(long, value_parser = parse_set)]
        lower: Option<walras::ItemSet>,
    },
    /// Minimum and minimizers of the Lyapunov function on the grid.
    LyapunovMin { file: PathBuf },
    /// Walrasian / minimum / maximum verdict from set classifications.
    Characterize {
        file: PathBuf,
        #[command(flatten)]
        price: PriceArg,
        /// Skip the gross-substitute premise check.
        #[arg(long)]
        force: bool,
    },
    /// Maximum welfare, the Walrasian set and its extremes.
    Equilibrium { file: PathBuf },
    /// Run the ascending or descending auction.
    Auction {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::Asc)]
        direction: DirectionArg,
        /// minimal-minimizer, maximal-minimizer, lex-first, random, largest, uniform.
        #[arg(long, default_value = "minimizer")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the premise check and record contract breaches instead of aborting.
        #[arg(long)]
        unchecked: bool,
        /// Also write the JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Unit-demand vocabulary next to the general set classes.
    Unitdemand {
        file: PathBuf,
        #[command(flatten)]
        price: PriceArg,
    },
    /// Run every verification suite over the price grid.
    Selftest {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        pair_sample: usize,
        #[arg(long, default_value_t = 0x5eed)]
        sample_seed: u64,
    },
    /// Seeded random instance of additive and unit-demand bidders.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_value: u64,
        /// additive, unit-demand or mixed.
        #[arg(long, default_value = "mixed")]
        mix: String,
        #[arg(long)]
        seed: u64,
        /// Run the exhaustive gross-substitute check on the result.
        #[arg(long)]
        verify: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Asc,
    Desc,
}

fn parse_price(text: &str) -> Result<walras::PriceVector, String> {
    walras::PriceVector::parse(text)
}

fn parse_set(text: &str) -> Result<walras::ItemSet, String> {
    text.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(commands::EXIT_USAGE),
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(msg) = set_jobs(jobs) {
            eprintln!("error: {msg}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    }
    ExitCode::from(commands::run(&cli))
}

#[cfg(feature = "parallel")]
fn set_jobs(jobs: usize) -> Result<(), String> {
    if jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(jobs: usize) -> Result<(), String> {
    if jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_sets_and_prices() {
        let cli = Cli::try_parse_from(["walras", "classify", "f.json", "--price", "1,0", "--set", "{a,b}"]).unwrap();
        match cli.command {
            Command::Classify { price, set, .. } => {
                assert_eq!(price.price, walras::PriceVector::new(vec![1, 0]));
                assert_eq!(set, Some(walras::ItemSet::from_items([0, 1])));
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["walras", "demand", "f.json", "--price", "x"]).is_err());
    }
}
