use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "pascal-adic",
    version,
    about = "Blocks, curves and towers of the Pascal-adic transformation"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output file; `csv` or `json` alone select the format and keep stdout
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Print rationals as exact `num/den` strings
    #[arg(long, global = true)]
    pub exact: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The word B(n,k), or its letters over the level-N0 alphabet
    Word {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        alphabet: Option<u32>,
        #[arg(long, default_value_t = pascal_adic::blocks::DEFAULT_WORD_CAP)]
        cap: u64,
    },
    /// Renormalized ergodic-sum curve of a block
    Curve {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        /// Dyadic observable as JSON; the a/b increments when absent
        #[arg(long)]
        g: Option<PathBuf>,
        /// Evaluate at j/S instead of at every vertex
        #[arg(long)]
        samples: Option<usize>,
    },
    /// The self-affine curve M_p
    Blancmange {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Triangular arrays
    Array {
        #[arg(long, value_enum)]
        kind: commands::ArrayKind,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        m: usize,
        /// Order of the family array
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Orbit of a point under T with its ergodic sums
    Orbit {
        /// Binary expansion such as 0.0110
        #[arg(long)]
        x: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        g: Option<PathBuf>,
        /// How to supply digits beyond those given
        #[arg(long, value_enum, default_value_t = commands::Extend::Bernoulli)]
        extend: commands::Extend,
        /// Digit probability for the Bernoulli extension
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 4096)]
        max_depth: usize,
    },
    /// Rungs of the towers at level n
    Towers {
        #[arg(long)]
        n: u32,
    },
    /// Coefficients of P^g
    Poly {
        #[arg(long)]
        g: PathBuf,
    },
    /// Whether g is cohomologous to a constant, with the transfer function
    Cohomology {
        #[arg(long)]
        g: PathBuf,
    },
    /// The Conway sequence and its increments
    Conway {
        #[arg(long, default_value_t = 64)]
        max: usize,
        /// Check that the increments spell the word triangle
        #[arg(long)]
        verify_concat: bool,
        #[arg(long, default_value_t = 10)]
        lines: u32,
    },
    /// Distances from the block curves to their limit
    Converge {
        #[arg(long)]
        p: String,
        #[arg(long, value_delimiter = ',', default_value = "40,80,160,320")]
        n_list: Vec<u32>,
        #[arg(long)]
        g: Option<PathBuf>,
        /// The grid has 2^bits + 1 points
        #[arg(long, default_value_t = 10)]
        grid_bits: u32,
    },
    /// Data behind the figures
    Figure {
        #[arg(value_enum)]
        name: commands::FigureName,
    },
    /// Run the acceptance suite
    Selftest {
        /// Corrupt one cached binomial coefficient first, e.g. 12,6
        #[arg(long, value_delimiter = ',', num_args = 0..=2, default_missing_value = "12,6")]
        inject_fault: Option<Vec<u64>>,
        /// Show run times
        #[arg(long)]
        timed: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
