mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tetromino", version, about = "T-tetromino tilings, the Potts partition function and Baxter's entropy")]
pub struct Cli {
    /// Emit a JSON document instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for commands that draw random inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Maximum number of worker threads.
    #[arg(long, global = true, value_parser = positive)]
    pub threads: Option<usize>,

    /// Numerical tolerance for the entropy commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count or list tilings of the 4m x 4n rectangle.
    #[command(subcommand)]
    Tile(TileCommand),
    /// Evaluate the tiling generating function.
    #[command(subcommand)]
    Genfun(GenfunCommand),
    /// Group tilings into edge-subset classes.
    #[command(subcommand)]
    Cycles(CyclesCommand),
    /// Potts partition function and Tutte polynomial.
    #[command(subcommand)]
    Tutte(TutteCommand),
    /// Check the tiling / Potts identity on a grid.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Baxter entropy and finite-size estimates.
    #[command(subcommand)]
    Entropy(EntropyCommand),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Dims {
    #[arg(long, value_parser = positive)]
    pub m: usize,
    #[arg(long, value_parser = positive)]
    pub n: usize,
}

impl Dims {
    pub fn get(self) -> (usize, usize) {
        (self.m, self.n)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Complex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Subset,
    Delcon,
    Transfer,
    Auto,
}

#[derive(Subcommand, Debug)]
pub enum TileCommand {
    Count {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_enum, default_value = "on")]
        pruning: OnOff,
    },
    /// Stream tilings as JSON lines.
    Enumerate {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_enum, default_value = "on")]
        pruning: OnOff,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenfunCommand {
    Eval {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum CyclesCommand {
    Classes {
        #[command(flatten)]
        dims: Dims,
        /// Output file for JSON-lines class records; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TutteCommand {
    /// Z_G(Q, v) for a graph given as JSON.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "Q")]
        q: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Classical Tutte polynomial of the m x n grid graph.
    Classical {
        #[arg(long, num_args = 2, value_names = ["M", "N"], value_parser = positive)]
        grid: Vec<usize>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    Identity {
        #[command(flatten)]
        dims: Dims,
        /// `P/Q` (a rational fourth power) or `complex:MU` for q = e^{i MU}.
        #[arg(long)]
        q: String,
        /// `uniform:VALUE`, `random`, or a JSON file holding one value per edge.
        #[arg(long, default_value = "uniform:1")]
        x: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

#[derive(Subcommand, Debug)]
pub enum EntropyCommand {
    Baxter {
        #[arg(long = "Q")]
        q: f64,
    },
    FiniteSize {
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=10))]
        max_size: u64,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(commands::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
