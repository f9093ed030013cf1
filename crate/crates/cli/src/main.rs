mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "usflab",
    version,
    about = "Uniform spanning trees and forests on weighted networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Grid,
    Torus,
    Canopy,
    GluedCanopy,
    BoostedTree,
    TreeBall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ust,
    WusfTrunc,
    FusfTrunc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated network in the text network format.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Dimension (grid, torus).
        #[arg(long)]
        d: Option<usize>,
        /// Side length (grid, torus).
        #[arg(long)]
        side: Option<usize>,
        /// Height (canopy, glued-canopy).
        #[arg(long)]
        n: Option<usize>,
        /// Base, an integer or `num/den` (canopy).
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        k1: Option<String>,
        #[arg(long)]
        k2: Option<String>,
        /// Radius (boosted-tree, tree-ball).
        #[arg(long)]
        radius: Option<usize>,
        /// Vertex degree (tree-ball).
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Wire the boundary (grid) or the two roots (glued-canopy).
        #[arg(long)]
        wired: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Sample trees or forests of a network and write one file per sample.
    Sample {
        #[arg(long)]
        network: std::path::PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Run a verification suite over the fixture networks in a directory.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "fixtures")]
        fixtures: std::path::PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-component statistics of sampled forests, as CSV.
    Stats {
        #[arg(long)]
        network: std::path::PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        forests: Vec<std::path::PathBuf>,
        /// Largest radius for the end-count columns.
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Walk length for the frequency column.
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = commands::configure_threads() {
        eprintln!("usflab: {e}");
        return ExitCode::from(2);
    }
    let invocation: Vec<String> = std::env::args().collect();
    match commands::run(cli.command, &invocation.join(" ")) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("usflab: {e}");
            ExitCode::from(2)
        }
    }
}
