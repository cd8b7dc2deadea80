//! `obtuse`: bounds, sphere probabilities, Monte Carlo estimates and
//! configuration search for obtuse triangles.

mod commands;
mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "obtuse", version, about = "Counting and probability bounds for obtuse triangles")]
struct Cli {
    /// Worker threads for Monte Carlo shards and search restarts.
    #[arg(long, global = true, env = "OBTUSE_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forced fraction of non-acute triples as n grows.
    Bound(commands::BoundArgs),
    /// Limit bounds for a range of dimensions.
    Table(commands::TableArgs),
    /// Obtuse probability for uniform points on a sphere.
    Sphere(commands::SphereArgs),
    /// Monte Carlo estimate for a distribution read from JSON.
    Mc(commands::McArgs),
    /// Acute probability of the nested construction as a function of p.
    Fixedpoint(commands::FixedPointArgs),
    /// Anneal an n-point configuration to minimise bad triangles.
    Search(commands::SearchArgs),
    /// Count triangle classes of a configuration, exactly when possible.
    Enumerate(commands::EnumerateArgs),
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; drawn from entropy and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Write the result here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(rand::random)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] obtuse_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(e) if e.is_invariant() => 4,
            _ => 2,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Write `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    let run = match cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Table(a) => commands::table(a),
        Command::Sphere(a) => commands::sphere(a, workers),
        Command::Mc(a) => commands::mc(a, workers),
        Command::Fixedpoint(a) => commands::fixedpoint(a),
        Command::Search(a) => commands::search(a, workers),
        Command::Enumerate(a) => commands::enumerate(a),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
