//! Command-line front end: `actin`, `graph`, `swarm` and `replay`.
//!
//! Every run writes its outputs and a `manifest.json` into one directory.
//! The manifest holds the fully resolved configuration and a SHA-256 per
//! output, so `replay` can re-run it and compare bytes.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime or I/O error.

mod actin_cmd;
mod graph_cmd;
pub mod manifest;
mod replay;
mod swarm_cmd;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use actin_cmd::ActinSettings;
pub use graph_cmd::GraphSettings;
pub use manifest::RunManifest;
pub use replay::{replay, ReplayReport};
pub use swarm_cmd::{load_config, SwarmSettings, SwarmSummary};

/// Variable naming the default output directory.
pub const OUT_ENV: &str = "SLIMEBENCH_OUT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "slimebench",
    version,
    about = "Excitable actin automaton, proximity graphs and a virtual plasmodium swarm",
    after_help = "Every run writes its outputs and manifest.json into the --out directory \
                  (default: $SLIMEBENCH_OUT). Exit codes: 0 ok, 1 usage error, 2 runtime or I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the two-chain excitable automaton and detect localizations
    Actin(actin_cmd::ActinArgs),
    /// Build a proximity graph from a point file, or a random reference graph
    Graph(graph_cmd::GraphArgs),
    /// Run the agent swarm on a lattice with stimulus nodes
    Swarm(swarm_cmd::SwarmArgs),
    /// Re-run a recorded run and compare its outputs byte for byte
    Replay(replay::ReplayArgs),
}

/// Output location and seed fan-out shared by the simulation commands.
#[derive(Debug, Clone, Args)]
pub(crate) struct RunArgs {
    /// Output directory (created if missing)
    #[arg(long, env = OUT_ENV, value_name = "DIR")]
    out: PathBuf,
    /// Run several seeds, each into DIR/seed-<s>/; a comma list or a range `a..b`
    #[arg(long, value_name = "LIST", conflicts_with = "seed")]
    seeds: Option<String>,
    /// Worker threads used with --seeds
    #[arg(long, default_value_t = 1, value_name = "N")]
    jobs: usize,
}

pub(crate) fn parse_seed_list(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("--seeds: expected `a,b,c` or `a..b`, got {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a >= b {
            return Err(bad());
        }
        return Ok((a..b).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

/// Runs `job` once into `out`, or once per seed of `--seeds` into
/// `out/seed-<s>/` on `jobs` threads.
pub(crate) fn fan_out<F>(run: &RunArgs, seed: u64, job: F) -> Result<Vec<PathBuf>, CliError>
where
    F: Fn(u64, &Path) -> Result<PathBuf, CliError> + Sync,
{
    let Some(list) = &run.seeds else {
        return Ok(vec![job(seed, &run.out)?]);
    };
    let seeds = parse_seed_list(list)?;
    if run.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.jobs)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(|| {
        use rayon::prelude::*;
        seeds
            .par_iter()
            .map(|&s| job(s, &run.out.join(format!("seed-{s}"))))
            .collect()
    })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.exit_code() == 0 { 0 } else { 1 };
        }
    };
    let result = match cli.command {
        Command::Actin(a) => actin_cmd::command(a),
        Command::Graph(a) => graph_cmd::command(a),
        Command::Swarm(a) => swarm_cmd::command(a),
        Command::Replay(a) => return replay::command(a),
    };
    match result {
        Ok(manifests) => {
            for m in manifests {
                println!("{}", m.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seed_list("3..6").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_seed_list("1, 9,2").unwrap(), vec![1, 9, 2]);
        assert!(parse_seed_list("5..5").is_err());
        assert!(parse_seed_list("x").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["slimebench", "frobnicate"]), 1);
        assert_eq!(run(["slimebench", "actin", "--no-such-flag"]), 1);
        assert_eq!(run(["slimebench", "--help"]), 0);
        assert_eq!(run(["slimebench", "actin", "--help"]), 0);
    }
}
