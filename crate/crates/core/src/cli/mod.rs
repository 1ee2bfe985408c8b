//! Config-driven experiment runner behind the `smallscat` binary.

mod commands;
pub mod config;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub use commands::Run;
pub use config::{ChecksShape, ExperimentConfig, ShapeSpec};
pub use manifest::{CheckOutcome, RunManifest};

use crate::error::{Error, Result};

pub const WORKERS_ENV: &str = "SMALLSCAT_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Capacitance,
    OracleCompare,
    Sweep,
    Synthesize,
    Theorem1,
    Theorem2,
    Checks,
    All,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Capacitance,
        Command::OracleCompare,
        Command::Sweep,
        Command::Synthesize,
        Command::Theorem1,
        Command::Theorem2,
        Command::Checks,
        Command::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Capacitance => "capacitance",
            Command::OracleCompare => "oracle-compare",
            Command::Sweep => "sweep",
            Command::Synthesize => "synthesize",
            Command::Theorem1 => "theorem1",
            Command::Theorem2 => "theorem2",
            Command::Checks => "checks",
            Command::All => "all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Worker count: the flag, then `SMALLSCAT_WORKERS`, then the config value.
pub fn resolve_workers(flag: Option<usize>, env: Option<&str>, config: usize) -> Result<usize> {
    let n = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV} = `{v}` is not a count")))?,
        (None, None) => config,
    };
    if n == 0 {
        return Err(Error::Config("worker count must be positive".into()));
    }
    Ok(n)
}

/// Load the configuration named by `options` and apply the overrides.
pub fn resolve_config(options: &RunOptions) -> Result<ExperimentConfig> {
    let mut config = match &options.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &options.out {
        config.output_dir = out.clone();
    }
    let env = std::env::var(WORKERS_ENV).ok();
    config.workers = resolve_workers(options.workers, env.as_deref(), config.workers)?;
    Ok(config)
}

/// Execute one command and write its artifacts and `MANIFEST`.
pub fn run(command: Command, config: ExperimentConfig) -> Result<RunManifest> {
    let pool = crate::synthesis::thread_pool(config.workers)?;
    pool.install(|| {
        let mut run = Run::new(config)?;
        run.execute(command)?;
        run.finish()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("theorem3".parse::<Command>().is_err());
    }

    #[test]
    fn worker_precedence() {
        assert_eq!(resolve_workers(Some(3), Some("5"), 2).unwrap(), 3);
        assert_eq!(resolve_workers(None, Some("5"), 2).unwrap(), 5);
        assert_eq!(resolve_workers(None, None, 2).unwrap(), 2);
        assert!(resolve_workers(None, Some("many"), 2).is_err());
        assert!(resolve_workers(Some(0), None, 2).is_err());
    }
}
