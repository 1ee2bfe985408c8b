use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use smallscat::cli::{resolve_config, run, Command, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Capacitance,
    OracleCompare,
    Sweep,
    Synthesize,
    Theorem1,
    Theorem2,
    Checks,
    All,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Capacitance => Command::Capacitance,
            Sub::OracleCompare => Command::OracleCompare,
            Sub::Sweep => Command::Sweep,
            Sub::Synthesize => Command::Synthesize,
            Sub::Theorem1 => Command::Theorem1,
            Sub::Theorem2 => Command::Theorem2,
            Sub::Checks => Command::Checks,
            Sub::All => Command::All,
        }
    }
}

/// Small-obstacle wave scattering experiments.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// Flat key = value configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads, overriding SMALLSCAT_WORKERS and `workers`.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let options = RunOptions {
        config: args.config,
        out: args.out,
        workers: args.workers,
    };
    let result = resolve_config(&options).and_then(|config| run(args.command.into(), config));
    match result {
        Ok(manifest) if manifest.all_passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
