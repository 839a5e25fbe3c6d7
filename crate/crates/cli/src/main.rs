use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hyperq_core::lang::{self, Diagnostic, RunOptions};

#[derive(Parser)]
#[command(name = "hyperq", version, about = "Run hyperrational sequence programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a program and print its report.
    Run {
        file: PathBuf,
        /// Oracle seed; overrides a `seed` directive.
        #[arg(long)]
        seed: Option<u64>,
        /// Scan horizon; overrides a `horizon` directive.
        #[arg(long)]
        horizon: Option<u64>,
        /// Number of witness indices to print.
        #[arg(long, default_value_t = 10)]
        prefix: usize,
        /// `st` answers are within 10^-D.
        #[arg(long, default_value_t = 6)]
        digits: u32,
        /// Write the decision journal here.
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Replay a journal written by an earlier run.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Parse and name-check a program without running it.
    Check { file: PathBuf },
}

const EXIT_DIAGNOSTICS: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(file: &Path, diagnostics: &[Diagnostic]) {
    let name = file.display().to_string();
    for d in diagnostics {
        eprintln!("{}", d.render(&name));
    }
}

fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { file } => {
            let src = read(&file)?;
            let diagnostics = match lang::parse(&src) {
                Ok(program) => lang::check(&program),
                Err(d) => d,
            };
            emit(&file, &diagnostics);
            Ok(if diagnostics.iter().any(Diagnostic::is_error) { EXIT_DIAGNOSTICS } else { 0 })
        }
        Command::Run { file, seed, horizon, prefix, digits, journal, replay } => {
            let src = read(&file)?;
            let replay = replay.as_deref().map(read).transpose()?;
            let opts = RunOptions { seed, horizon, prefix, digits, replay };
            let out = lang::run_source(&src, &opts);
            print!("{}", out.report);
            emit(&file, &out.diagnostics);
            if let Some(path) = journal {
                std::fs::write(&path, &out.journal).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if out.undecided() {
                EXIT_UNDECIDED
            } else if out.failed() {
                EXIT_DIAGNOSTICS
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hyperq: {e:#}");
            ExitCode::from(EXIT_DIAGNOSTICS)
        }
    }
}
