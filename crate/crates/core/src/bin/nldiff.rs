use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nldiff::experiment::{run_path, Check};

#[derive(Parser)]
#[command(name = "nldiff", version, about = "Nonlocal diffusion solver and asymptotics checks")]
struct Cli {
    /// Print the available checks and exit.
    #[arg(long)]
    list_checks: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks selected by a config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides `out` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the randomized suites (overrides `seed` in the config).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        let mut out = std::io::stdout().lock();
        for c in Check::ALL {
            let _ = writeln!(out, "{:<18} {}", c.name(), c.description());
        }
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run { config, out, seed }) = cli.command else {
        eprintln!("nothing to do; see `nldiff --help`");
        return ExitCode::from(2);
    };
    match run_path(&config, out, seed) {
        Ok(manifest) => {
            let mut out = std::io::stdout().lock();
            for e in &manifest.entries {
                let _ = writeln!(out, "{:<18} {:<8} {}", e.check.name(), e.status.label(), e.detail);
            }
            ExitCode::from(manifest.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
