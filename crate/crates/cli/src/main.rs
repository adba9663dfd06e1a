use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracres_cli::{run, Command, ExitStatus};

/// Nonlocal fractional evolution problems: solve, check hypotheses, verify
/// resolvents, reproduce the worked example.
#[derive(Debug, Parser)]
#[command(name = "fracres", version)]
struct Args {
    command: Command,
    /// INI configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Usage as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(args.command, &args.config, args.out.as_deref()) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Usage as u8)
        }
    }
}
