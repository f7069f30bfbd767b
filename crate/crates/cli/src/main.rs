mod analyze;
mod args;
mod class;
mod count;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const VERIFICATION_FAILED: u8 = 1;
const USAGE_ERROR: u8 = 2;

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            anyhow::bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match &cli.command {
        Command::Count(a) => count::run(a, cli.threads).map(|()| true),
        Command::Verify(a) => verify::run(a, cli.threads),
        Command::Analyze(a) => analyze::run(a, cli.threads),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(VERIFICATION_FAILED),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
