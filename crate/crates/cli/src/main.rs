use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use seedlex_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout();
    let result = run(cli, &mut std::io::BufReader::new(std::io::stdin()), &mut stdout);
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("seedlex: {e}");
            ExitCode::from(e.exit.code())
        }
    }
}
