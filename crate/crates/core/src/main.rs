use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use gwkit::cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = RunConfig::from_args(kind, args).and_then(|config| run(&config, &mut out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            let message = e.to_string().replace(['\n', '\r'], " ");
            eprintln!("error kind={} message={:?}", e.kind(), message);
            ExitCode::FAILURE
        }
    }
}
