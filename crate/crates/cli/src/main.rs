mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use starq_core::StarError;

use cli::{Cli, Command};

const PARSE: u8 = 2;
const OBSTRUCTION: u8 = 3;
const INTERNAL: u8 = 4;
const OTHER: u8 = 1;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<StarError>() {
        Some(
            StarError::Parse(_)
            | StarError::Config(_)
            | StarError::Serde(_)
            | StarError::MalformedTerm(_)
            | StarError::IndexOutOfRange(_)
            | StarError::MissingPotential(_),
        ) => PARSE,
        Some(StarError::ObstructionNonzero { .. } | StarError::Infeasible { .. }) => OBSTRUCTION,
        Some(StarError::Grading { .. } | StarError::NotCocycle { .. }) => INTERNAL,
        Some(StarError::ArityMismatch { .. } | StarError::MissingLevel(_)) => PARSE,
        None => OTHER,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    match &cli.command {
        Command::Construct(a) => commands::construct_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::Jacobi(a) => commands::jacobi_cmd(a),
        Command::Obstruction(a) => commands::obstruction_cmd(a),
        Command::OpoCheck(a) => commands::opo_check_cmd(a),
        Command::ExportLatex(a) => commands::export_latex_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
