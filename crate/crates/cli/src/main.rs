mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Output;
use config::Opts;
use error::CliError;

/// Symmetry classification, adjoint action and invariant reductions of the
/// damped nonlinear Timoshenko beam.
#[derive(Parser)]
#[command(name = "beamsym", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Assign an element of the symmetry algebra to its optimal-system class
    Classify(Opts),
    /// Composed adjoint matrix for eight group parameters
    Adjoint(Opts),
    /// Apply the composed group action to an exact base solution and sample it
    Transform(Opts),
    /// Residual and convergence of an example, a base solution or a grid file
    Verify(Opts),
    /// Solve, lift and check one invariant reduction
    Reduce(Opts),
    /// Dump the reduction catalog
    Catalog(Opts),
}

/// Run a command; the report goes to `--out` unless the command writes that
/// path itself.
fn run(cmd: Cmd) -> Result<(String, Option<PathBuf>), CliError> {
    let (out, o) = match cmd {
        Cmd::Classify(o) => {
            let o = o.resolve()?;
            (commands::classify_cmd(&o)?, o.out)
        }
        Cmd::Adjoint(o) => {
            let o = o.resolve()?;
            (commands::adjoint_cmd(&o)?, o.out)
        }
        Cmd::Transform(o) => (commands::transform_cmd(&o.resolve()?)?, None),
        Cmd::Verify(o) => {
            let o = o.resolve()?;
            (commands::verify_cmd(&o)?, o.out)
        }
        Cmd::Reduce(o) => {
            let o = o.resolve()?;
            (commands::reduce_cmd(&o)?, o.out)
        }
        Cmd::Catalog(o) => (commands::catalog_cmd()?, o.resolve()?.out),
    };
    let text = match out {
        Output::Json(v) => output::to_json(&v).map_err(|e| CliError::Output(e.to_string()))?,
        Output::Text(s) => s,
    };
    Ok((text, o))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((s, Some(path))) => match std::fs::write(&path, s) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write `{}`: {e}", path.display());
                ExitCode::from(2)
            }
        },
        Ok((s, None)) => {
            if std::io::stdout().lock().write_all(s.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
