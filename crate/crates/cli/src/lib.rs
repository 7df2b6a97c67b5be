//! Library side of the `cfree` binary, so integration tests and the binary
//! share one dispatcher.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use args::{Cli, Command};
use error::CliResult;

/// Runs a parsed command. Returns whether it succeeded in the sense of the
/// exit code: only `verify` can finish without error and still fail.
pub fn run(cli: &Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    let text = match &cli.command {
        Command::Nc { action } => commands::nc(action)?.render(cli.format),
        Command::Cumulants(a) => commands::cumulants(a)?.render(cli.format),
        Command::Convolve(a) => commands::convolve(a)?.render(cli.format),
        Command::Clt(a) => commands::clt(a)?.render(cli.format),
        Command::PoissonLimit(a) => commands::poisson_limit(a)?.render(cli.format),
        Command::Transforms(a) => commands::transforms(a)?.render(cli.format),
        Command::Density(a) => {
            let d = commands::density(a, cli.format)?;
            output::emit(&d.grid, out)?;
            if let Some(path) = commands::sidecar_path(a.atoms_out.as_deref(), out) {
                output::emit(&d.atoms, Some(&path))?;
            }
            return Ok(true);
        }
        Command::Verify { group } => {
            let report = verify::run(*group);
            output::emit(&report.render(cli.format), out)?;
            return Ok(report.passed());
        }
    };
    output::emit(&text, out)?;
    Ok(true)
}
