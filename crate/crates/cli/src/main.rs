//! `razavy`: spectra and Heun-machinery reports for the Razavy bistable
//! potential. Exit codes: 0 success, 1 usage error, 2 numeric failure,
//! 3 reference-table mismatches (table1 only).

use clap::error::ErrorKind;
use clap::Parser;

use razavy_cli::args::{Cli, Command};
use razavy_cli::commands::{self, RunConfig};
use razavy_cli::CliError;

fn run() -> Result<i32, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(0);
            }
            // keep clap's usage text, then one machine-parsable line
            eprint!("{e}");
            return Err(CliError::Usage("invalid arguments".into()));
        }
    };
    match cli.command {
        Command::Solve(common) => {
            let cfg = RunConfig::merge(&common, None, None, None)?;
            commands::cmd_solve(&cfg)
        }
        Command::Table1(common) => {
            let cfg = RunConfig::merge(&common, None, None, None)?;
            commands::cmd_table1(&cfg)
        }
        Command::Potential(common) => {
            let cfg = RunConfig::merge(&common, None, None, None)?;
            commands::cmd_potential(&cfg)
        }
        Command::Wavefunction(common) => {
            let cfg = RunConfig::merge(&common, None, None, None)?;
            commands::cmd_wavefunction(&cfg)
        }
        Command::Heun(args) => {
            let cfg = RunConfig::merge(&args.common, args.z, args.eps, None)?;
            commands::cmd_heun(&cfg)
        }
        Command::CheckTermination(args) => {
            let cfg = RunConfig::merge(&args.common, None, None, args.n_max)?;
            commands::cmd_check_termination(&cfg)
        }
    }
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
