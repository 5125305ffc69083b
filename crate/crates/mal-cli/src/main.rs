//! `mal`: verify Rademacher families, compute dyadic measures, Haar tables,
//! integrals and probability-space representations from the command line.
//!
//! Exit codes: 0 pass, 1 property failure, 2 parse or usage error,
//! 3 enumeration budget exceeded, 4 I/O error.

mod commands;
mod config;

use clap::Parser;
use config::Cli;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CliError;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(mal::Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(mal::Error::BudgetExceeded { requested: 9, cap: 1 }).exit_code(), 3);
        assert_eq!(CliError::Io { path: "p".into(), message: "m".into() }.exit_code(), 4);
        assert_eq!(CliError::from(mal::Error::FamilyDefect("x".into())).exit_code(), 1);
    }
}
