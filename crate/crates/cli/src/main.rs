mod args;
mod commands;
mod kb;

use std::process::ExitCode;

use clap::Parser;
use kchlint_core::FixOptions;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Kb { action } = &cli.command {
        return commands::kb_command(action, &cli.kb, cli.format);
    }
    let kb = match kb::resolve(&cli.kb) {
        Ok(kb) => kb,
        Err(e) => {
            eprintln!("kchlint: {e:#}");
            return ExitCode::from(commands::ERROR);
        }
    };
    match &cli.command {
        Command::Check { paths } => commands::check(paths, &kb, cli.format, cli.timing),
        Command::Fix { paths, mode, fix_intent } => {
            commands::fix(paths, &kb, *mode, FixOptions { fix_intent: *fix_intent }, cli.format, cli.timing)
        }
        Command::Eval { dataset, fix_intent } => {
            commands::eval(dataset, &kb, FixOptions { fix_intent: *fix_intent }, cli.format, cli.timing)
        }
        Command::Kb { .. } => unreachable!("handled above"),
    }
}
