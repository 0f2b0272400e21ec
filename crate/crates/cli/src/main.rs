//! `agppa`: solve linear programs, generate test problems, check candidate solutions.
//!
//! Exit codes: 0 success, 2 unreadable input or invalid arguments, 3 tolerance not reached
//! (a best-effort report is still written).

mod check;
mod generate;
mod io;
mod report;
mod solve;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "agppa", version, about = "Adaptive generalized proximal point LP solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem and report the result.
    Solve(Box<solve::SolveArgs>),
    /// Write a generated problem.
    Generate(generate::GenerateArgs),
    /// Evaluate the KKT residuals of a point.
    Check(check::CheckArgs),
}

pub enum Outcome {
    Success,
    BudgetExhausted,
}

pub enum Failure {
    Input(anyhow::Error),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AGPPA_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve::cmd_solve(a),
        Command::Generate(a) => generate::cmd_generate(a),
        Command::Check(a) => check::cmd_check(a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::BudgetExhausted) => ExitCode::from(3),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
